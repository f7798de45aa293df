#pragma once
// Dense ground truth: pseudoinverses, exact Hodge projections, ranks,
// Loewner comparisons, principal angles.

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hodge/complex.hpp"

namespace hodge::oracle {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline constexpr std::size_t kDefaultDenseCap = 2000;
inline constexpr double kRankRel = 1e-9;

using LinearMap = std::function<std::vector<double>(std::span<const double>)>;

/// Applies op to every basis vector e_0..e_{n-1}; column j = op(e_j).
Mat materialize(int n_in, const LinearMap& op);

Mat dense_boundary(const Scope& s, int d);

/// Rank with threshold kRankRel * sigma_max.
int rank(const Mat& a);
/// Fraction-free Gaussian elimination over big integers; entries must be integral.
int rank_exact(const Mat& a);
/// Rank-nullity; exact ranks are used when the matrices are at most 300 wide.
int betti(const Scope& s, int d, std::size_t cap = kDefaultDenseCap);

/// Orthogonal projector onto the column space.
Mat range_projector(const Mat& a);
/// Moore-Penrose pseudoinverse (SVD, threshold kRankRel * sigma_max).
Mat pinv(const Mat& a);
Vec sym_eigenvalues(const Mat& a);

struct HodgeParts {
  Vec bd, hr, cbd;
};

/// Dense Hodge data of the 1-chains of a scope.
class HodgeOracle {
 public:
  /// Throws TooLarge when the scope has more simplices than cap.
  explicit HodgeOracle(const Scope& s, std::size_t cap = kDefaultDenseCap);

  HodgeParts split(const Vec& x) const { return {P_bd * x, P_hr * x, P_cbd * x}; }

  Mat d1, d2;  // dense ∂1, ∂2
  Mat P_bd, P_cbd, P_hr, P_cyc;
  Mat L1, L1_up, L1_down;
  Mat L1_pinv, L1_up_pinv, L1_down_pinv;
  int beta1 = 0;
};

HodgeParts exact_hodge(const Scope& s, const Vec& x, std::size_t cap = kDefaultDenseCap);

struct LoewnerReport {
  bool ok = true;
  double min_eig = 0.0;
  double asymmetry = 0.0;
};

/// Checks B - A ⪰ -tol·I. Throws NotSymmetric when A or B is not symmetric to tol.
LoewnerReport loewner_check(const Mat& a, const Mat& b, double tol);

/// Cosines-free principal angles (radians) between column spans.
std::vector<double> principal_angles(const Mat& a, const Mat& b);

/// Largest singular value.
double spectral_norm(const Mat& a);

/// Smallest nonzero / largest eigenvalue of a PSD matrix (threshold kRankRel).
double min_nonzero_eig(const Mat& a);
double max_eig(const Mat& a);

inline Vec to_vec(std::span<const double> v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }
inline std::vector<double> to_std(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace hodge::oracle
