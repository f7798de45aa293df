#include "hodge/oracle.hpp"

#include <algorithm>
#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

#include "hodge/error.hpp"

namespace hodge::oracle {

Mat materialize(int n_in, const LinearMap& op) {
  std::vector<std::vector<double>> cols(n_in);
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < n_in; ++j) {
    std::vector<double> e(n_in, 0.0);
    e[j] = 1.0;
    cols[j] = op(e);
  }
  const Eigen::Index rows = n_in == 0 ? 0 : static_cast<Eigen::Index>(cols[0].size());
  Mat m(rows, n_in);
  for (int j = 0; j < n_in; ++j) m.col(j) = to_vec(cols[j]);
  return m;
}

Mat dense_boundary(const Scope& s, int d) {
  const auto& b = s.boundary(d).matrix();
  Mat m = Mat::Zero(b.rows, b.cols);
  for (int r = 0; r < b.rows; ++r)
    for (int k = b.row_ptr[r]; k < b.row_ptr[r + 1]; ++k) m(r, b.col[k]) = b.val[k];
  return m;
}

int rank(const Mat& a) {
  if (a.size() == 0) return 0;
  Eigen::BDCSVD<Mat> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double thr = kRankRel * s(0);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > thr) ++r;
  return r;
}

int rank_exact(const Mat& a) {
  using boost::multiprecision::cpp_int;
  const int m = static_cast<int>(a.rows()), n = static_cast<int>(a.cols());
  std::vector<std::vector<cpp_int>> q(m, std::vector<cpp_int>(n));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      double v = a(i, j);
      if (v != std::round(v)) throw Error(ErrorCode::InvalidInput, "rank_exact needs an integer matrix");
      q[i][j] = static_cast<long long>(v);
    }
  // Bareiss elimination with row pivoting.
  cpp_int prev = 1;
  int r = 0;
  for (int c = 0; c < n && r < m; ++c) {
    int piv = -1;
    for (int i = r; i < m; ++i)
      if (q[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(q[piv], q[r]);
    for (int i = r + 1; i < m; ++i) {
      for (int j = c + 1; j < n; ++j) q[i][j] = (q[r][c] * q[i][j] - q[i][c] * q[r][j]) / prev;
      q[i][c] = 0;
    }
    prev = q[r][c];
    ++r;
  }
  return r;
}

namespace {

int boundary_rank(const Scope& s, int d) {
  if (d < 1 || d > 3) return 0;
  Mat b = dense_boundary(s, d);
  if (b.size() == 0) return 0;
  if (b.rows() <= 300 && b.cols() <= 300) return rank_exact(b);
  return rank(b);
}

}  // namespace

int betti(const Scope& s, int d, std::size_t cap) {
  std::size_t total = s.count(0) + s.count(1) + s.count(2) + s.count(3);
  if (total > cap) throw Error(ErrorCode::TooLarge, "betti: " + std::to_string(total) + " simplices exceed the dense cap");
  if (d < 0 || d > 3) throw Error(ErrorCode::DimOutOfRange, "betti dimension");
  return static_cast<int>(s.count(d)) - boundary_rank(s, d) - boundary_rank(s, d + 1);
}

Mat range_projector(const Mat& a) {
  if (a.size() == 0) return Mat::Zero(a.rows(), a.rows());
  Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  int r = 0;
  if (s.size() > 0 && s(0) > 0)
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > kRankRel * s(0)) ++r;
  Mat u = svd.matrixU().leftCols(r);
  return u * u.transpose();
}

Mat pinv(const Mat& a) {
  if (a.size() == 0) return Mat::Zero(a.cols(), a.rows());
  Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  Vec inv = Vec::Zero(s.size());
  if (s.size() > 0 && s(0) > 0)
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > kRankRel * s(0)) inv(i) = 1.0 / s(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Vec sym_eigenvalues(const Mat& a) {
  if (a.size() == 0) return Vec();
  Mat s = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

HodgeOracle::HodgeOracle(const Scope& s, std::size_t cap) {
  std::size_t total = s.count(0) + s.count(1) + s.count(2) + s.count(3);
  if (total > cap) throw Error(ErrorCode::TooLarge, "oracle: " + std::to_string(total) + " simplices exceed the dense cap");
  d1 = dense_boundary(s, 1);
  d2 = dense_boundary(s, 2);
  const Eigen::Index n1 = static_cast<Eigen::Index>(s.count(1));
  P_bd = d2.cols() > 0 ? range_projector(d2) : Mat::Zero(n1, n1);
  Mat d1t = d1.transpose();
  P_cbd = d1t.cols() > 0 ? range_projector(d1t) : Mat::Zero(n1, n1);
  P_cyc = Mat::Identity(n1, n1) - P_cbd;
  P_hr = P_cyc - P_bd;
  L1_up = d2 * d2.transpose();
  L1_down = d1t * d1;
  L1 = L1_up + L1_down;
  L1_pinv = pinv(L1);
  L1_up_pinv = pinv(L1_up);
  L1_down_pinv = pinv(L1_down);
  beta1 = static_cast<int>(std::lround(P_hr.trace()));
}

HodgeParts exact_hodge(const Scope& s, const Vec& x, std::size_t cap) {
  HodgeOracle o(s, cap);
  return o.split(x);
}

LoewnerReport loewner_check(const Mat& a, const Mat& b, double tol) {
  LoewnerReport r;
  const double asym = std::max(a.size() ? (a - a.transpose()).cwiseAbs().maxCoeff() : 0.0,
                               b.size() ? (b - b.transpose()).cwiseAbs().maxCoeff() : 0.0);
  r.asymmetry = asym;
  if (asym > tol) throw Error(ErrorCode::NotSymmetric, "asymmetry " + std::to_string(asym) + " exceeds tolerance");
  Vec ev = sym_eigenvalues(b - a);
  r.min_eig = ev.size() ? ev(0) : 0.0;
  r.ok = r.min_eig >= -tol;
  return r;
}

std::vector<double> principal_angles(const Mat& a, const Mat& b) {
  if (a.cols() == 0 || b.cols() == 0) return {};
  Eigen::HouseholderQR<Mat> qa(a), qb(b);
  Mat Qa = qa.householderQ() * Mat::Identity(a.rows(), a.cols());
  Mat Qb = qb.householderQ() * Mat::Identity(b.rows(), b.cols());
  Eigen::JacobiSVD<Mat> cs(Qa.transpose() * Qb);
  Eigen::JacobiSVD<Mat> sn(Qb - Qa * (Qa.transpose() * Qb));
  // cosines descend, sines ascend; small angles are taken from the sines
  const auto& c = cs.singularValues();
  const auto& s = sn.singularValues();
  const Eigen::Index k = std::min(c.size(), s.size());
  std::vector<double> ang;
  for (Eigen::Index i = 0; i < k; ++i) {
    double si = std::clamp(s(s.size() - 1 - i), 0.0, 1.0);
    double ci = std::clamp(c(i), 0.0, 1.0);
    ang.push_back(si < 0.7 ? std::asin(si) : std::acos(ci));
  }
  return ang;
}

double spectral_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<Mat> svd(a);
  return svd.singularValues()(0);
}

double max_eig(const Mat& a) {
  Vec ev = sym_eigenvalues(a);
  return ev.size() ? ev(ev.size() - 1) : 0.0;
}

double min_nonzero_eig(const Mat& a) {
  Vec ev = sym_eigenvalues(a);
  if (ev.size() == 0) return 0.0;
  const double top = ev(ev.size() - 1);
  if (top <= 0) return 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > kRankRel * top) return ev(i);
  return 0.0;
}

}  // namespace hodge::oracle
