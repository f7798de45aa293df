#pragma once
// Command-line driver. Exit codes: 0 ok, 2 validation failure,
// 3 verification failure, 4 I/O.

#include <iosfwd>
#include <string>
#include <vector>

namespace hodge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitVerification = 3;
inline constexpr int kExitIo = 4;

/// args excludes the program name. The JSON run report goes to out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hodge::cli
