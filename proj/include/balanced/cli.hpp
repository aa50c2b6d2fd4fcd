#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace balanced::cli {

/// Runs the acceptance suite, writing one line per criterion; returns the
/// number of failures.
using VerifyAll = std::function<int(std::ostream&)>;

/// Exit codes: 0 success, 1 verify-all failures, 2 malformed input,
/// 3 numerical failure (diagnostic JSON on stdout).
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             const VerifyAll& verify_all = {});

/// Round-trip formatting (17 significant digits).
std::string fmt(double v);

}  // namespace balanced::cli
