#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ced::cli {

/// Exit codes. `decide` reports its verdict through 0/1/2; everything else
/// uses kOk on success.
inline constexpr int kBelow = 0;
inline constexpr int kAbove = 1;
inline constexpr int kUndecided = 2;
inline constexpr int kOk = 0;
inline constexpr int kUsage = 3;
inline constexpr int kDomain = 4;
inline constexpr int kResource = 5;

/// Runs the command line `args` (without the program name). Data goes to
/// `out`, diagnostics and timing to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

/// RFC 4180 quoting: fields containing a comma, quote or newline are quoted
/// and embedded quotes doubled.
std::string csv_field(const std::string& s);

}  // namespace ced::cli
