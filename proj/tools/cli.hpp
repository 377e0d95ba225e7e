#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wickito::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitParameter = 2;
inline constexpr int kExitAccuracy = 3;

// args excludes the program name. Results go to `out` unless --output names a
// file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "start:stop:step" -> start, start + step, ... up to stop (inclusive within
// rounding).
std::vector<double> parse_range(const std::string& spec);

// 16 hex digits of FNV-1a over the bytes of s.
std::string hash_hex(const std::string& s);

const char* version();

}  // namespace wickito::cli
