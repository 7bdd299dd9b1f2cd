#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace parc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (program name excluded) and returns its exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Splits "a,b,c" into integers. An empty string yields an empty list.
std::vector<std::uint64_t> parse_uint_list(const std::string& text);
std::vector<std::string> parse_name_list(const std::string& text);

}  // namespace parc::cli
