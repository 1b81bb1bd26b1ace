#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace alm::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int check_failed = 1;
inline constexpr int locality_failed = 2;
inline constexpr int subproblem_failed = 3;
inline constexpr int max_outer = 4;
inline constexpr int usage = 64;
inline constexpr int data = 65;
inline constexpr int software = 70;
} // namespace exit_code

inline constexpr int kReportSchemaVersion = 1;

/// Entry point of the `alm` tool; args excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace alm::cli
