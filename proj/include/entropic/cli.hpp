#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace entropic::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kIo = 3, kStarvation = 4 };

/// Runs the command line (args excludes the program name). Results go to
/// `out` or the --out file; errors are reported on `err` as a single line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "a:b" inclusive integer range, "a,b,c" list, or a single integer.
std::vector<std::size_t> parse_int_range(std::string_view text);
// "a:b:step" grid, "a:b" unit-step grid, "a,b,c" list, or a single value.
std::vector<double> parse_real_grid(std::string_view text);

}  // namespace entropic::cli
