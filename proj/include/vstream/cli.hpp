#pragma once

#include <ostream>
#include <string_view>
#include <vector>

namespace vstream
{

/// Exit codes of the command-line tool.
enum ExitCode : int
{
    exit_ok = 0,
    exit_runtime = 1,
    exit_usage = 2,
};

/// Parses "2000,4000" (also "2000:10000:2000" as start:stop:step). Throws
/// std::invalid_argument on malformed or empty input.
std::vector<double> parse_number_list(std::string_view text);

/// Entry point shared by the executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace vstream
