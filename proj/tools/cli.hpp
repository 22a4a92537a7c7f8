#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace robust::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitData = 2,
    kExitResource = 3,
};

/// Unreadable, unwritable or ill-formed files.
class DataFileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One finite real per line, '.' as decimal point. Blank lines are ignored;
/// the first line is skipped when `has_header` is set.
Eigen::VectorXd read_data_file(const std::filesystem::path& path, bool has_header);

/// Runs the command line `args` (args[0] is the program name) and returns
/// the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace robust::cli
