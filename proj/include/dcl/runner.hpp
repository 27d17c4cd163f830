#pragma once

#include "dcl/config.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dcl {

/// Output directory or file could not be written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Process exit codes of the command-line front end.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitIo = 3,
    kExitNumerical = 4,
};

struct RunReport {
    /// Ordered key/value pairs written to summary.txt (before the config echo).
    std::vector<std::pair<std::string, std::string>> summary;
    std::vector<std::filesystem::path> files;

    const std::string* find(const std::string& key) const;
};

/// Runs the configured experiment and writes its CSV, SVG and summary files
/// into config.output_dir.
RunReport run(const ExperimentConfig& config);

}  // namespace dcl
