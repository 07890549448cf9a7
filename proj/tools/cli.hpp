// Command orchestration for the pnlayer executable.
#pragma once

#include "pnlayer/grid.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace pnlayer::cli {

class ConfigError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

const std::vector<std::string>& commands();

/// Every accepted key with its default for `command`.
nlohmann::json default_config(const std::string& command);

/// Merge `user` and string `overrides` (top-level scalar keys) onto the
/// defaults, type-check every key and validate it against the modules'
/// preconditions.  Throws ConfigError.
nlohmann::json resolve_config(const std::string& command, const nlohmann::json& user,
                              const std::map<std::string, std::string>& overrides = {});

struct RunOutcome {
    int exit_code = 0;  ///< 0 success, 1 failed assertion
    nlohmann::json report;
    std::map<std::string, std::string> artifacts;  ///< file name -> content
};

/// Run a command on a resolved config.  Nothing is written to disk.
RunOutcome run(const std::string& command, const nlohmann::json& config);

/// Full CLI: parse, validate, run, write artifacts.  Returns the exit code
/// (2 on configuration errors).
int main_entry(int argc, char** argv);

}  // namespace pnlayer::cli
