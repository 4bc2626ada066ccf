#pragma once

#include <map>
#include <string>
#include <vector>

#include "config.hpp"

namespace levylap::cli {

// 0 = all checks pass, 1 = mathematical check failed, 2 = usage/config error,
// 3 = numeric failure.
enum ExitCode { kPass = 0, kCheckFailed = 1, kUsage = 2, kNumeric = 3 };

struct CommandResult {
  int exit_code = kPass;
  json report;
  std::map<std::string, std::string> tables;  // file name -> CSV text
};

const std::vector<std::string>& command_names();

// Throws ConfigError for unknown commands; library exceptions propagate.
CommandResult run_command(const std::string& name, const ExperimentConfig& cfg, int jobs);

// Writes report.json and tables/*.csv under out_dir.
void write_outputs(const CommandResult& r, const std::string& out_dir);

}  // namespace levylap::cli
