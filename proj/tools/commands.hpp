#pragma once

#include <ostream>
#include <string_view>

#include "config.hpp"

namespace parq::cli {

// Public exit-code contract.
enum ExitCode : int {
  kPass = 0,
  kViolation = 1,
  kConfigError = 2,
  kInputError = 3,
  kUnstable = 4,
  kNotConverged = 5,
  kPremiseFailed = 6,
};

// Each command writes a human-readable summary to `out` (and, for simulate
// without run.out, the CSV itself). CSV files named in the config are
// written directly. Exceptions are translated to exit codes by run_command.
int cmd_simulate(const ExperimentConfig& config, std::ostream& out);
int cmd_loynes(const ExperimentConfig& config, std::ostream& out);
int cmd_compare(const ExperimentConfig& config, std::ostream& out);
int cmd_verify_lemmas(const ExperimentConfig& config, std::ostream& out);

// Dispatches by name and maps errors to exit codes, with the message on err.
int run_command(std::string_view name, const ExperimentConfig& config, std::ostream& out,
                std::ostream& err);

// Full command line: parses flags, loads the config file, runs the command.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace parq::cli
