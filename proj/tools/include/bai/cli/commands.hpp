#pragma once

#include <iosfwd>

#include "bai/cli/config.hpp"

namespace bai::cli {

// Each command writes its primary CSV (or JSON for random-instances) to `out`.
// cmd_run and cmd_sweep also return an aggregate JSON document through `json`.
void cmd_oracle(const ExperimentConfig& config, std::ostream& out);
void cmd_thresholds(const ExperimentConfig& config, std::ostream& out);
void cmd_run(const ExperimentConfig& config, std::ostream& out, std::ostream& json);
void cmd_sweep(const ExperimentConfig& config, std::ostream& out, std::ostream& json);
void cmd_validate(const ExperimentConfig& config, std::ostream& out);
void cmd_random_instances(const ExperimentConfig& config, std::ostream& out);

// Entry point shared by the executable and the tests. Returns the exit code.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace bai::cli
