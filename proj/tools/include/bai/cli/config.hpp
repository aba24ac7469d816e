#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bai/model.hpp"
#include "bai/rng.hpp"

namespace bai::cli {

// Random instances: arm 0 is (0, 1); the others are (-gap, ratio) with
// gap ~ U[gap_lo, gap_hi] and ratio ~ U[var_lo, var_hi].
struct RandomSpec {
  std::size_t count = 20;
  std::size_t K = 10;
  double gap_lo = 0.2;
  double gap_hi = 1.0;
  double var_lo = 0.1;
  double var_hi = 10.0;
};

struct ExperimentConfig {
  std::string command;

  std::vector<model::Instance> instances;
  std::optional<RandomSpec> random;

  std::vector<std::string> samplers = {"tas"};
  // Empty selects the command default: heuristic for run/sweep, every
  // family for thresholds. "all" expands to every family.
  std::vector<std::string> thresholds;
  std::vector<double> deltas = {0.01};
  std::size_t episodes = 100;
  std::uint64_t seed = 0;
  std::size_t parallelism = 1;
  std::string out;

  double beta = 0.5;
  int n0 = 0;
  std::int64_t max_steps = 1'000'000;
  double s = 2.0;
  double gamma = 1.2;

  // thresholds: values along t_grid at each of `deltas`, and along
  // delta_grid at t_fixed.
  std::vector<std::int64_t> t_grid = {10, 20, 50, 100, 200, 500, 1000, 2000, 5000};
  std::vector<double> delta_grid = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  std::int64_t t_fixed = 5000;

  // validate
  std::vector<std::string> bounds = {"variance", "mean", "kl"};
  std::size_t trials = 10000;
  std::int64_t horizon = 1000;
  std::size_t kl_trials = 5000;
  std::int64_t kl_horizon = 2000;
};

// Parses a JSON config. Unknown keys, bad types and unreadable instance files
// raise DomainError with a location. "instance_file" entries are inlined.
ExperimentConfig parse_config(const std::string& text, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

// Normalized JSON; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const ExperimentConfig& config);

model::Instance standard_instance();
model::Instance easy_instance();
model::Instance random_instance(rng::Stream& rng, const RandomSpec& spec);

// The explicit instances followed by the random ones (seeded from config.seed).
// Falls back to the standard instance when neither is given.
std::vector<model::Instance> resolve_instances(const ExperimentConfig& config);

}  // namespace bai::cli
