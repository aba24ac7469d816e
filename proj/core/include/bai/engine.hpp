#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bai/model.hpp"
#include "bai/samplers.hpp"
#include "bai/thresholds.hpp"

namespace bai::engine {

inline constexpr std::int64_t kDefaultMaxSteps = 1'000'000;

// Default initial pulls per arm for the adaptive samplers. Two pulls leave the
// plug-in variances so noisy that EV-GLR stops early and wrong far more often
// than delta under the heuristic threshold.
inline constexpr int kDefaultInitialPulls = 4;

struct RunConfig {
  model::Instance instance;
  samplers::SamplerKind sampler = samplers::SamplerKind::Tas;
  thresholds::ThresholdSpec threshold;
  double beta = 0.5;
  int n0 = 0;  // 0 selects the sampler default
  std::int64_t max_steps = kDefaultMaxSteps;
  std::uint64_t seed = 0;

  double delta() const { return threshold.delta; }
};

// Initial pulls per arm actually used when n0 == 0: max{kDefaultInitialPulls,
// sampler minimum}, or max{2, ceil(10 ln(1/delta))} for fhn2. Otherwise n0,
// which must not be below the sampler minimum (DomainError).
int effective_n0(const RunConfig& config);

struct EpisodeRecord {
  std::uint64_t seed = 0;
  std::int64_t stop_time = 0;
  std::size_t recommended = 0;
  bool correct = false;
  bool capped = false;

  bool operator==(const EpisodeRecord&) const = default;
};

// One episode seeded by config.seed. Capped episodes are reported incorrect.
EpisodeRecord run_episode(const RunConfig& config);

struct Aggregate {
  std::size_t episodes = 0;
  double mean = 0.0;
  double median = 0.0;
  double p10 = 0.0;
  double p90 = 0.0;
  double error_rate = 0.0;
  std::size_t n_capped = 0;
};

struct BatchResult {
  std::vector<EpisodeRecord> records;
  Aggregate aggregate;
};

// Episode i runs with seed rng::split(config.seed, i), so the result does not
// depend on `parallelism`.
BatchResult run_batch(const RunConfig& config, std::size_t episodes, std::size_t parallelism);

Aggregate aggregate(const std::vector<EpisodeRecord>& records);

// Linear-interpolation quantile of a sample (sorted internally).
double quantile(std::vector<double> values, double q);

std::string episodes_csv(const std::vector<EpisodeRecord>& records);
std::string aggregate_json(const Aggregate& agg);

}  // namespace bai::engine
