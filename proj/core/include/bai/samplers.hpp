#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bai/stats.hpp"

namespace bai::samplers {

enum class SamplerKind { Tas, EvTas, EbTci, EbEvtci, Uniform, Fixed, Fhn2 };

std::string sampler_name(SamplerKind kind);
SamplerKind sampler_from_name(const std::string& name);
std::vector<SamplerKind> all_samplers();

// Statistic used by the stopping rule paired with each sampler: EV-GLR for
// ev-tas and eb-evtci, GLR otherwise. Not meaningful for fhn2.
stats::GlrMode stopping_mode(SamplerKind kind);

// Smallest admissible number of initial pulls per arm.
int min_initial_pulls(SamplerKind kind);

// Forced-exploration level min{1/K, 1 / (2 sqrt(K^2 + t))}.
double epsilon_schedule(std::int64_t t, std::size_t K);

// L-infinity projection onto {w in simplex : w_a >= eps}. Raises coordinates
// below eps and removes the added mass in equal shares from the others.
std::vector<double> project_linf(const std::vector<double>& w, double eps);

// C-tracking: accumulates projected targets and pulls the arm whose
// cumulative weight most exceeds its count.
struct TrackerState {
  std::vector<double> cumulative;

  explicit TrackerState(std::size_t K = 0) : cumulative(K, 0.0) {}
};

// Adds project_linf(target, eps) to the state, then returns
// argmax_a cumulative_a - counts_a (lowest index on ties).
std::size_t next_arm_tracking(TrackerState& state, const std::vector<double>& target,
                              const std::vector<std::int64_t>& counts, double eps);

// Top Two: the empirical leader if draw < beta, else the penalized
// transportation-cost challenger.
std::size_t next_arm_toptwo(const std::vector<stats::ArmStats>& arms, double beta, double draw,
                            stats::GlrMode mode);

std::size_t next_arm_uniform(std::int64_t t, std::size_t K);

// Elimination boundary g(x, delta) = sqrt((x + 1)(2 ln((K - 1) / (2 delta)) + ln(x + 1))).
double fhn2_boundary(double x, double delta, std::size_t K);

// Default initial round count max{2, ceil(10 ln(1 / delta))}.
int fhn2_default_n0(double delta);

class Fhn2State {
 public:
  // Elimination checks start once n0 rounds have been observed.
  Fhn2State(std::size_t K, double delta, int n0);

  // Feeds one sample per active arm (ordered as active()), then runs the
  // elimination check if at least n0 rounds are in. True when one arm remains.
  bool step(const std::vector<double>& row);

  void eliminate();

  const std::vector<std::size_t>& active() const { return active_; }
  std::int64_t rounds() const { return n_; }
  bool done() const { return active_.size() == 1; }
  std::size_t winner() const { return active_.front(); }

  double mean(std::size_t arm) const { return sums_[arm] / static_cast<double>(n_); }
  // S_{b,a}(n), unbiased variance of the paired differences X_b - X_a.
  double pair_variance(std::size_t b, std::size_t a) const;

 private:
  std::size_t K_;
  double delta_;
  int n0_;
  std::int64_t n_ = 0;
  std::vector<std::size_t> active_;
  std::vector<double> sums_;
  // Welford accumulators for X_b - X_a, b < a, stored row-major.
  std::vector<double> diff_mean_;
  std::vector<double> diff_m2_;
};

}  // namespace bai::samplers
