#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace bai::stats {

// Streaming statistics of one arm with geometric-slice anchors.
//
// The anchor holds the statistics frozen when the count entered the current
// slice i = floor(log_gamma N), which happens exactly when N = ceil(gamma^i).
struct ArmStats {
  double gamma = 1.2;
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;  // sum of squared deviations

  std::int64_t slice = -1;
  std::int64_t anchor_count = 0;
  double anchor_mean = 0.0;
  double anchor_var = 0.0;

  ArmStats() = default;
  explicit ArmStats(double slice_gamma) : gamma(slice_gamma) {}

  // Biased variance, divisor N.
  double variance() const { return count > 0 ? m2 / static_cast<double>(count) : 0.0; }

  void push(double sample);
};

ArmStats update(ArmStats stats, double sample);

// floor(log_gamma n) for n >= 1, robust to rounding at exact powers.
std::int64_t slice_index(std::int64_t n, double gamma);

enum class GlrMode { Unknown, Ev, Both };

// Per-arm GLR statistics against the empirical leader. Entries at the
// leader's index are zero.
struct GlrReport {
  std::size_t leader = 0;
  std::vector<double> z;
  std::vector<double> z_ev;
};

// Argmax of empirical means, lowest index on ties.
std::size_t empirical_leader(const std::vector<ArmStats>& arms);

// Throws InsufficientDataError if some count < 2 or some variance is zero.
GlrReport glr_report(const std::vector<ArmStats>& arms, GlrMode mode = GlrMode::Both);

// Empirical transportation cost C_t(leader, a): Z_a (Unknown) or Z^EV_a (Ev).
double empirical_cost(const ArmStats& leader, const ArmStats& a, GlrMode mode);

// argmin over a != leader of C_t(leader, a) [+ ln N_a when penalized], lowest index on ties.
std::size_t min_cost_challenger(const std::vector<ArmStats>& arms, std::size_t leader,
                                bool penalized, GlrMode mode);

}  // namespace bai::stats
