#include "bai/stats.hpp"

#include <cmath>
#include <limits>

#include "bai/errors.hpp"
#include "bai/model.hpp"

namespace bai::stats {

std::int64_t slice_index(std::int64_t n, double gamma) {
  if (n < 1) return -1;
  auto i = static_cast<std::int64_t>(std::floor(std::log(static_cast<double>(n)) / std::log(gamma)));
  while (std::pow(gamma, static_cast<double>(i + 1)) <= static_cast<double>(n)) ++i;
  while (i > 0 && std::pow(gamma, static_cast<double>(i)) > static_cast<double>(n)) --i;
  return i;
}

void ArmStats::push(double sample) {
  ++count;
  const double d = sample - mean;
  mean += d / static_cast<double>(count);
  m2 += d * (sample - mean);
  const std::int64_t i = slice_index(count, gamma);
  if (i != slice) {
    slice = i;
    anchor_count = count;
    anchor_mean = mean;
    anchor_var = variance();
  }
}

ArmStats update(ArmStats stats, double sample) {
  stats.push(sample);
  return stats;
}

std::size_t empirical_leader(const std::vector<ArmStats>& arms) {
  std::size_t best = 0;
  for (std::size_t a = 1; a < arms.size(); ++a) {
    if (arms[a].mean > arms[best].mean) best = a;
  }
  return best;
}

namespace {

void check_ready(const std::vector<ArmStats>& arms) {
  for (const auto& s : arms) {
    if (s.count < 2 || !(s.m2 > 0.0)) {
      throw InsufficientDataError("GLR statistics need count >= 2 and positive variance");
    }
  }
}

}  // namespace

double empirical_cost(const ArmStats& leader, const ArmStats& a, GlrMode mode) {
  const double wl = static_cast<double>(leader.count);
  const double wa = static_cast<double>(a.count);
  if (mode == GlrMode::Ev) {
    return model::cost_known_raw(leader.mean, leader.variance(), wl, a.mean, a.variance(), wa)
        .value;
  }
  return model::cost_unknown_raw(leader.mean, leader.variance(), wl, a.mean, a.variance(), wa)
      .value;
}

GlrReport glr_report(const std::vector<ArmStats>& arms, GlrMode mode) {
  check_ready(arms);
  GlrReport out;
  out.leader = empirical_leader(arms);
  out.z.assign(arms.size(), 0.0);
  out.z_ev.assign(arms.size(), 0.0);
  const auto& lead = arms[out.leader];
  for (std::size_t a = 0; a < arms.size(); ++a) {
    if (a == out.leader) continue;
    if (mode != GlrMode::Ev) out.z[a] = empirical_cost(lead, arms[a], GlrMode::Unknown);
    if (mode != GlrMode::Unknown) out.z_ev[a] = empirical_cost(lead, arms[a], GlrMode::Ev);
  }
  return out;
}

std::size_t min_cost_challenger(const std::vector<ArmStats>& arms, std::size_t leader,
                                bool penalized, GlrMode mode) {
  check_ready(arms);
  const GlrMode cost_mode = mode == GlrMode::Ev ? GlrMode::Ev : GlrMode::Unknown;
  std::size_t best = arms.size();
  double best_val = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < arms.size(); ++a) {
    if (a == leader) continue;
    double v = empirical_cost(arms[leader], arms[a], cost_mode);
    if (penalized) v += std::log(static_cast<double>(arms[a].count));
    if (best == arms.size() || v < best_val) {
      best = a;
      best_val = v;
    }
  }
  return best;
}

}  // namespace bai::stats
