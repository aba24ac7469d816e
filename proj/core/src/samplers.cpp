#include "bai/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bai/errors.hpp"

namespace bai::samplers {

std::string sampler_name(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::Tas: return "tas";
    case SamplerKind::EvTas: return "ev-tas";
    case SamplerKind::EbTci: return "eb-tci";
    case SamplerKind::EbEvtci: return "eb-evtci";
    case SamplerKind::Uniform: return "uniform";
    case SamplerKind::Fixed: return "fixed";
    case SamplerKind::Fhn2: return "fhn2";
  }
  return "unknown";
}

std::vector<SamplerKind> all_samplers() {
  return {SamplerKind::Tas,     SamplerKind::EvTas, SamplerKind::EbTci, SamplerKind::EbEvtci,
          SamplerKind::Uniform, SamplerKind::Fixed, SamplerKind::Fhn2};
}

SamplerKind sampler_from_name(const std::string& name) {
  for (SamplerKind k : all_samplers()) {
    if (sampler_name(k) == name) return k;
  }
  throw DomainError("unknown sampler: " + name);
}

stats::GlrMode stopping_mode(SamplerKind kind) {
  return kind == SamplerKind::EvTas || kind == SamplerKind::EbEvtci ? stats::GlrMode::Ev
                                                                   : stats::GlrMode::Unknown;
}

int min_initial_pulls(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::EbTci: return 4;
    case SamplerKind::EbEvtci: return 6;
    default: return 2;
  }
}

double epsilon_schedule(std::int64_t t, std::size_t K) {
  const double k = static_cast<double>(K);
  return std::min(1.0 / k, 0.5 / std::sqrt(k * k + static_cast<double>(t)));
}

std::vector<double> project_linf(const std::vector<double>& w, double eps) {
  const std::size_t K = w.size();
  if (K == 0) throw DomainError("project_linf: empty vector");
  if (!(eps >= 0.0) || eps * static_cast<double>(K) > 1.0 + 1e-12) {
    throw DomainError("project_linf: eps must be in [0, 1/K]");
  }
  std::vector<double> out = w;
  std::vector<bool> pinned(K, false);
  for (std::size_t pass = 0; pass <= K; ++pass) {
    double added = 0.0;
    std::size_t free = 0;
    for (std::size_t a = 0; a < K; ++a) {
      if (out[a] < eps) {
        added += eps - out[a];
        out[a] = eps;
        pinned[a] = true;
      }
      if (!pinned[a]) ++free;
    }
    if (added == 0.0) break;
    if (free == 0) break;
    const double share = added / static_cast<double>(free);
    for (std::size_t a = 0; a < K; ++a) {
      if (!pinned[a]) out[a] -= share;
    }
  }
  return out;
}

std::size_t next_arm_tracking(TrackerState& state, const std::vector<double>& target,
                              const std::vector<std::int64_t>& counts, double eps) {
  const std::size_t K = counts.size();
  if (target.size() != K) throw DomainError("next_arm_tracking: target has wrong length");
  if (state.cumulative.size() != K) state.cumulative.assign(K, 0.0);
  const auto w = project_linf(target, eps);
  std::size_t best = 0;
  double best_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < K; ++a) {
    state.cumulative[a] += w[a];
    const double gap = state.cumulative[a] - static_cast<double>(counts[a]);
    if (gap > best_gap) {
      best_gap = gap;
      best = a;
    }
  }
  return best;
}

std::size_t next_arm_toptwo(const std::vector<stats::ArmStats>& arms, double beta, double draw,
                            stats::GlrMode mode) {
  const std::size_t leader = stats::empirical_leader(arms);
  if (draw < beta) return leader;
  return stats::min_cost_challenger(arms, leader, true, mode);
}

std::size_t next_arm_uniform(std::int64_t t, std::size_t K) {
  return static_cast<std::size_t>(t % static_cast<std::int64_t>(K));
}

double fhn2_boundary(double x, double delta, std::size_t K) {
  const double k = static_cast<double>(K);
  return std::sqrt((x + 1.0) * (2.0 * std::log((k - 1.0) / (2.0 * delta)) + std::log1p(x)));
}

int fhn2_default_n0(double delta) {
  return std::max(2, static_cast<int>(std::ceil(10.0 * std::log(1.0 / delta))));
}

Fhn2State::Fhn2State(std::size_t K, double delta, int n0)
    : K_(K), delta_(delta), n0_(std::max(2, n0)), sums_(K, 0.0), diff_mean_(K * K, 0.0), diff_m2_(K * K, 0.0) {
  if (K < 2) throw DomainError("fhn2: needs at least two arms");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("fhn2: delta must be in (0, 1)");
  for (std::size_t a = 0; a < K; ++a) active_.push_back(a);
}

double Fhn2State::pair_variance(std::size_t b, std::size_t a) const {
  if (n_ < 2) return 0.0;
  const std::size_t i = std::min(a, b) * K_ + std::max(a, b);
  return diff_m2_[i] / static_cast<double>(n_ - 1);
}

bool Fhn2State::step(const std::vector<double>& row) {
  if (row.size() != active_.size()) throw DomainError("fhn2: one sample per active arm");
  ++n_;
  const double n = static_cast<double>(n_);
  for (std::size_t i = 0; i < active_.size(); ++i) {
    sums_[active_[i]] += row[i];
    for (std::size_t j = i + 1; j < active_.size(); ++j) {
      // active_ is sorted, so active_[i] < active_[j].
      const std::size_t k = active_[i] * K_ + active_[j];
      const double d = row[i] - row[j];
      const double delta = d - diff_mean_[k];
      diff_mean_[k] += delta / n;
      diff_m2_[k] += delta * (d - diff_mean_[k]);
    }
  }
  if (n_ >= n0_) eliminate();
  return done();
}

void Fhn2State::eliminate() {
  if (done()) return;
  std::vector<std::size_t> keep;
  for (std::size_t b : active_) {
    bool dominated = true;
    for (std::size_t a : active_) {
      if (a == b) continue;
      const double s = pair_variance(b, a);
      if (!(s > 0.0)) {
        dominated = false;
        break;
      }
      const double t = static_cast<double>(n_) / s;
      if (!(t * (mean(b) - mean(a)) < -fhn2_boundary(t, delta_, K_))) {
        dominated = false;
        break;
      }
    }
    if (!dominated) keep.push_back(b);
  }
  if (!keep.empty()) active_ = std::move(keep);
}

}  // namespace bai::samplers
