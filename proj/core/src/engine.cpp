#include "bai/engine.hpp"

#include <algorithm>
#include <cmath>

#include "bai/errors.hpp"
#include "bai/format.hpp"
#include "bai/oracle.hpp"
#include "bai/parallel.hpp"
#include "bai/rng.hpp"
#include "bai/stats.hpp"

namespace bai::engine {

using samplers::SamplerKind;

int effective_n0(const RunConfig& config) {
  const int floor = samplers::min_initial_pulls(config.sampler);
  if (config.n0 == 0) {
    return config.sampler == SamplerKind::Fhn2 ? samplers::fhn2_default_n0(config.delta())
                                               : std::max(kDefaultInitialPulls, floor);
  }
  if (config.n0 < floor) {
    throw DomainError("n0 is below the minimum for sampler " +
                      samplers::sampler_name(config.sampler));
  }
  return config.n0;
}

namespace {

class Episode {
 public:
  explicit Episode(const RunConfig& config)
      : cfg_(config),
        inst_(config.instance),
        K_(config.instance.size()),
        best_(config.instance.best_arm()),
        n0_(effective_n0(config)),
        rng_(config.seed) {}

  EpisodeRecord run() {
    return cfg_.sampler == SamplerKind::Fhn2 ? run_fhn2() : run_adaptive();
  }

 private:
  double draw(std::size_t a) { return rng_.normal(inst_.means[a], inst_.variances[a]); }

  EpisodeRecord finish(std::int64_t t, std::size_t rec, bool capped) const {
    EpisodeRecord r;
    r.seed = cfg_.seed;
    r.stop_time = t;
    r.recommended = rec;
    r.capped = capped;
    r.correct = !capped && rec == best_;
    return r;
  }

  EpisodeRecord run_fhn2() {
    samplers::Fhn2State state(K_, cfg_.delta(), n0_);
    std::int64_t t = 0;
    std::vector<double> row;
    for (;;) {
      const auto& active = state.active();
      if (t + static_cast<std::int64_t>(active.size()) > cfg_.max_steps) {
        std::size_t rec = active.front();
        for (std::size_t a : active) {
          if (state.mean(a) > state.mean(rec)) rec = a;
        }
        return finish(t, rec, true);
      }
      row.clear();
      for (std::size_t a : active) row.push_back(draw(a));
      t += static_cast<std::int64_t>(active.size());
      if (state.step(row)) return finish(t, state.winner(), false);
    }
  }

  bool should_stop(std::int64_t t) const {
    for (const auto& arm : arms_) {
      if (arm.count < 2 || !(arm.m2 > 0.0)) return false;
    }
    const auto mode = samplers::stopping_mode(cfg_.sampler);
    const std::size_t leader = stats::empirical_leader(arms_);
    for (std::size_t a = 0; a < K_; ++a) {
      if (a == leader) continue;
      const double z = stats::empirical_cost(arms_[leader], arms_[a], mode);
      const double c = thresholds::threshold(cfg_.threshold, arms_[leader], arms_[a], t);
      if (!(z > c)) return false;
    }
    return true;
  }

  std::vector<double> tracking_target() const {
    if (cfg_.sampler == SamplerKind::Fixed) return fixed_target_;
    model::Instance emp;
    for (const auto& arm : arms_) {
      emp.means.push_back(arm.mean);
      emp.variances.push_back(arm.variance());
    }
    const auto vm = cfg_.sampler == SamplerKind::EvTas ? oracle::VarianceModel::Known
                                                      : oracle::VarianceModel::Unknown;
    try {
      return oracle::optimal_allocation(emp, vm).weights;
    } catch (const std::exception&) {
      // Tied or degenerate empirical instance: track the uniform target this round.
      return std::vector<double>(K_, 1.0 / static_cast<double>(K_));
    }
  }

  std::size_t choose(std::int64_t t) {
    switch (cfg_.sampler) {
      case SamplerKind::Uniform: return samplers::next_arm_uniform(t, K_);
      case SamplerKind::EbTci:
        return samplers::next_arm_toptwo(arms_, cfg_.beta, rng_.uniform(),
                                         stats::GlrMode::Unknown);
      case SamplerKind::EbEvtci:
        return samplers::next_arm_toptwo(arms_, cfg_.beta, rng_.uniform(), stats::GlrMode::Ev);
      default: {
        counts_.resize(K_);
        for (std::size_t a = 0; a < K_; ++a) counts_[a] = arms_[a].count;
        return samplers::next_arm_tracking(tracker_, tracking_target(), counts_,
                                           samplers::epsilon_schedule(t, K_));
      }
    }
  }

  EpisodeRecord run_adaptive() {
    arms_.assign(K_, stats::ArmStats(cfg_.threshold.gamma));
    tracker_ = samplers::TrackerState(K_);
    if (cfg_.sampler == SamplerKind::Fixed) {
      fixed_target_ = oracle::optimal_allocation_unknown(inst_).weights;
    }
    std::int64_t t = 0;
    for (int r = 0; r < n0_; ++r) {
      for (std::size_t a = 0; a < K_; ++a) {
        arms_[a].push(draw(a));
        ++t;
      }
    }
    for (;;) {
      if (should_stop(t)) return finish(t, stats::empirical_leader(arms_), false);
      if (t >= cfg_.max_steps) return finish(t, stats::empirical_leader(arms_), true);
      const std::size_t a = choose(t);
      arms_[a].push(draw(a));
      ++t;
    }
  }

  const RunConfig& cfg_;
  const model::Instance& inst_;
  std::size_t K_;
  std::size_t best_;
  int n0_;
  rng::Stream rng_;
  std::vector<stats::ArmStats> arms_;
  samplers::TrackerState tracker_;
  std::vector<double> fixed_target_;
  std::vector<std::int64_t> counts_;
};

}  // namespace

EpisodeRecord run_episode(const RunConfig& config) {
  config.instance.validate();
  if (!(config.beta > 0.0 && config.beta < 1.0)) throw DomainError("beta must be in (0, 1)");
  if (config.max_steps < 1) throw DomainError("max_steps must be positive");
  if (config.threshold.K != static_cast<int>(config.instance.size())) {
    throw DomainError("threshold K does not match the instance");
  }
  return Episode(config).run();
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw DomainError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

Aggregate aggregate(const std::vector<EpisodeRecord>& records) {
  if (records.empty()) throw DomainError("aggregate of zero episodes");
  Aggregate agg;
  agg.episodes = records.size();
  std::vector<double> times;
  std::size_t errors = 0;
  double sum = 0.0;
  for (const auto& r : records) {
    times.push_back(static_cast<double>(r.stop_time));
    sum += static_cast<double>(r.stop_time);
    if (!r.correct) ++errors;
    if (r.capped) ++agg.n_capped;
  }
  const double n = static_cast<double>(records.size());
  agg.mean = sum / n;
  agg.median = quantile(times, 0.5);
  agg.p10 = quantile(times, 0.1);
  agg.p90 = quantile(times, 0.9);
  agg.error_rate = static_cast<double>(errors) / n;
  return agg;
}

BatchResult run_batch(const RunConfig& config, std::size_t episodes, std::size_t parallelism) {
  if (episodes < 1) throw DomainError("run_batch needs at least one episode");
  BatchResult out;
  out.records.resize(episodes);
  parallel_for(episodes, parallelism, [&](std::size_t i) {
    RunConfig local = config;
    local.seed = rng::split(config.seed, i);
    out.records[i] = run_episode(local);
  });
  out.aggregate = aggregate(out.records);
  return out;
}

std::string episodes_csv(const std::vector<EpisodeRecord>& records) {
  std::string out = "seed,stop_time,recommended,correct,capped\n";
  for (const auto& r : records) {
    out += std::to_string(r.seed) + ',' + std::to_string(r.stop_time) + ',' +
           std::to_string(r.recommended) + ',' + (r.correct ? "1" : "0") + ',' +
           (r.capped ? "1" : "0") + '\n';
  }
  return out;
}

std::string aggregate_json(const Aggregate& agg) {
  return "{\"episodes\":" + std::to_string(agg.episodes) + ",\"mean\":" + format::num(agg.mean) +
         ",\"median\":" + format::num(agg.median) + ",\"p10\":" + format::num(agg.p10) +
         ",\"p90\":" + format::num(agg.p90) + ",\"error_rate\":" + format::num(agg.error_rate) +
         ",\"n_capped\":" + std::to_string(agg.n_capped) + "}";
}

}  // namespace bai::engine
