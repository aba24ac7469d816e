#include "bai/cli/commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "bai/engine.hpp"
#include "bai/errors.hpp"
#include "bai/format.hpp"
#include "bai/oracle.hpp"
#include "bai/stats.hpp"
#include "bai/thresholds.hpp"
#include "bai/validation.hpp"

namespace bai::cli {

using format::num;

namespace {

std::vector<thresholds::Family> families(const ExperimentConfig& c, bool all_by_default) {
  using thresholds::Family;
  const std::vector<Family> every = {Family::Student, Family::Box,   Family::KL,
                                     Family::BoB,     Family::EVStudent, Family::EVBox,
                                     Family::EVBoB,   Family::Heuristic};
  if (c.thresholds.empty()) {
    return all_by_default ? every : std::vector<Family>{Family::Heuristic};
  }
  std::vector<Family> out;
  for (const auto& name : c.thresholds) {
    if (name == "all") {
      out.insert(out.end(), every.begin(), every.end());
    } else {
      out.push_back(thresholds::family_from_name(name));
    }
  }
  return out;
}

engine::RunConfig run_config(const ExperimentConfig& c, const model::Instance& inst,
                             samplers::SamplerKind sampler, thresholds::Family family,
                             double delta) {
  engine::RunConfig rc;
  rc.instance = inst;
  rc.sampler = sampler;
  rc.threshold = thresholds::ThresholdSpec::make(family, delta, static_cast<int>(inst.size()),
                                                 c.s, c.gamma);
  rc.beta = c.beta;
  rc.n0 = c.n0;
  rc.max_steps = c.max_steps;
  rc.seed = c.seed;
  return rc;
}

std::string aggregate_fields(const engine::Aggregate& a) {
  return fmt::format("{},{},{},{},{},{},{}", a.episodes, num(a.mean), num(a.median), num(a.p10),
                     num(a.p90), num(a.error_rate), a.n_capped);
}

}  // namespace

void cmd_oracle(const ExperimentConfig& config, std::ostream& out) {
  out << "instance,quantity,arm,delta,value\n";
  const auto instances = resolve_instances(config);
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    const auto unknown = oracle::optimal_allocation_unknown(inst);
    const auto known = oracle::optimal_allocation_known(inst);
    const double d = model::dmax(inst);
    auto row = [&](const std::string& q, const std::string& arm, const std::string& delta,
                   double v) { out << i << ',' << q << ',' << arm << ',' << delta << ',' << num(v) << '\n'; };
    row("t_star", "", "", unknown.char_time);
    row("t_star_known", "", "", known.char_time);
    row("ratio", "", "", unknown.char_time / known.char_time);
    row("ratio_bound", "", "", d / std::log1p(d));
    for (std::size_t a = 0; a < inst.size(); ++a) row("weight", std::to_string(a), "", unknown.weights[a]);
    for (std::size_t a = 0; a < inst.size(); ++a) {
      row("weight_known", std::to_string(a), "", known.weights[a]);
    }
    for (double delta : config.deltas) {
      row("lower_bound", "", num(delta), oracle::lower_bound_samples(inst, delta));
    }
  }
}

void cmd_thresholds(const ExperimentConfig& config, std::ostream& out) {
  // Two arms (0, 1) and (-0.2, 0.5), sampled alternately.
  const double mu[2] = {0.0, -0.2};
  const double var[2] = {1.0, 0.5};
  std::int64_t t_max = config.t_fixed;
  for (std::int64_t t : config.t_grid) t_max = std::max(t_max, t);

  std::set<std::int64_t> wanted(config.t_grid.begin(), config.t_grid.end());
  wanted.insert(config.t_fixed);
  std::vector<std::pair<std::int64_t, std::array<stats::ArmStats, 2>>> snaps;
  rng::Stream rng(rng::split(config.seed, 0));
  std::array<stats::ArmStats, 2> arms = {stats::ArmStats(config.gamma),
                                         stats::ArmStats(config.gamma)};
  for (std::int64_t t = 1; t <= t_max; ++t) {
    const int a = static_cast<int>((t - 1) % 2);
    arms[a].push(rng.normal(mu[a], var[a]));
    if (wanted.count(t)) snaps.emplace_back(t, arms);
  }
  auto at = [&](std::int64_t t) -> const std::array<stats::ArmStats, 2>& {
    for (const auto& s : snaps) {
      if (s.first == t) return s.second;
    }
    throw DomainError("missing snapshot");
  };

  out << "family,t,delta,value\n";
  std::set<std::pair<std::int64_t, double>> done;
  auto emit = [&](std::int64_t t, double delta) {
    if (!done.insert({t, delta}).second) return;
    const auto& pair = at(t);
    for (auto f : families(config, true)) {
      const auto spec = thresholds::ThresholdSpec::make(f, delta, 2, config.s, config.gamma);
      const double v = thresholds::threshold(spec, pair[0], pair[1], t);
      out << thresholds::family_name(f) << ',' << t << ',' << num(delta) << ',' << num(v) << '\n';
    }
  };
  for (double delta : config.deltas) {
    for (std::int64_t t : config.t_grid) emit(t, delta);
  }
  for (double delta : config.delta_grid) emit(config.t_fixed, delta);
}

void cmd_run(const ExperimentConfig& config, std::ostream& out, std::ostream& json) {
  if (config.samplers.empty() || config.deltas.empty()) {
    throw DomainError("run needs at least one sampler and one delta");
  }
  const auto inst = resolve_instances(config).front();
  const auto rc = run_config(config, inst, samplers::sampler_from_name(config.samplers.front()),
                             families(config, false).front(), config.deltas.front());
  const auto result = engine::run_batch(rc, config.episodes, config.parallelism);
  out << engine::episodes_csv(result.records);
  json << engine::aggregate_json(result.aggregate) << '\n';
}

void cmd_sweep(const ExperimentConfig& config, std::ostream& out, std::ostream& json) {
  out << "instance,sampler,threshold,delta,episodes,mean,median,p10,p90,error_rate,n_capped\n";
  json << "[";
  bool first = true;
  const auto instances = resolve_instances(config);
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (const auto& name : config.samplers) {
      const auto kind = samplers::sampler_from_name(name);
      for (auto f : families(config, false)) {
        for (double delta : config.deltas) {
          const auto rc = run_config(config, instances[i], kind, f, delta);
          const auto agg = engine::run_batch(rc, config.episodes, config.parallelism).aggregate;
          out << i << ',' << name << ',' << thresholds::family_name(f) << ',' << num(delta) << ','
              << aggregate_fields(agg) << '\n';
          std::string obj = engine::aggregate_json(agg);
          obj.insert(1, fmt::format("\"instance\":{},\"sampler\":\"{}\",\"threshold\":\"{}\","
                                    "\"delta\":{},",
                                    i, name, thresholds::family_name(f), num(delta)));
          json << (first ? "" : ",") << obj;
          first = false;
        }
      }
    }
  }
  json << "]\n";
}

void cmd_validate(const ExperimentConfig& config, std::ostream& out) {
  out << validation::coverage_csv_header() << '\n';
  for (double delta : config.deltas) {
    const double eta = 1.0 / std::log(1.0 / delta);
    validation::McOptions opt;
    opt.trials = config.trials;
    opt.horizon = config.horizon;
    opt.seed = config.seed;
    opt.parallelism = config.parallelism;
    for (const auto& bound : config.bounds) {
      if (bound == "variance") {
        const auto r = validation::mc_variance_tails(delta, eta, eta, config.s, opt);
        out << validation::coverage_csv_row(r.upper) << '\n'
            << validation::coverage_csv_row(r.lower) << '\n';
      } else if (bound == "mean") {
        out << validation::coverage_csv_row(validation::mc_mean_tail(delta, config.s, opt)) << '\n';
      } else if (bound == "kl") {
        validation::McOptions kl = opt;
        kl.trials = config.kl_trials;
        kl.horizon = config.kl_horizon;
        const auto spec = thresholds::ThresholdSpec::make(thresholds::Family::KL, delta, 2,
                                                          config.s, config.gamma);
        out << validation::coverage_csv_row(validation::mc_kl_sum(spec, kl)) << '\n';
      } else {
        throw DomainError("unknown bound \"" + bound + "\" (variance, mean, kl)");
      }
    }
  }
}

void cmd_random_instances(const ExperimentConfig& config, std::ostream& out) {
  ExperimentConfig c = config;
  c.instances.clear();
  if (!c.random) c.random = RandomSpec{};
  const auto instances = resolve_instances(c);
  out << "{\"instances\":[\n";
  for (std::size_t i = 0; i < instances.size(); ++i) {
    out << "  " << model::instance_to_json(instances[i]) << (i + 1 < instances.size() ? ",\n" : "\n");
  }
  out << "]}\n";
}

namespace {

std::string json_path_for(const std::string& out) {
  const auto dot = out.rfind('.');
  const auto slash = out.find_last_of("/\\");
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    return out.substr(0, dot) + ".json";
  }
  return out + ".json";
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Best arm identification for Gaussian bandits with unknown variances", "bai-lab"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> episodes;
  std::optional<std::size_t> parallelism;
  std::optional<std::string> out_path;
  app.add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Master seed (u64)");
  app.add_option("--episodes", episodes, "Episodes per batch");
  app.add_option("--parallelism", parallelism, "Worker threads (BAI_LAB_THREADS overrides)");
  app.add_option("--out", out_path, "Output path; run/sweep also write <stem>.json");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"oracle", "Characteristic times and optimal allocations"},
      {"thresholds", "Threshold families along a two-arm uniform trajectory"},
      {"run", "Episodes of one sampler on one instance"},
      {"sweep", "Aggregates over instances x samplers x thresholds x deltas"},
      {"validate", "Monte Carlo coverage of the concentration bounds"},
      {"random-instances", "Random instances with arm 0 = (0, 1)"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    cfg.command = app.get_subcommands().front()->get_name();
    if (seed) cfg.seed = *seed;
    if (episodes) cfg.episodes = *episodes;
    if (parallelism) cfg.parallelism = *parallelism;
    if (out_path) cfg.out = *out_path;
    if (const char* env = std::getenv("BAI_LAB_THREADS"); env && *env) {
      try {
        const long long n = std::stoll(env);
        if (n < 1) throw std::invalid_argument("not positive");
        cfg.parallelism = static_cast<std::size_t>(n);
      } catch (const std::exception&) {
        throw DomainError(std::string("BAI_LAB_THREADS must be a positive integer, got \"") +
                          env + "\"");
      }
    }
    if (cfg.parallelism < 1) throw DomainError("parallelism must be >= 1");

    std::ofstream file;
    std::ofstream json_file;
    std::ostream* primary = &out;
    std::ostream* json = &err;
    if (!cfg.out.empty()) {
      file.open(cfg.out);
      if (!file) throw DomainError("cannot write " + cfg.out);
      primary = &file;
      if (cfg.command == "run" || cfg.command == "sweep") {
        json_file.open(json_path_for(cfg.out));
        if (!json_file) throw DomainError("cannot write " + json_path_for(cfg.out));
        json = &json_file;
      }
    }

    if (cfg.command == "oracle") cmd_oracle(cfg, *primary);
    else if (cfg.command == "thresholds") cmd_thresholds(cfg, *primary);
    else if (cfg.command == "run") cmd_run(cfg, *primary, *json);
    else if (cfg.command == "sweep") cmd_sweep(cfg, *primary, *json);
    else if (cfg.command == "validate") cmd_validate(cfg, *primary);
    else cmd_random_instances(cfg, *primary);
    return 0;
  } catch (const std::exception& e) {
    err << "bai-lab: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace bai::cli
