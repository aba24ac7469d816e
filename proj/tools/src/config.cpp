#include "bai/cli/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "bai/errors.hpp"

namespace bai::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kKeys = {
    "command",   "instances", "instance",   "instance_file", "random",     "samplers",
    "thresholds", "deltas",   "episodes",   "seed",          "parallelism", "out",
    "beta",      "n0",        "max_steps",  "s",             "gamma",      "t_grid",
    "delta_grid", "t_fixed",  "bounds",     "trials",        "horizon",    "kl_trials",
    "kl_horizon"};

template <class T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw DomainError(fmt::format("config key \"{}\": {}", key, e.what()));
  }
}

model::Instance instance_from(const json& j, const std::string& where) {
  try {
    return model::instance_from_json(j.dump());
  } catch (const DomainError& e) {
    throw DomainError(fmt::format("{}: {}", where, e.what()));
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(fmt::format("{}: JSON parse error at {}: {}", what,
                                  model::json_error_location(text, e.byte), e.what()));
  }
}

void append_instances(const json& j, std::vector<model::Instance>& out, const std::string& where) {
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      out.push_back(instance_from(j[i], fmt::format("{}[{}]", where, i)));
    }
  } else if (j.is_object() && j.contains("instances")) {
    append_instances(j.at("instances"), out, where + ".instances");
  } else {
    out.push_back(instance_from(j, where));
  }
}

json instance_json(const model::Instance& inst) {
  return json{{"means", inst.means}, {"variances", inst.variances}};
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& base_dir) {
  const json j = parse_text(text, "config");
  if (!j.is_object()) throw DomainError("config must be a JSON object");
  for (const auto& item : j.items()) {
    if (!kKeys.count(item.key())) throw DomainError("unknown config key \"" + item.key() + "\"");
  }
  ExperimentConfig c;
  if (j.contains("command")) c.command = get_as<std::string>(j, "command");
  if (j.contains("instances")) append_instances(j.at("instances"), c.instances, "instances");
  if (j.contains("instance")) append_instances(j.at("instance"), c.instances, "instance");
  if (j.contains("instance_file")) {
    std::filesystem::path path = get_as<std::string>(j, "instance_file");
    if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
    const std::string body = read_file(path.string());
    append_instances(parse_text(body, path.string()), c.instances, path.string());
  }
  if (j.contains("random")) {
    const json& r = j.at("random");
    if (!r.is_object()) throw DomainError("config key \"random\" must be an object");
    RandomSpec spec;
    for (const auto& item : r.items()) {
      const std::string& k = item.key();
      if (k == "count") spec.count = get_as<std::size_t>(r, "count");
      else if (k == "K") spec.K = get_as<std::size_t>(r, "K");
      else if (k == "gap_lo") spec.gap_lo = get_as<double>(r, "gap_lo");
      else if (k == "gap_hi") spec.gap_hi = get_as<double>(r, "gap_hi");
      else if (k == "var_lo") spec.var_lo = get_as<double>(r, "var_lo");
      else if (k == "var_hi") spec.var_hi = get_as<double>(r, "var_hi");
      else throw DomainError("unknown key \"random." + k + "\"");
    }
    if (spec.K < 2) throw DomainError("random.K must be >= 2");
    if (!(spec.gap_lo > 0.0 && spec.gap_hi >= spec.gap_lo)) throw DomainError("bad random gaps");
    if (!(spec.var_lo > 0.0 && spec.var_hi >= spec.var_lo)) throw DomainError("bad random variances");
    c.random = spec;
  }
  if (j.contains("samplers")) c.samplers = get_as<std::vector<std::string>>(j, "samplers");
  if (j.contains("thresholds")) c.thresholds = get_as<std::vector<std::string>>(j, "thresholds");
  if (j.contains("deltas")) c.deltas = get_as<std::vector<double>>(j, "deltas");
  if (j.contains("episodes")) c.episodes = get_as<std::size_t>(j, "episodes");
  if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j, "seed");
  if (j.contains("parallelism")) c.parallelism = get_as<std::size_t>(j, "parallelism");
  if (j.contains("out")) c.out = get_as<std::string>(j, "out");
  if (j.contains("beta")) c.beta = get_as<double>(j, "beta");
  if (j.contains("n0")) c.n0 = get_as<int>(j, "n0");
  if (j.contains("max_steps")) c.max_steps = get_as<std::int64_t>(j, "max_steps");
  if (j.contains("s")) c.s = get_as<double>(j, "s");
  if (j.contains("gamma")) c.gamma = get_as<double>(j, "gamma");
  if (j.contains("t_grid")) c.t_grid = get_as<std::vector<std::int64_t>>(j, "t_grid");
  if (j.contains("delta_grid")) c.delta_grid = get_as<std::vector<double>>(j, "delta_grid");
  if (j.contains("t_fixed")) c.t_fixed = get_as<std::int64_t>(j, "t_fixed");
  if (j.contains("bounds")) c.bounds = get_as<std::vector<std::string>>(j, "bounds");
  if (j.contains("trials")) c.trials = get_as<std::size_t>(j, "trials");
  if (j.contains("horizon")) c.horizon = get_as<std::int64_t>(j, "horizon");
  if (j.contains("kl_trials")) c.kl_trials = get_as<std::size_t>(j, "kl_trials");
  if (j.contains("kl_horizon")) c.kl_horizon = get_as<std::int64_t>(j, "kl_horizon");

  for (double d : c.deltas) {
    if (!(d > 0.0 && d < 1.0)) throw DomainError("deltas must lie in (0, 1)");
  }
  for (double d : c.delta_grid) {
    if (!(d > 0.0 && d < 1.0)) throw DomainError("delta_grid must lie in (0, 1)");
  }
  for (std::int64_t t : c.t_grid) {
    if (t < 1) throw DomainError("t_grid entries must be >= 1");
  }
  if (c.parallelism < 1) throw DomainError("parallelism must be >= 1");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  const auto base = std::filesystem::path(path).parent_path();
  return parse_config(read_file(path), base.empty() ? "." : base.string());
}

std::string serialize_config(const ExperimentConfig& c) {
  json j;
  if (!c.command.empty()) j["command"] = c.command;
  json insts = json::array();
  for (const auto& inst : c.instances) insts.push_back(instance_json(inst));
  j["instances"] = insts;
  if (c.random) {
    const auto& r = *c.random;
    j["random"] = {{"count", r.count},   {"K", r.K},           {"gap_lo", r.gap_lo},
                   {"gap_hi", r.gap_hi}, {"var_lo", r.var_lo}, {"var_hi", r.var_hi}};
  }
  j["samplers"] = c.samplers;
  j["thresholds"] = c.thresholds;
  j["deltas"] = c.deltas;
  j["episodes"] = c.episodes;
  j["seed"] = c.seed;
  j["parallelism"] = c.parallelism;
  if (!c.out.empty()) j["out"] = c.out;
  j["beta"] = c.beta;
  j["n0"] = c.n0;
  j["max_steps"] = c.max_steps;
  j["s"] = c.s;
  j["gamma"] = c.gamma;
  j["t_grid"] = c.t_grid;
  j["delta_grid"] = c.delta_grid;
  j["t_fixed"] = c.t_fixed;
  j["bounds"] = c.bounds;
  j["trials"] = c.trials;
  j["horizon"] = c.horizon;
  j["kl_trials"] = c.kl_trials;
  j["kl_horizon"] = c.kl_horizon;
  return j.dump(2);
}

model::Instance standard_instance() {
  return {{1.0, 0.85, 0.8, 0.7, 0.65}, {1.0, 0.6, 0.5, 0.4, 0.35}};
}

model::Instance easy_instance() {
  return {{1.0, 0.2, 0.15, 0.1, 0.05}, {1.0, 0.05, 0.05, 0.05, 0.05}};
}

model::Instance random_instance(rng::Stream& rng, const RandomSpec& spec) {
  model::Instance inst;
  inst.means.push_back(0.0);
  inst.variances.push_back(1.0);
  for (std::size_t a = 1; a < spec.K; ++a) {
    inst.means.push_back(-rng.uniform(spec.gap_lo, spec.gap_hi));
    inst.variances.push_back(rng.uniform(spec.var_lo, spec.var_hi));
  }
  return inst;
}

std::vector<model::Instance> resolve_instances(const ExperimentConfig& config) {
  std::vector<model::Instance> out = config.instances;
  if (config.random) {
    rng::Stream rng(rng::split(config.seed, 0x72616e64ULL));
    for (std::size_t i = 0; i < config.random->count; ++i) {
      out.push_back(random_instance(rng, *config.random));
    }
  }
  if (out.empty()) out.push_back(standard_instance());
  return out;
}

}  // namespace bai::cli
