#include "bai/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <json.hpp>

#include "bai/errors.hpp"
#include "bai/specfn.hpp"

namespace bai::model {

void Instance::validate() const {
  if (means.size() < 2) throw DomainError("instance needs at least two arms");
  if (means.size() != variances.size()) {
    throw DomainError("instance means and variances differ in length");
  }
  for (std::size_t a = 0; a < means.size(); ++a) {
    if (!std::isfinite(means[a])) throw DomainError(fmt::format("mean {} is not finite", a));
    if (!(variances[a] > 0.0) || !std::isfinite(variances[a])) {
      throw DomainError(fmt::format("variance {} must be positive and finite", a));
    }
  }
}

std::optional<std::size_t> Instance::unique_best() const {
  if (means.empty()) return std::nullopt;
  const auto it = std::max_element(means.begin(), means.end());
  const std::size_t best = static_cast<std::size_t>(it - means.begin());
  for (std::size_t a = 0; a < means.size(); ++a) {
    if (a != best && means[best] - means[a] <= kTieTolerance) return std::nullopt;
  }
  return best;
}

std::size_t Instance::best_arm() const {
  const auto best = unique_best();
  if (!best) throw TieError("best arm is not unique");
  return *best;
}

double kl_gaussian(double m1, double v1, double m2, double v2) {
  if (!(v1 > 0.0 && v2 > 0.0)) throw DomainError("kl_gaussian: variances must be > 0");
  const double r = v1 / v2;
  const double d = m1 - m2;
  return 0.5 * (d * d / v2 + r - 1.0 - std::log(r));
}

double kl_profile_variance(double m1, double v1, double m2) {
  if (!(v1 > 0.0)) throw DomainError("kl_profile_variance: variance must be > 0");
  const double d = m1 - m2;
  return 0.5 * std::log1p(d * d / v1);
}

double stationary_lambda(double ma, double va, double mb, double vb, double x) {
  // Shift to u = lambda - ma so the cubic is centred on the better arm.
  const double m = mb - ma;
  const double inv = 1.0 / (1.0 + x);
  const double c2 = -m * (2.0 + x) * inv;
  const double c1 = (vb + m * m + x * va) * inv;
  const double c0 = -x * m * va * inv;
  const auto roots = specfn::cubic_real_roots(c2, c1, c0);

  const double lo = std::min(m, 0.0);
  const double hi = std::max(m, 0.0);
  auto objective = [&](double u) {
    const double du = u - m;
    return std::log1p(u * u / va) + x * std::log1p(du * du / vb);
  };
  double best_u = 0.0;
  double best_val = objective(0.0);
  auto consider = [&](double u) {
    const double val = objective(u);
    if (val < best_val) {
      best_val = val;
      best_u = u;
    }
  };
  consider(m);
  for (double r : roots) {
    if (r >= lo && r <= hi) consider(r);
  }
  return ma + best_u;
}

PairCost cost_known_raw(double ma, double va, double wa, double mb, double vb, double wb) {
  if (ma - mb <= kTieTolerance || wa <= 0.0 || wb <= 0.0) {
    return PairCost{0.0, wb <= 0.0 ? ma : mb};
  }
  const double pa = wa / va;
  const double pb = wb / vb;
  const double gap = ma - mb;
  return PairCost{0.5 * gap * gap / (va / wa + vb / wb), (pa * ma + pb * mb) / (pa + pb)};
}

PairCost cost_unknown_raw(double ma, double va, double wa, double mb, double vb, double wb) {
  if (ma - mb <= kTieTolerance || wa <= 0.0 || wb <= 0.0) {
    return PairCost{0.0, wb <= 0.0 ? ma : mb};
  }
  const double lambda = stationary_lambda(ma, va, mb, vb, wb / wa);
  const double da = lambda - ma;
  const double db = lambda - mb;
  const double value =
      0.5 * wa * std::log1p(da * da / va) + 0.5 * wb * std::log1p(db * db / vb);
  return PairCost{value, lambda};
}

namespace {

void check_pair(const Instance& inst, std::size_t a, std::size_t b,
                const std::vector<double>& w) {
  if (a >= inst.size() || b >= inst.size()) throw DomainError("arm index out of range");
  if (w.size() != inst.size()) throw DomainError("weight vector has wrong length");
  if (w[a] < 0.0 || w[b] < 0.0) throw DomainError("weights must be nonnegative");
}

}  // namespace

PairCost cost_known(const Instance& inst, std::size_t a, std::size_t b,
                    const std::vector<double>& w) {
  check_pair(inst, a, b, w);
  return cost_known_raw(inst.means[a], inst.variances[a], w[a], inst.means[b],
                        inst.variances[b], w[b]);
}

PairCost cost_unknown(const Instance& inst, std::size_t a, std::size_t b,
                      const std::vector<double>& w) {
  check_pair(inst, a, b, w);
  return cost_unknown_raw(inst.means[a], inst.variances[a], w[a], inst.means[b],
                          inst.variances[b], w[b]);
}

double dmax(const Instance& inst) {
  const std::size_t best = inst.best_arm();
  double out = 0.0;
  for (std::size_t a = 0; a < inst.size(); ++a) {
    if (a == best) continue;
    const double gap = inst.means[best] - inst.means[a];
    out = std::max(out, gap * gap / std::min(inst.variances[a], inst.variances[best]));
  }
  return out;
}

std::string json_error_location(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return fmt::format("line {}, column {}", line, col);
}

Instance instance_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(fmt::format("instance JSON parse error at {}: {}",
                                  json_error_location(text, e.byte), e.what()));
  }
  if (!j.is_object() || !j.contains("means") || !j.contains("variances")) {
    throw DomainError("instance JSON must be an object with \"means\" and \"variances\"");
  }
  Instance inst;
  try {
    inst.means = j.at("means").get<std::vector<double>>();
    inst.variances = j.at("variances").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(fmt::format("instance JSON has non-numeric entries: {}", e.what()));
  }
  inst.validate();
  return inst;
}

std::string instance_to_json(const Instance& inst) {
  std::string out = "{\"means\":[";
  for (std::size_t a = 0; a < inst.means.size(); ++a) {
    out += fmt::format("{}{:.17g}", a ? "," : "", inst.means[a]);
  }
  out += "],\"variances\":[";
  for (std::size_t a = 0; a < inst.variances.size(); ++a) {
    out += fmt::format("{}{:.17g}", a ? "," : "", inst.variances[a]);
  }
  out += "]}";
  return out;
}

}  // namespace bai::model
