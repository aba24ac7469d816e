#include "bai/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bai/errors.hpp"
#include "bai/specfn.hpp"

namespace bai::thresholds {

std::string family_name(Family f) {
  switch (f) {
    case Family::Student: return "student";
    case Family::Box: return "box";
    case Family::KL: return "kl";
    case Family::BoB: return "bob";
    case Family::EVStudent: return "ev-student";
    case Family::EVBox: return "ev-box";
    case Family::EVBoB: return "ev-bob";
    case Family::Heuristic: return "heuristic";
  }
  return "unknown";
}

Family family_from_name(const std::string& name) {
  for (Family f : {Family::Student, Family::Box, Family::KL, Family::BoB, Family::EVStudent,
                   Family::EVBox, Family::EVBoB, Family::Heuristic}) {
    if (family_name(f) == name) return f;
  }
  throw DomainError("unknown threshold family: " + name);
}

bool is_ev(Family f) {
  return f == Family::EVStudent || f == Family::EVBox || f == Family::EVBoB;
}

ThresholdSpec ThresholdSpec::make(Family family, double delta, int K, double s, double gamma) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("threshold delta must be in (0, 1)");
  if (K < 2) throw DomainError("threshold K must be >= 2");
  if (!(s > 1.0) || !(gamma > 1.0)) throw DomainError("threshold needs s > 1 and gamma > 1");
  ThresholdSpec spec;
  spec.family = family;
  spec.s = s;
  spec.gamma = gamma;
  spec.eta0 = 1.0 / std::log(1.0 / delta);
  spec.eta1 = spec.eta0;
  spec.delta = delta;
  spec.K = K;
  spec.zeta_s = specfn::zeta(s);
  return spec;
}

ThresholdSpec ThresholdSpec::with_delta(double new_delta) const {
  ThresholdSpec out = *this;
  out.delta = new_delta;
  return out;
}

namespace {

double box_log(double d, const ThresholdSpec& spec) {
  return std::log(4.0 * (spec.K - 1) * spec.zeta_s / d);
}

double peel_term(double t, double eta, const ThresholdSpec& spec) {
  return spec.s * std::log1p(std::log(t) / std::log1p(eta));
}

// 1 - eps_sigma_minus; may be <= 0 before the Box gate.
double one_minus_eps_minus(double t, double d, const ThresholdSpec& spec) {
  const double arg =
      1.0 + 2.0 * (1.0 + spec.eta0) / t * (box_log(d, spec) + peel_term(t, spec.eta0, spec));
  return specfn::wbar_0(arg) - 1.0 / t;
}

bool both(std::int64_t na, std::int64_t nb, auto&& pred) { return pred(na) && pred(nb); }

}  // namespace

double eps_mu(double t, double d, const ThresholdSpec& spec) {
  if (!(t >= 1.0)) throw DomainError("eps_mu: t must be >= 1");
  const double s = spec.s;
  const double arg = 1.0 + 2.0 * box_log(d, spec) + 2.0 * s +
                     2.0 * s * std::log1p(std::log(t) / (2.0 * s));
  return specfn::wbar_m1(arg) / t;
}

double eps_sigma_minus(double t, double d, const ThresholdSpec& spec) {
  if (!(t >= 1.0)) throw DomainError("eps_sigma_minus: t must be >= 1");
  const double v = one_minus_eps_minus(t, d, spec);
  if (!(v > 0.0)) throw DomainError("eps_sigma_minus: Box gate not satisfied");
  return 1.0 - v;
}

double eps_sigma_plus(double t, double d, const ThresholdSpec& spec) {
  if (!(t >= 1.0)) throw DomainError("eps_sigma_plus: t must be >= 1");
  const double arg =
      1.0 + 2.0 * (1.0 + spec.eta1) / t * (box_log(d, spec) + peel_term(t, spec.eta1, spec));
  return specfn::wbar_m1(arg) - 1.0 / t - 1.0;
}

bool box_gate(std::int64_t n, double d, const ThresholdSpec& spec) {
  if (n < 2) return false;
  const double tm1 = static_cast<double>(n - 1);
  const double inner = (2.0 * (1.0 + spec.eta0) / std::numbers::e) *
                           (box_log(d, spec) + peel_term(tm1, spec.eta0, spec)) -
                       1.0 / std::numbers::e;
  return static_cast<double>(n) > 1.0 + std::exp(1.0 + specfn::lambert_w0(inner));
}

bool m_gate(std::int64_t n, double d, const ThresholdSpec& spec) {
  const double l12 = std::log(12.0 * (spec.K - 1) * spec.zeta_s / d);
  const double first = std::exp(spec.s / l12) / (1.0 + spec.eta0);
  const double den = l12 - 1.0 / (2.0 * (1.0 + spec.eta1));
  const double second = den > 0.0 ? std::exp(spec.s / den) / (1.0 + spec.eta1) : kInf;
  return static_cast<double>(n) > 1.0 + std::max(first, second);
}

std::int64_t first_box_gate_count(double d, const ThresholdSpec& spec) {
  std::int64_t n = 2;
  while (!box_gate(n, d, spec)) ++n;
  return n;
}

std::int64_t first_m_gate_count(double d, const ThresholdSpec& spec) {
  std::int64_t n = 1;
  while (!m_gate(n, d, spec)) ++n;
  return n;
}

double c_student(std::int64_t na, std::int64_t nb, const ThresholdSpec& spec, bool ev) {
  const double base = spec.delta / (4.0 * (spec.K - 1) * spec.zeta_s);
  const double min_n = std::max(2.0, std::pow(base, 1.0 / spec.s));
  auto beta = [&](std::int64_t n) {
    if (static_cast<double>(n) < min_n) return kInf;
    const double nd = static_cast<double>(n);
    const double alpha = base / std::pow(nd, spec.s);
    const double q = specfn::student_quantile_upper(alpha, static_cast<int>(n - 1));
    const double u = q * q / (nd - 1.0);
    return ev ? nd * u : nd * std::log1p(u);
  };
  return std::max(beta(na), beta(nb));
}

double c_box(std::int64_t na, std::int64_t nb, const ThresholdSpec& spec, bool ev) {
  if (!both(na, nb, [&](std::int64_t n) { return box_gate(n, spec.delta, spec); })) return kInf;
  double out = 0.0;
  for (std::int64_t n : {na, nb}) {
    const double nd = static_cast<double>(n);
    const double denom = one_minus_eps_minus(nd - 1.0, spec.delta, spec);
    if (!(denom > 0.0)) return kInf;
    const double ratio = eps_mu(nd, spec.delta, spec) / denom;
    out += ev ? 0.5 * nd * ratio : 0.5 * nd * std::log1p(ratio);
  }
  return out;
}

double kl_ratio(std::int64_t anchor_count, double anchor_mean, double anchor_var,
                const ThresholdSpec& spec) {
  if (anchor_count < 2 || !(anchor_var > 0.0)) return kInf;
  const double d = spec.delta / 3.0;
  const double n = static_cast<double>(anchor_count);
  const double lower = one_minus_eps_minus(n - 1.0, d, spec);  // 1 - eps_-
  if (!(lower > 0.0)) return kInf;
  const double upper = 1.0 + eps_sigma_plus(n - 1.0, d, spec);  // 1 + eps_+
  const double sd = std::sqrt(anchor_var);
  const double radius = 2.0 * sd * std::sqrt(eps_mu(n, d, spec) / lower);
  const double mu_pp =
      std::max(std::pow(anchor_mean + radius, 2.0), std::pow(anchor_mean - radius, 2.0));
  const double var_plus = anchor_var * upper / lower;
  const double var_minus = anchor_var * lower / upper;
  auto g = [](double x, double y) {
    const double den = x + 2.0 * y + 0.5;
    return 2.0 * x / (den * den);
  };
  auto f_plus = [](double x) { return (1.0 + std::sqrt(std::max(0.0, 1.0 - x))) / std::sqrt(x); };
  auto f_minus = [](double x) {
    // (1 - sqrt(1 - x)) / sqrt(x) written without cancellation.
    return std::sqrt(x) / (1.0 + std::sqrt(std::max(0.0, 1.0 - x)));
  };
  const double num = std::pow(var_plus, 1.5) * f_plus(g(var_plus, mu_pp));
  const double den = std::pow(var_minus, 1.5) * f_minus(g(var_minus, mu_pp));
  if (!(den > 0.0) || !std::isfinite(num)) return kInf;
  return num / den;
}

double c_kl(const stats::ArmStats& a, const stats::ArmStats& b, const ThresholdSpec& spec) {
  const double d = spec.delta;
  auto gated = [&](std::int64_t n) { return box_gate(n, d / 3.0, spec) && m_gate(n, d, spec); };
  if (!both(a.count, b.count, gated)) return kInf;
  double peel = 0.0;
  double approx = 0.0;
  for (const stats::ArmStats* arm : {&a, &b}) {
    const double r = kl_ratio(arm->anchor_count, arm->anchor_mean, arm->anchor_var, spec);
    if (!std::isfinite(r)) return kInf;
    peel += std::log1p(std::log(static_cast<double>(arm->count)) / std::log(spec.gamma));
    approx += std::log(spec.gamma * r);
  }
  const double z = spec.zeta_s;
  const double arg = 1.0 + std::log(2.0 * (spec.K - 1) * z * z / d) / 4.0 +
                     spec.s / 4.0 * peel + 0.5 * approx;
  return 4.0 * specfn::wbar_m1(arg);
}

double c_bob(const stats::ArmStats& a, const stats::ArmStats& b, const ThresholdSpec& spec,
             bool ev) {
  const double d = spec.delta;
  auto gated = [&](std::int64_t n) { return box_gate(n, d / 6.0, spec) && m_gate(n, d / 2.0, spec); };
  if (!both(a.count, b.count, gated)) return kInf;
  const ThresholdSpec half = spec.with_delta(d / 2.0);
  BobProblem p{};
  p.ev = ev;
  p.E = c_kl(a, b, half);
  const stats::ArmStats* arms[2] = {&a, &b};
  for (int c = 0; c < 2; ++c) {
    const double n = static_cast<double>(arms[c]->count);
    p.n[c] = n;
    p.A[c] = eps_mu(n, half.delta, half);
    p.D[c] = one_minus_eps_minus(n - 1.0, half.delta, half);
    if (!(p.D[c] > 0.0)) return kInf;
  }
  try {
    return bob_solve(p).value;
  } catch (const SolverError&) {
    return kInf;
  }
}

double c_heuristic(double t, double delta) {
  if (!(t >= 1.0)) throw DomainError("c_heuristic: t must be >= 1");
  return std::log((1.0 + std::log(t)) / delta);
}

double threshold(const ThresholdSpec& spec, const stats::ArmStats& a, const stats::ArmStats& b,
                 std::int64_t total_t) {
  switch (spec.family) {
    case Family::Student: return c_student(a.count, b.count, spec, false);
    case Family::EVStudent: return c_student(a.count, b.count, spec, true);
    case Family::Box: return c_box(a.count, b.count, spec, false);
    case Family::EVBox: return c_box(a.count, b.count, spec, true);
    case Family::KL: return c_kl(a, b, spec);
    case Family::BoB: return c_bob(a, b, spec, false);
    case Family::EVBoB: return c_bob(a, b, spec, true);
    case Family::Heuristic: return c_heuristic(static_cast<double>(total_t), spec.delta);
  }
  return kInf;
}

}  // namespace bai::thresholds
