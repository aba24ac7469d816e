#include "bai/validation.hpp"

#include <cmath>
#include <numbers>
#include <tuple>
#include <utility>

#include "bai/errors.hpp"
#include "bai/format.hpp"
#include "bai/model.hpp"
#include "bai/parallel.hpp"
#include "bai/rng.hpp"
#include "bai/specfn.hpp"
#include "bai/stats.hpp"

namespace bai::validation {

std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * nn)) / (1.0 + z2 / nn);
  const double half = z / (1.0 + z2 / nn) * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
  const double lo = k == 0 ? 0.0 : std::max(0.0, centre - half);
  const double hi = k == n ? 1.0 : std::min(1.0, centre + half);
  return {lo, hi};
}

CoverageReport make_report(std::string bound, double delta, std::size_t trials,
                           std::int64_t horizon, std::size_t violations, std::uint64_t checks) {
  CoverageReport r;
  r.bound = std::move(bound);
  r.delta = delta;
  r.trials = trials;
  r.horizon = horizon;
  r.violations = violations;
  r.rate = trials ? static_cast<double>(violations) / static_cast<double>(trials) : 0.0;
  std::tie(r.wilson_lo, r.wilson_hi) = wilson_interval(violations, trials);
  r.checks = checks;
  return r;
}

namespace {

double peel(double t, double delta, double eta, double s) {
  return 2.0 * (1.0 + eta) / t *
         (std::log(specfn::zeta(s) / delta) + s * std::log1p(std::log(t) / std::log1p(eta)));
}

void check_common(double delta, const McOptions& opt) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("validation: delta must be in (0, 1)");
  if (opt.trials < 1 || opt.horizon < 1) throw DomainError("validation: empty experiment");
  if (!(opt.scale > 0.0)) throw DomainError("validation: scale must be positive");
}

}  // namespace

double variance_upper_bound(std::int64_t t, double delta, double eta1, double s) {
  const double td = static_cast<double>(t);
  return specfn::wbar_m1(1.0 + peel(td, delta, eta1, s)) - 1.0 / td;
}

double variance_lower_bound(std::int64_t t, double delta, double eta0, double s) {
  const double td = static_cast<double>(t);
  return specfn::wbar_0(1.0 + peel(td, delta, eta0, s)) - 1.0 / td;
}

bool variance_lower_gate(std::int64_t t, double delta, double eta0, double s) {
  const double td = static_cast<double>(t);
  const double inner = 2.0 * (1.0 + eta0) / std::numbers::e *
                           (std::log(specfn::zeta(s) / delta) +
                            s * std::log1p(std::log(td) / std::log1p(eta0))) -
                       1.0 / std::numbers::e;
  return td > std::exp(1.0 + specfn::lambert_w0(inner));
}

VarianceTails mc_variance_tails(double delta, double eta0, double eta1, double s,
                                const McOptions& opt) {
  check_common(delta, opt);
  const std::int64_t H = opt.horizon;
  std::vector<double> upper(H + 1), lower(H + 1);
  std::vector<char> gate(H + 1, 0);
  for (std::int64_t t = 1; t <= H; ++t) {
    upper[t] = variance_upper_bound(t, delta, eta1, s);
    gate[t] = variance_lower_gate(t, delta, eta0, s) ? 1 : 0;
    lower[t] = gate[t] ? variance_lower_bound(t, delta, eta0, s) : 0.0;
  }
  const double var = opt.scale * opt.scale;
  std::vector<char> up_hit(opt.trials, 0), lo_hit(opt.trials, 0);
  std::vector<std::uint64_t> lo_checks(opt.trials, 0);
  parallel_for(opt.trials, opt.parallelism, [&](std::size_t i) {
    rng::Stream rng(rng::split(opt.seed, i));
    stats::ArmStats arm;
    arm.push(opt.shift + opt.scale * rng.normal());
    for (std::int64_t t = 1; t <= H; ++t) {
      arm.push(opt.shift + opt.scale * rng.normal());
      const double ratio = arm.variance() / var;
      if (ratio > upper[t]) up_hit[i] = 1;
      if (gate[t]) {
        ++lo_checks[i];
        if (ratio < lower[t]) lo_hit[i] = 1;
      }
    }
  });
  std::size_t up = 0, lo = 0;
  std::uint64_t lc = 0;
  for (std::size_t i = 0; i < opt.trials; ++i) {
    up += up_hit[i];
    lo += lo_hit[i];
    lc += lo_checks[i];
  }
  const std::uint64_t uc = static_cast<std::uint64_t>(opt.trials) * static_cast<std::uint64_t>(H);
  return {make_report("variance-upper", delta, opt.trials, H, up, uc),
          make_report("variance-lower", delta, opt.trials, H, lo, lc)};
}

double mean_radius(std::int64_t t, double delta, double s) {
  const double td = static_cast<double>(t);
  const double g = std::log(specfn::zeta(s)) + s * (1.0 - std::log(2.0 * s));
  const double arg = 1.0 + 2.0 * std::log(1.0 / delta) + 2.0 * g + 2.0 * s * std::log(2.0 * s + std::log(td));
  return std::sqrt(specfn::wbar_m1(arg) / td);
}

CoverageReport mc_mean_tail(double delta, double s, const McOptions& opt) {
  check_common(delta, opt);
  const std::int64_t H = opt.horizon;
  std::vector<double> radius(H + 1);
  for (std::int64_t t = 1; t <= H; ++t) radius[t] = mean_radius(t, delta, s);
  std::vector<char> hit(opt.trials, 0);
  parallel_for(opt.trials, opt.parallelism, [&](std::size_t i) {
    rng::Stream rng(rng::split(opt.seed, i));
    double sum = 0.0;
    for (std::int64_t t = 1; t <= H; ++t) {
      sum += opt.shift + opt.scale * rng.normal();
      const double dev = sum / static_cast<double>(t) - opt.shift;
      if (std::abs(dev) > opt.scale * radius[t]) {
        hit[i] = 1;
        break;
      }
    }
  });
  std::size_t v = 0;
  for (char h : hit) v += h;
  return make_report("mean", delta, opt.trials, H, v,
                     static_cast<std::uint64_t>(opt.trials) * static_cast<std::uint64_t>(H));
}

CoverageReport mc_kl_sum(const thresholds::ThresholdSpec& spec, const McOptions& opt) {
  check_common(spec.delta, opt);
  if (spec.K != 2) throw DomainError("mc_kl_sum: spec must have K = 2");
  const double mu[2] = {0.0, -0.2};
  const double var[2] = {1.0, 0.5};
  const std::int64_t H = opt.horizon;
  std::vector<char> hit(opt.trials, 0);
  std::vector<std::uint64_t> checks(opt.trials, 0);
  parallel_for(opt.trials, opt.parallelism, [&](std::size_t i) {
    rng::Stream rng(rng::split(opt.seed, i));
    stats::ArmStats arms[2] = {stats::ArmStats(spec.gamma), stats::ArmStats(spec.gamma)};
    for (std::int64_t t = 1; t <= H; ++t) {
      const int a = static_cast<int>((t - 1) % 2);
      arms[a].push(opt.shift + mu[a] + opt.scale * std::sqrt(var[a]) * rng.normal());
      if (arms[0].count < 2 || arms[1].count < 2) continue;
      const double c = thresholds::c_kl(arms[0], arms[1], spec);
      if (!std::isfinite(c)) continue;
      ++checks[i];
      double stat = 0.0;
      for (int b = 0; b < 2; ++b) {
        stat += static_cast<double>(arms[b].count) *
                model::kl_gaussian(arms[b].mean, arms[b].variance(), opt.shift + mu[b],
                                   opt.scale * opt.scale * var[b]);
      }
      if (stat > c) {
        hit[i] = 1;
        break;
      }
    }
  });
  std::size_t v = 0;
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < opt.trials; ++i) {
    v += hit[i];
    n += checks[i];
  }
  return make_report("kl-sum", spec.delta, opt.trials, H, v, n);
}

std::string coverage_csv_header() {
  return "bound,delta,trials,horizon,violations,rate,wilson_lo,wilson_hi";
}

std::string coverage_csv_row(const CoverageReport& r) {
  return format::join({r.bound, format::num(r.delta), std::to_string(r.trials),
                       std::to_string(r.horizon), std::to_string(r.violations),
                       format::num(r.rate), format::num(r.wilson_lo), format::num(r.wilson_hi)});
}

}  // namespace bai::validation
