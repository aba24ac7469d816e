#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bai/thresholds.hpp"

namespace bai::validation {

// Time-uniform coverage: a trajectory counts as one violation if the bound
// fails at any checked step up to the horizon.
struct CoverageReport {
  std::string bound;
  double delta = 0.0;
  std::size_t trials = 0;
  std::int64_t horizon = 0;
  std::size_t violations = 0;
  double rate = 0.0;
  double wilson_lo = 0.0;
  double wilson_hi = 0.0;
  std::uint64_t checks = 0;  // step-level comparisons performed, over all trials
};

struct McOptions {
  std::size_t trials = 10000;
  std::int64_t horizon = 1000;
  std::uint64_t seed = 0;
  std::size_t parallelism = 1;
  // Multiplies every sample; bounds are scale free so reports should not move.
  double scale = 1.0;
  // Added to every sample; the mean bound is shift invariant.
  double shift = 0.0;
};

// 95% Wilson score interval for k successes out of n.
std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z = 1.959963984540054);

CoverageReport make_report(std::string bound, double delta, std::size_t trials,
                           std::int64_t horizon, std::size_t violations, std::uint64_t checks);

// Upper and lower time-uniform bounds on the biased variance of t + 1
// standard normal samples; the lower bound is checked once t passes its gate.
double variance_upper_bound(std::int64_t t, double delta, double eta1, double s);
double variance_lower_bound(std::int64_t t, double delta, double eta0, double s);
bool variance_lower_gate(std::int64_t t, double delta, double eta0, double s);

struct VarianceTails {
  CoverageReport upper;
  CoverageReport lower;
};

VarianceTails mc_variance_tails(double delta, double eta0, double eta1, double s,
                                const McOptions& opt);

// Time-uniform radius for |mu_t - mu| / sigma after t samples.
double mean_radius(std::int64_t t, double delta, double s);

CoverageReport mc_mean_tail(double delta, double s, const McOptions& opt);

// Two arms sampled alternately from mu = (0, -0.2), var = (1, 0.5). Checks
// sum_c N_c KL((mu_c_hat, var_c_hat), (mu_c, var_c)) <= c_kl once both arms
// pass the KL gates. `spec` must have K = 2.
CoverageReport mc_kl_sum(const thresholds::ThresholdSpec& spec, const McOptions& opt);

std::string coverage_csv_header();
std::string coverage_csv_row(const CoverageReport& r);

}  // namespace bai::validation
