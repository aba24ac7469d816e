#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace bai::model {

// Gaussian bandit ground truth.
struct Instance {
  std::vector<double> means;
  std::vector<double> variances;

  std::size_t size() const { return means.size(); }

  // Throws DomainError unless K >= 2, lengths agree and variances are > 0.
  void validate() const;

  // Index of the unique maximal mean, or nullopt when the maximum is tied.
  std::optional<std::size_t> unique_best() const;

  // Like unique_best() but throws TieError on ties.
  std::size_t best_arm() const;
};

// Means closer than this are treated as tied.
inline constexpr double kTieTolerance = 1e-12;

// Transportation cost between a pair of arms.
struct PairCost {
  double value = 0.0;           // nats
  double minimizer_mean = 0.0;  // argmin of the inner infimum; meaningless when value == 0
};

double kl_gaussian(double m1, double v1, double m2, double v2);

// inf over the second variance of kl_gaussian(m1, v1, m2, .) = 0.5 ln(1 + (m1 - m2)^2 / v1).
double kl_profile_variance(double m1, double v1, double m2);

// Known-variance cost 0.5 (mu_a - mu_b)^2 / (var_a / w_a + var_b / w_b), zero unless mu_a > mu_b.
PairCost cost_known(const Instance& inst, std::size_t a, std::size_t b,
                    const std::vector<double>& w);

// Unknown-variance cost: inf over lambda in [mu_b, mu_a] of
// sum_{c in {a, b}} (w_c / 2) ln(1 + (mu_c - lambda)^2 / var_c).
PairCost cost_unknown(const Instance& inst, std::size_t a, std::size_t b,
                      const std::vector<double>& w);

// Same two costs on raw parameters; used by the statistics layer.
PairCost cost_known_raw(double ma, double va, double wa, double mb, double vb, double wb);
PairCost cost_unknown_raw(double ma, double va, double wa, double mb, double vb, double wb);

// Minimizer over lambda in [mb, ma] of ln(1 + (lambda - ma)^2 / va) + x ln(1 + (lambda - mb)^2 / vb),
// found among the real roots of the stationarity cubic and the two endpoints.
double stationary_lambda(double ma, double va, double mb, double vb, double x);

// max over a != a* of (mu_{a*} - mu_a)^2 / min(var_a, var_{a*}).
double dmax(const Instance& inst);

// "line L, column C" for a 1-based byte offset reported by a JSON parser.
std::string json_error_location(const std::string& text, std::size_t byte);

// JSON object {"means": [...], "variances": [...]}.
Instance instance_from_json(const std::string& text);
std::string instance_to_json(const Instance& inst);

}  // namespace bai::model
