#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "bai/stats.hpp"

namespace bai::thresholds {

enum class Family { Student, Box, KL, BoB, EVStudent, EVBox, EVBoB, Heuristic };

std::string family_name(Family f);
Family family_from_name(const std::string& name);
bool is_ev(Family f);

// Threshold family and hyper-parameters. eta0 and eta1 default to 1 / ln(1 / delta)
// and are kept fixed when the budget is split with with_delta().
struct ThresholdSpec {
  Family family = Family::Heuristic;
  double s = 2.0;
  double gamma = 1.2;
  double eta0 = 0.0;
  double eta1 = 0.0;
  double delta = 0.01;
  int K = 2;
  double zeta_s = 0.0;  // zeta(s), cached

  static ThresholdSpec make(Family family, double delta, int K, double s = 2.0,
                            double gamma = 1.2);
  ThresholdSpec with_delta(double new_delta) const;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Concentration widths. Each takes the budget d and uses the log term
// ln(4 (K - 1) zeta(s) / d); the KL threshold calls them with d = delta / 3,
// which yields its ln(12 (K - 1) zeta(s) / delta) terms.
double eps_mu(double t, double d, const ThresholdSpec& spec);
// Throws DomainError when 1 - eps_sigma_minus <= 0 (the Box gate is not met).
double eps_sigma_minus(double t, double d, const ThresholdSpec& spec);
double eps_sigma_plus(double t, double d, const ThresholdSpec& spec);

// Initial-time gates on a per-arm count.
bool box_gate(std::int64_t n, double d, const ThresholdSpec& spec);
bool m_gate(std::int64_t n, double d, const ThresholdSpec& spec);
std::int64_t first_box_gate_count(double d, const ThresholdSpec& spec);
std::int64_t first_m_gate_count(double d, const ThresholdSpec& spec);

// Pair thresholds; +inf until the family's gates hold for both arms.
double c_student(std::int64_t na, std::int64_t nb, const ThresholdSpec& spec, bool ev);
double c_box(std::int64_t na, std::int64_t nb, const ThresholdSpec& spec, bool ev);
double c_kl(const stats::ArmStats& a, const stats::ArmStats& b, const ThresholdSpec& spec);
double c_bob(const stats::ArmStats& a, const stats::ArmStats& b, const ThresholdSpec& spec,
             bool ev);
double c_heuristic(double t, double delta);

// Approximation-error ratio R of the KL threshold, from an arm's anchor.
// +inf when the anchor is too early for the crude region to be defined.
double kl_ratio(std::int64_t anchor_count, double anchor_mean, double anchor_var,
                const ThresholdSpec& spec);

// Dispatch on spec.family. total_t is the global sample count.
double threshold(const ThresholdSpec& spec, const stats::ArmStats& a, const stats::ArmStats& b,
                 std::int64_t total_t);

// Box-over-KL optimization:
//   max sum_c (n_c / 2) phi(y_c),  phi = ln(1 + y) or y (ev)
//   s.t. 0 <= y_c, x_c y_c <= A_c, x_c >= D_c, sum_c (n_c / 2) f(x_c, y_c) <= E
// with f(x, y) = (1 + y) x - 1 - ln x.
struct BobProblem {
  double n[2];
  double A[2];
  double D[2];
  double E;
  bool ev;
};

struct BobSolution {
  double value = 0.0;
  double y[2] = {0.0, 0.0};
  double x[2] = {1.0, 1.0};
  double multiplier = 0.0;
  double kkt_residual = 0.0;
  bool kl_active = false;
};

inline constexpr double kKktTolerance = 1e-8;

// Throws SolverError when the KKT residual exceeds kKktTolerance.
BobSolution bob_solve(const BobProblem& p);

// min over x in [D, A / y] of f(x, y); the KL cost of mean gap y under the box.
double bob_min_kl(double y, double A, double D);

}  // namespace bai::thresholds
