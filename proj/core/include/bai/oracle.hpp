#pragma once

#include <cstddef>
#include <vector>

#include "bai/model.hpp"

namespace bai::oracle {

// A point of the simplex together with its characteristic time.
struct Allocation {
  std::vector<double> weights;
  double char_time = 0.0;        // T*, in samples
  double equalized_value = 0.0;  // common pairwise cost min_a C(a*, a; w) = 1 / char_time
};

enum class VarianceModel { Unknown, Known };

// For suboptimal arm a and weight ratio x = w_a / w_best:
//   lambda_of_x: argmin over lambda of d_best(lambda) + x d_a(lambda)
//   g_eval:      the minimum value, increasing in x with supremum d_best(mu_a)
//   x_of_y:      inverse of g_eval on [0, d_best(mu_a))
// where d_c(lambda) = ln(1 + (lambda - mu_c)^2 / var_c) for the unknown-variance model
// and (lambda - mu_c)^2 / var_c for the known-variance model.
double lambda_of_x(const model::Instance& inst, std::size_t a, double x,
                   VarianceModel vm = VarianceModel::Unknown);
double g_eval(const model::Instance& inst, std::size_t a, double x,
              VarianceModel vm = VarianceModel::Unknown);
double x_of_y(const model::Instance& inst, std::size_t a, double y,
              VarianceModel vm = VarianceModel::Unknown);

// d_best(mu_a), the supremum of g_eval for arm a.
double g_sup(const model::Instance& inst, std::size_t a,
             VarianceModel vm = VarianceModel::Unknown);

// F(y) = sum_{a != best} d_best(lambda_a) / d_a(lambda_a) with lambda_a = lambda_of_x(x_of_y(y)).
// The optimal allocation solves F(y) = 1.
double F_of_y(const model::Instance& inst, double y, VarianceModel vm = VarianceModel::Unknown);

Allocation optimal_allocation(const model::Instance& inst, VarianceModel vm);
Allocation optimal_allocation_unknown(const model::Instance& inst);
Allocation optimal_allocation_known(const model::Instance& inst);

// Maximin allocation under the constraint w_best = beta.
//
// With w_best fixed each pairwise cost depends on its own w_a only, through
// C_a = (beta / 2) g_a(w_a / beta), and is increasing in w_a. The maximin point
// therefore equalizes the C_a, which reduces to finding the level y with
// sum_a x_a(y) = (1 - beta) / beta.
Allocation beta_allocation(const model::Instance& inst, double beta, bool variance_known);

// T*(mu, var) ln(1 / (2.4 delta)), clamped at zero.
double lower_bound_samples(const model::Instance& inst, double delta);

}  // namespace bai::oracle
