#include "bai/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include <boost/math/tools/toms748_solve.hpp>

#include "bai/errors.hpp"

namespace bai::oracle {

namespace {

constexpr int kMaxIter = 200;
constexpr double kRelTol = 1e-12;
constexpr double kUpperShrink = 1e-9;

// The best arm against one challenger.
struct PairModel {
  double m1, v1, ma, va;
  bool known;

  double d1(double l) const {
    const double z = (l - m1) * (l - m1) / v1;
    return known ? z : std::log1p(z);
  }
  double da(double l) const {
    const double z = (l - ma) * (l - ma) / va;
    return known ? z : std::log1p(z);
  }
  double lambda(double x) const {
    if (x <= 0.0) return m1;
    if (known) return (m1 / v1 + x * ma / va) / (1.0 / v1 + x / va);
    return model::stationary_lambda(m1, v1, ma, va, x);
  }
  double g(double x) const {
    if (known) {
      const double gap = m1 - ma;
      return x * gap * gap / (x * v1 + va);
    }
    const double l = lambda(x);
    return d1(l) + x * da(l);
  }
  double sup() const { return d1(ma); }

  // Newton on H(g(x)) = H(y) with H(v) = v / (sup - v). The hyperbola
  // x d_a(m1) sup / (x d_a(m1) + sup) shares g's slope at 0 and its supremum,
  // and H maps it to a line, so the transformed equation is nearly linear.
  // g' = d_a(lambda(x)) by the envelope theorem. Iterates are kept inside a
  // shrinking bracket.
  double x_of_y(double y) const {
    if (!(y >= 0.0)) throw DomainError("x_of_y: y must be >= 0");
    if (y == 0.0) return 0.0;
    const double top = sup();
    if (!(y < top)) throw DomainError("x_of_y: y must be below d_best(mu_a)");
    if (known) {
      const double gap = m1 - ma;
      return y * va / (gap * gap - y * v1);
    }
    const double slope0 = da(m1);
    const double target = y / (top - y);
    double x = target * top / slope0;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    for (int it = 0; it < kMaxIter; ++it) {
      const double l = lambda(x);
      const double gx = d1(l) + x * da(l);
      if (gx == y) return x;
      if (gx > y) {
        hi = std::min(hi, x);
      } else {
        lo = std::max(lo, x);
      }
      double next;
      if (gx < top) {
        const double room = top - gx;
        const double G = gx / room - target;
        const double dG = top * da(l) / (room * room);
        next = dG > 0.0 ? x - G / dG : 0.5 * (lo + hi);
      } else {
        next = 0.5 * (lo + x);
      }
      if (!(next > lo) || !(next < hi)) next = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * x;
      if (std::abs(next - x) <= kRelTol * x) return next;
      x = next;
    }
    return x;
  }

  double ratio(double x) const {
    const double l = lambda(x);
    const double den = da(l);
    if (den <= 0.0) return std::numeric_limits<double>::infinity();
    return d1(l) / den;
  }
};

PairModel pair_model(const model::Instance& inst, std::size_t best, std::size_t a,
                     VarianceModel vm) {
  return PairModel{inst.means[best], inst.variances[best], inst.means[a], inst.variances[a],
                   vm == VarianceModel::Known};
}

std::size_t checked_best(const model::Instance& inst) {
  inst.validate();
  return inst.best_arm();
}

void check_arm(const model::Instance& inst, std::size_t best, std::size_t a) {
  if (a >= inst.size()) throw DomainError("arm index out of range");
  if (a == best) throw DomainError("arm must be suboptimal");
}

std::vector<PairModel> all_pairs(const model::Instance& inst, std::size_t best,
                                 VarianceModel vm) {
  std::vector<PairModel> out;
  for (std::size_t a = 0; a < inst.size(); ++a) {
    if (a != best) out.push_back(pair_model(inst, best, a, vm));
  }
  return out;
}

double upper_y(const std::vector<PairModel>& pairs) {
  double y = std::numeric_limits<double>::infinity();
  for (const auto& p : pairs) y = std::min(y, p.sup());
  return (1.0 - kUpperShrink) * y;
}

template <class F>
double solve_increasing(F f, double lo, double hi, const char* what) {
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!(flo < 0.0 && fhi > 0.0)) throw BracketError(what);
  std::uintmax_t max_iter = kMaxIter;
  boost::math::tools::eps_tolerance<double> tol(40);
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, max_iter);
  return 0.5 * (r.first + r.second);
}

double F_pairs(const std::vector<PairModel>& pairs, double y) {
  double s = 0.0;
  for (const auto& p : pairs) s += p.ratio(p.x_of_y(y));
  return s;
}

Allocation assemble(const model::Instance& inst, std::size_t best,
                    const std::vector<PairModel>& pairs, double y) {
  std::vector<double> xs;
  double sum_x = 0.0;
  for (const auto& p : pairs) {
    xs.push_back(p.x_of_y(y));
    sum_x += xs.back();
  }
  Allocation out;
  out.weights.assign(inst.size(), 0.0);
  const double w1 = 1.0 / (1.0 + sum_x);
  out.weights[best] = w1;
  std::size_t k = 0;
  for (std::size_t a = 0; a < inst.size(); ++a) {
    if (a != best) out.weights[a] = xs[k++] * w1;
  }
  out.char_time = 2.0 * (1.0 + sum_x) / y;
  out.equalized_value = 1.0 / out.char_time;
  return out;
}

}  // namespace

double lambda_of_x(const model::Instance& inst, std::size_t a, double x, VarianceModel vm) {
  const std::size_t best = checked_best(inst);
  check_arm(inst, best, a);
  if (!(x >= 0.0)) throw DomainError("lambda_of_x: x must be >= 0");
  return pair_model(inst, best, a, vm).lambda(x);
}

double g_eval(const model::Instance& inst, std::size_t a, double x, VarianceModel vm) {
  const std::size_t best = checked_best(inst);
  check_arm(inst, best, a);
  if (!(x >= 0.0)) throw DomainError("g_eval: x must be >= 0");
  return pair_model(inst, best, a, vm).g(x);
}

double x_of_y(const model::Instance& inst, std::size_t a, double y, VarianceModel vm) {
  const std::size_t best = checked_best(inst);
  check_arm(inst, best, a);
  return pair_model(inst, best, a, vm).x_of_y(y);
}

double g_sup(const model::Instance& inst, std::size_t a, VarianceModel vm) {
  const std::size_t best = checked_best(inst);
  check_arm(inst, best, a);
  return pair_model(inst, best, a, vm).sup();
}

double F_of_y(const model::Instance& inst, double y, VarianceModel vm) {
  const std::size_t best = checked_best(inst);
  return F_pairs(all_pairs(inst, best, vm), y);
}

Allocation optimal_allocation(const model::Instance& inst, VarianceModel vm) {
  const std::size_t best = checked_best(inst);
  const auto pairs = all_pairs(inst, best, vm);
  const double hi = upper_y(pairs);
  const double y = solve_increasing([&](double v) { return F_pairs(pairs, v) - 1.0; }, 0.0, hi,
                                    "optimal_allocation: F(y) = 1 not bracketed");
  return assemble(inst, best, pairs, y);
}

Allocation optimal_allocation_unknown(const model::Instance& inst) {
  return optimal_allocation(inst, VarianceModel::Unknown);
}

Allocation optimal_allocation_known(const model::Instance& inst) {
  return optimal_allocation(inst, VarianceModel::Known);
}

Allocation beta_allocation(const model::Instance& inst, double beta, bool variance_known) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta_allocation: beta must be in (0, 1)");
  const std::size_t best = checked_best(inst);
  const auto vm = variance_known ? VarianceModel::Known : VarianceModel::Unknown;
  const auto pairs = all_pairs(inst, best, vm);
  const double target = (1.0 - beta) / beta;
  auto excess = [&](double y) {
    double s = 0.0;
    for (const auto& p : pairs) s += p.x_of_y(y);
    return s - target;
  };
  const double y = solve_increasing(excess, 0.0, upper_y(pairs),
                                    "beta_allocation: level not bracketed");
  Allocation out;
  out.weights.assign(inst.size(), 0.0);
  out.weights[best] = beta;
  std::size_t k = 0;
  for (std::size_t a = 0; a < inst.size(); ++a) {
    if (a != best) out.weights[a] = beta * pairs[k++].x_of_y(y);
  }
  out.char_time = 2.0 / (beta * y);
  out.equalized_value = 1.0 / out.char_time;
  return out;
}

double lower_bound_samples(const model::Instance& inst, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("lower_bound_samples: delta in (0, 1)");
  const double t_star = optimal_allocation_unknown(inst).char_time;
  return std::max(0.0, t_star * std::log(1.0 / (2.4 * delta)));
}

}  // namespace bai::oracle
