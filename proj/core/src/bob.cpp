// Box-and-KL ("BoB") threshold as a small constrained maximization.
//
// Eliminating x leaves h_c(y) = min_{x in [D_c, A_c / y]} f(x, y), which is
// strictly increasing in y. When the box optimum y_c = A_c / D_c violates the
// KL budget, the budget is active and the problem is one-dimensional along the
// curve n_a h_a(y_a) + n_b h_b(y_b) = 2E. The feasible set in (x, y) is not
// convex, so the curve is scanned and stationary points are refined with a
// bracketing root finder instead of a dual bisection.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

#include "bai/errors.hpp"
#include "bai/thresholds.hpp"

namespace bai::thresholds {

namespace {

constexpr int kScan = 64;
constexpr std::uintmax_t kMaxIter = 200;

struct Arm {
  double n, A, D;

  double y_max() const { return A / D; }

  double x_of(double y) const {
    const double x = 1.0 / (1.0 + y);
    if (x < D) return D;
    if (y > 0.0 && x > A / y) return A / y;
    return x;
  }

  double h(double y) const {
    const double x = x_of(y);
    return (1.0 + y) * x - 1.0 - std::log(x);
  }

  double dh(double y) const {
    const double x = x_of(y);
    if (x == D) return D;
    if (y > 0.0 && x == A / y) return 1.0 / y - A / (y * y);
    return 1.0 / (1.0 + y);
  }

  // Inverse of h on [0, y_max]; level must lie in [0, h(y_max)].
  double h_inv(double level) const {
    const double hi = y_max();
    if (level <= 0.0) return 0.0;
    const double hmax = h(hi);
    if (level >= hmax) return hi;
    auto f = [&](double y) { return h(y) - level; };
    std::uintmax_t it = kMaxIter;
    boost::math::tools::eps_tolerance<double> tol(52);
    const auto r = boost::math::tools::toms748_solve(f, 0.0, hi, -level, hmax - level, tol, it);
    return 0.5 * (r.first + r.second);
  }
};

double phi(double y, bool ev) { return ev ? y : std::log1p(y); }
double dphi(double y, bool ev) { return ev ? 1.0 : 1.0 / (1.0 + y); }

struct Curve {
  Arm a, b;
  double E;
  bool ev;

  double y_b(double y_a) const { return b.h_inv((2.0 * E - a.n * a.h(y_a)) / b.n); }

  double value(double y_a) const {
    return 0.5 * (a.n * phi(y_a, ev) + b.n * phi(y_b(y_a), ev));
  }

  // nu_c = phi'(y_c) / h_c'(y_c); the objective increases along the curve
  // while nu_a > nu_b.
  std::array<double, 2> nus(double y_a) const {
    const double yb = y_b(y_a);
    return {dphi(y_a, ev) / a.dh(y_a), dphi(yb, ev) / b.dh(yb)};
  }

  double gap(double y_a) const {
    const auto nu = nus(y_a);
    return nu[0] - nu[1];
  }
};

BobSolution finish(const Curve& c, double y_a, double lo, double hi) {
  BobSolution s;
  s.kl_active = true;
  s.y[0] = y_a;
  s.y[1] = c.y_b(y_a);
  s.x[0] = c.a.x_of(s.y[0]);
  s.x[1] = c.b.x_of(s.y[1]);
  s.value = c.value(y_a);
  const auto nu = c.nus(y_a);
  const double scale = std::max({std::abs(nu[0]), std::abs(nu[1]), 1e-300});
  double diff = nu[0] - nu[1];
  if (y_a <= lo) diff = std::max(0.0, diff);
  else if (y_a >= hi) diff = std::max(0.0, -diff);
  s.kkt_residual = std::abs(diff) / scale;
  s.multiplier = 0.5 * (nu[0] + nu[1]);
  return s;
}

}  // namespace

double bob_min_kl(double y, double A, double D) {
  if (!(y >= 0.0) || !(A > 0.0) || !(D > 0.0)) throw DomainError("bob_min_kl: bad arguments");
  if (y > A / D) throw DomainError("bob_min_kl: y exceeds A / D");
  return Arm{1.0, A, D}.h(y);
}

BobSolution bob_solve(const BobProblem& p) {
  for (int c = 0; c < 2; ++c) {
    if (!(p.n[c] > 0.0) || !(p.A[c] > 0.0) || !(p.D[c] > 0.0)) {
      throw DomainError("bob_solve: n, A and D must be positive");
    }
  }
  if (!(p.E >= 0.0)) throw DomainError("bob_solve: KL budget must be nonnegative");

  const Curve c{Arm{p.n[0], p.A[0], p.D[0]}, Arm{p.n[1], p.A[1], p.D[1]}, p.E, p.ev};

  const double ya_max = c.a.y_max();
  const double yb_max = c.b.y_max();
  const double used = c.a.n * c.a.h(ya_max) + c.b.n * c.b.h(yb_max);
  if (used <= 2.0 * p.E) {
    BobSolution s;
    s.y[0] = ya_max;
    s.y[1] = yb_max;
    s.x[0] = c.a.x_of(ya_max);
    s.x[1] = c.b.x_of(yb_max);
    s.value = 0.5 * (c.a.n * phi(ya_max, p.ev) + c.b.n * phi(yb_max, p.ev));
    return s;
  }

  // Range of y_a on which y_b stays inside [0, y_b_max].
  const double rest = 2.0 * p.E - c.b.n * c.b.h(yb_max);
  const double lo = rest > 0.0 ? c.a.h_inv(rest / c.a.n) : 0.0;
  const double hi = c.a.h_inv(2.0 * p.E / c.a.n);
  if (!(hi > lo)) return finish(c, lo, lo, lo);

  std::vector<double> grid(kScan + 1);
  std::vector<double> gaps(kScan + 1);
  for (int i = 0; i <= kScan; ++i) {
    grid[i] = lo + (hi - lo) * i / kScan;
    gaps[i] = c.gap(grid[i]);
  }

  std::vector<double> candidates = {lo, hi};
  for (int i = 0; i <= kScan; ++i) {
    if (gaps[i] == 0.0) candidates.push_back(grid[i]);
    if (i < kScan && gaps[i] > 0.0 && gaps[i + 1] < 0.0) {
      std::uintmax_t it = kMaxIter;
      boost::math::tools::eps_tolerance<double> tol(52);
      const auto r = boost::math::tools::toms748_solve([&](double y) { return c.gap(y); },
                                                       grid[i], grid[i + 1], gaps[i],
                                                       gaps[i + 1], tol, it);
      const double ga = c.gap(r.first);
      const double gb = c.gap(r.second);
      candidates.push_back(std::abs(ga) <= std::abs(gb) ? r.first : r.second);
    }
  }

  double best = candidates.front();
  double best_value = c.value(best);
  for (double y : candidates) {
    const double v = c.value(y);
    if (v > best_value) {
      best_value = v;
      best = y;
    }
  }
  BobSolution s = finish(c, best, lo, hi);
  if (!(s.kkt_residual <= kKktTolerance)) {
    throw SolverError("bob_solve: KKT residual above tolerance");
  }
  return s;
}

}  // namespace bai::thresholds
