#pragma once

#include <array>
#include <cstddef>

namespace bai::specfn {

// Real roots of the monic cubic x^3 + c2 x^2 + c1 x + c0, ascending.
struct CubicRoots {
  std::array<double, 3> values{};
  std::size_t count = 0;

  std::size_t size() const { return count; }
  double operator[](std::size_t i) const { return values[i]; }
  const double* begin() const { return values.data(); }
  const double* end() const { return values.data() + count; }
};

// Root y >= 1 of y - ln(y) = x, i.e. -W_{-1}(-e^{-x}). Requires x >= 1.
double wbar_m1(double x);

// Root y in (0, 1] of y - ln(y) = x, i.e. -W_0(-e^{-x}). Requires x >= 1.
double wbar_0(double x);

// Principal Lambert branch W_0 on [-1/e, inf). Used by the initial-time gates.
double lambert_w0(double x);

// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

double student_cdf(double q, int dof);

// Upper tail P(T > q) for a Student variable with `dof` degrees of freedom.
double student_sf(double q, int dof);

// q with student_cdf(q, dof) = p.
double student_quantile(double p, int dof);

// q with student_sf(q, dof) = alpha. Keeps relative accuracy for tiny alpha,
// where 1 - alpha is not representable.
double student_quantile_upper(double alpha, int dof);

// Riemann zeta for real s > 1.
double zeta(double s);

CubicRoots cubic_real_roots(double c2, double c1, double c0);

}  // namespace bai::specfn
