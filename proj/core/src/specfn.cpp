#include "bai/specfn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "bai/errors.hpp"

namespace bai::specfn {

namespace {

constexpr int kMaxNewton = 200;

// Solves u + exp(-u) = x for u >= 0, so that wbar_0(x) = exp(-u).
double solve_log_wbar0(double x) {
  // Near x = 1 the root behaves like sqrt(2(x - 1)).
  double lo = std::max(0.0, x - 1.0);
  double hi = x;
  double u = x - 1.0 < 0.5 ? std::sqrt(2.0 * (x - 1.0)) : x - std::exp(-x);
  u = std::clamp(u, lo, hi);
  for (int it = 0; it < kMaxNewton; ++it) {
    const double e = std::exp(-u);
    const double f = u + e - x;
    if (f > 0.0) {
      hi = u;
    } else {
      lo = u;
    }
    const double df = -std::expm1(-u);
    double next = df > 0.0 ? u - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - u) <= 1e-16 * std::max(1.0, u) || hi - lo <= 1e-300) {
      return next;
    }
    u = next;
  }
  return u;
}

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 100000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return h;
}

// I_x(a, b) with y = 1 - x supplied separately to avoid cancellation.
double ibeta_xy(double a, double b, double x, double y) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log(y);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, y) / b;
}

double student_log_pdf(double q, int dof) {
  const double nu = dof;
  return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
         0.5 * std::log(nu * std::numbers::pi) -
         0.5 * (nu + 1.0) * std::log1p(q * q / nu);
}

void check_dof(int dof) {
  if (dof < 1) throw DomainError("student: dof must be >= 1");
}

}  // namespace

double wbar_m1(double x) {
  if (!(x >= 1.0)) throw DomainError("wbar_m1: x must be >= 1");
  if (x == 1.0) return 1.0;
  if (std::isinf(x)) return x;
  double lo = 1.0;
  double hi = x + std::log(x) + 1.0;
  double y = x - 1.0 < 0.5 ? 1.0 + std::sqrt(2.0 * (x - 1.0)) : x + std::log(x);
  y = std::clamp(y, lo, hi);
  for (int it = 0; it < kMaxNewton; ++it) {
    const double f = y - std::log(y) - x;
    if (f > 0.0) {
      hi = y;
    } else {
      lo = y;
    }
    const double df = 1.0 - 1.0 / y;
    double next = df > 0.0 ? y - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - y) <= 4e-16 * y) return next;
    y = next;
  }
  return y;
}

double wbar_0(double x) {
  if (!(x >= 1.0)) throw DomainError("wbar_0: x must be >= 1");
  if (x == 1.0) return 1.0;
  return std::exp(-solve_log_wbar0(x));
}

double lambert_w0(double x) {
  constexpr double inv_e = 1.0 / std::numbers::e;
  if (!(x >= -inv_e)) {
    if (x > -inv_e - 1e-15) return -1.0;
    throw DomainError("lambert_w0: x must be >= -1/e");
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;
  double w;
  if (x < -0.25) {
    const double p = std::sqrt(2.0 * (std::numbers::e * x + 1.0));
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else if (x < 3.0) {
    w = std::log1p(x) * 0.75;
  } else {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }
  for (int it = 0; it < kMaxNewton; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 <= 0.0) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double next = w - f / denom;
    if (std::abs(next - w) <= 1e-15 * (1.0 + std::abs(next))) return next;
    w = next;
  }
  return w;
}

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw DomainError("incomplete_beta: a, b must be > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete_beta: x must be in [0, 1]");
  return ibeta_xy(a, b, x, 1.0 - x);
}

double student_sf(double q, int dof) {
  check_dof(dof);
  if (std::isnan(q)) throw DomainError("student_sf: q is NaN");
  if (q == 0.0) return 0.5;
  const double nu = dof;
  const double q2 = q * q;
  const double x = nu / (nu + q2);
  const double y = q2 / (nu + q2);
  const double tail = 0.5 * ibeta_xy(0.5 * nu, 0.5, x, y);
  return q > 0.0 ? tail : 1.0 - tail;
}

double student_cdf(double q, int dof) { return student_sf(-q, dof); }

double student_quantile_upper(double alpha, int dof) {
  check_dof(dof);
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("student_quantile_upper: alpha must be in (0, 1)");
  }
  if (alpha == 0.5) return 0.0;
  if (alpha > 0.5) return -student_quantile_upper(1.0 - alpha, dof);
  if (dof == 1) return 1.0 / std::tan(std::numbers::pi * alpha);

  double lo = 0.0;
  double hi = 1.0;
  while (student_sf(hi, dof) > alpha) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) return hi;
  }
  const double log_alpha = std::log(alpha);
  double q = 0.5 * (lo + hi);
  for (int it = 0; it < kMaxNewton; ++it) {
    const double sf = student_sf(q, dof);
    const double f = std::log(sf) - log_alpha;
    if (f > 0.0) {
      lo = q;
    } else {
      hi = q;
    }
    const double dlog = -std::exp(student_log_pdf(q, dof)) / sf;
    double next = dlog < 0.0 ? q - f / dlog : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - q) <= 1e-15 * (1.0 + std::abs(q))) return next;
    if (hi - lo <= 1e-15 * (1.0 + std::abs(q))) return 0.5 * (lo + hi);
    q = next;
  }
  return q;
}

double student_quantile(double p, int dof) {
  check_dof(dof);
  if (!(p > 0.0 && p < 1.0)) throw DomainError("student_quantile: p must be in (0, 1)");
  if (p == 0.5) return 0.0;
  if (p > 0.5) return student_quantile_upper(1.0 - p, dof);
  return -student_quantile_upper(p, dof);
}

double zeta(double s) {
  if (!(s > 1.0)) throw DomainError("zeta: s must be > 1");
  // Euler-Maclaurin summation with N = 10 and eight Bernoulli corrections.
  constexpr int n_terms = 10;
  constexpr std::array<double, 8> b2k = {1.0 / 6.0,      -1.0 / 30.0,  1.0 / 42.0,
                                         -1.0 / 30.0,     5.0 / 66.0,   -691.0 / 2730.0,
                                         7.0 / 6.0,       -3617.0 / 510.0};
  long double sum = 0.0L;
  for (int n = 1; n < n_terms; ++n) sum += std::pow(static_cast<long double>(n), -s);
  const long double big_n = n_terms;
  sum += std::pow(big_n, 1.0L - s) / (s - 1.0L);
  sum += 0.5L * std::pow(big_n, static_cast<long double>(-s));
  long double rising = s;  // s (s+1) ... (s + 2k - 2)
  long double factorial = 2.0L;
  long double power = std::pow(big_n, -s - 1.0L);
  for (std::size_t k = 1; k <= b2k.size(); ++k) {
    sum += b2k[k - 1] / factorial * rising * power;
    rising *= (s + 2.0L * k - 1.0L) * (s + 2.0L * k);
    factorial *= (2.0L * k + 1.0L) * (2.0L * k + 2.0L);
    power /= big_n * big_n;
  }
  return static_cast<double>(sum);
}

CubicRoots cubic_real_roots(double c2, double c1, double c0) {
  // The shift and the polish run in extended precision; the transcendental
  // step only seeds Newton, so double is enough there.
  using ld = long double;
  const ld a = c2;
  const ld b = c1;
  const ld c = c0;
  const ld shift = a / 3.0L;
  const ld p = b - a * a / 3.0L;
  const ld q = 2.0L * a * a * a / 27.0L - a * b / 3.0L + c;
  const ld disc = q * q / 4.0L + p * p * p / 27.0L;

  std::array<double, 3> t{};
  std::size_t nt = 0;
  if (p == 0.0L && q == 0.0L) {
    t[nt++] = 0.0;
  } else if (disc > 0.0L) {
    const double sq = std::sqrt(static_cast<double>(disc));
    const double qd = static_cast<double>(q);
    const double big = std::cbrt(std::abs(qd) / 2.0 + sq);
    const double u = qd > 0.0 ? -big : big;
    const double v = u != 0.0 ? -static_cast<double>(p) / (3.0 * u) : 0.0;
    t[nt++] = u + v;
  } else {
    const double r = std::sqrt(static_cast<double>(-p / 3.0L));
    const double arg = std::clamp(static_cast<double>((-q / 2.0L) / (ld(r) * r * r)), -1.0, 1.0);
    const double phi = std::acos(arg);
    for (int k = 0; k < 3; ++k) {
      t[nt++] = 2.0 * r * std::cos((phi - 2.0 * std::numbers::pi * k) / 3.0);
    }
  }

  auto poly = [&](ld x) { return ((x + a) * x + b) * x + c; };
  auto dpoly = [&](ld x) { return (3.0L * x + 2.0L * a) * x + b; };

  std::array<double, 3> roots{};
  for (std::size_t i = 0; i < nt; ++i) {
    ld x = ld(t[i]) - shift;
    ld f = poly(x);
    for (int it = 0; it < 6 && f != 0.0L; ++it) {
      const ld df = dpoly(x);
      if (df == 0.0L) break;
      const ld next = x - f / df;
      const ld fn = poly(next);
      if (std::abs(fn) >= std::abs(f)) break;
      x = next;
      f = fn;
    }
    roots[i] = static_cast<double>(x);
  }
  std::sort(roots.begin(), roots.begin() + static_cast<std::ptrdiff_t>(nt));
  CubicRoots out;
  for (std::size_t i = 0; i < nt; ++i) {
    const double r = roots[i];
    if (out.count == 0 ||
        std::abs(r - out.values[out.count - 1]) > 1e-12 * (1.0 + std::abs(r))) {
      out.values[out.count++] = r;
    }
  }
  return out;
}

}  // namespace bai::specfn
