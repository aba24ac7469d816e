#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace bai::testing {

namespace {

double pair_value(double ma, double va, double wa, double mb, double vb, double wb, double l) {
  return 0.5 * wa * std::log1p((ma - l) * (ma - l) / va) +
         0.5 * wb * std::log1p((mb - l) * (mb - l) / vb);
}

}  // namespace

double grid_cost_unknown(double ma, double va, double wa, double mb, double vb, double wb,
                         double h) {
  if (!(ma > mb)) return 0.0;
  const auto n = static_cast<std::int64_t>(std::ceil((ma - mb) / h));
  double best = std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i <= n; ++i) {
    const double l = std::min(ma, mb + static_cast<double>(i) * h);
    best = std::min(best, pair_value(ma, va, wa, mb, vb, wb, l));
  }
  return best;
}

double grid_argmin_lambda(double ma, double va, double wa, double mb, double vb, double wb,
                          double h) {
  const auto n = static_cast<std::int64_t>(std::ceil((ma - mb) / h));
  double best = std::numeric_limits<double>::infinity();
  double arg = mb;
  for (std::int64_t i = 0; i <= n; ++i) {
    const double l = std::min(ma, mb + static_cast<double>(i) * h);
    const double v = pair_value(ma, va, wa, mb, vb, wb, l);
    if (v < best) {
      best = v;
      arg = l;
    }
  }
  return arg;
}

namespace {

// Scans the grid w_0 = lo[0] + i h, w_1 = lo[1] + j h (K = 3) or w_0 = lo[0] + i h
// (K = 2) inside the open simplex and returns the best point and its maximin value.
template <class Cost>
std::pair<std::vector<double>, double> grid_scan(std::size_t K, std::size_t best, Cost cost,
                                                 const double lo[2], const double hi[2], double h) {
  double top = 0.0;
  std::vector<double> arg;
  auto consider = [&](const std::vector<double>& w) {
    for (double x : w) {
      if (!(x > 0.0)) return;
    }
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < K; ++a) {
      if (a == best) continue;
      m = std::min(m, cost(best, a, w));
      if (m <= top) return;
    }
    top = m;
    arg = w;
  };
  const auto n0 = static_cast<int>(std::lround((hi[0] - lo[0]) / h));
  const auto n1 = static_cast<int>(std::lround((hi[1] - lo[1]) / h));
  for (int i = 0; i <= n0; ++i) {
    const double w0 = lo[0] + i * h;
    if (K == 2) {
      consider({w0, 1.0 - w0});
      continue;
    }
    for (int j = 0; j <= n1; ++j) {
      const double w1 = lo[1] + j * h;
      consider({w0, w1, 1.0 - w0 - w1});
    }
  }
  return {arg, top};
}

template <class Cost>
double grid_search(const model::Instance& inst, double w_step, int refinements, Cost cost) {
  const std::size_t K = inst.size();
  if (K != 2 && K != 3) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t best = inst.best_arm();
  double lo[2] = {0.0, 0.0};
  double hi[2] = {1.0, K == 3 ? 1.0 : 0.0};
  double h = w_step;
  auto [arg, top] = grid_scan(K, best, cost, lo, hi, h);
  // Each refinement rescans a window of +-2 old steps at a tenth of the step.
  for (int r = 0; r < refinements && !arg.empty(); ++r) {
    for (int d = 0; d < 2; ++d) {
      lo[d] = std::max(0.0, arg[d] - 2.0 * h);
      hi[d] = K == 3 || d == 0 ? std::min(1.0, arg[d] + 2.0 * h) : 0.0;
    }
    if (K == 2) lo[1] = hi[1] = 0.0;
    h /= 10.0;
    auto [a2, t2] = grid_scan(K, best, cost, lo, hi, h);
    if (t2 > top) {
      arg = a2;
      top = t2;
    }
  }
  return 1.0 / top;
}

}  // namespace

double grid_char_time(const model::Instance& inst, double w_step, double lambda_step,
                      int refinements) {
  return grid_search(inst, w_step, refinements,
                     [&](std::size_t b, std::size_t a, const std::vector<double>& w) {
                       return grid_cost_unknown(inst.means[b], inst.variances[b], w[b],
                                                inst.means[a], inst.variances[a], w[a],
                                                lambda_step);
                     });
}

double grid_char_time_known(const model::Instance& inst, double w_step) {
  return grid_search(inst, w_step, 0,
                     [&](std::size_t b, std::size_t a, const std::vector<double>& w) {
                       const double gap = inst.means[b] - inst.means[a];
                       return 0.5 * gap * gap / (inst.variances[b] / w[b] + inst.variances[a] / w[a]);
                     });
}

std::vector<double> companion_roots(double c2, double c1, double c0) {
  Eigen::Matrix3d m;
  m << -c2, -c1, -c0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0;
  const Eigen::EigenSolver<Eigen::Matrix3d> es(m);
  std::vector<double> out;
  for (int i = 0; i < 3; ++i) {
    const auto z = es.eigenvalues()[i];
    if (std::abs(z.imag()) <= 1e-7 * (1.0 + std::abs(z.real()))) out.push_back(z.real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

double grid_bob(const thresholds::BobProblem& p) {
  // x in [D, 1] and y = u A / x with u in [0, 1] keep the box constraints by
  // construction; x > 1 never helps since f grows in x there. For fixed
  // (x_a, y_a, x_b) both remaining constraints are linear in y_b, so the best
  // y_b is explicit and only a 3-D zooming grid is needed.
  auto phi = [&](double y) { return p.ev ? y : std::log1p(y); };
  auto f = [](double x, double y) { return (1.0 + y) * x - 1.0 - std::log(x); };
  double lo[3] = {p.D[0], 0.0, p.D[1]};
  double hi[3] = {1.0, 1.0, 1.0};
  const double lim_lo[3] = {p.D[0], 0.0, p.D[1]};
  double best = -1.0;
  double arg[3] = {1.0, 0.0, 1.0};
  const int n = 48;
  for (int level = 0; level < 16; ++level) {
    double step[3];
    for (int d = 0; d < 3; ++d) step[d] = (hi[d] - lo[d]) / n;
    for (int i = 0; i <= n; ++i) {
      const double xa = lo[0] + i * step[0];
      for (int j = 0; j <= n; ++j) {
        const double ya = (lo[1] + j * step[1]) * p.A[0] / xa;
        const double rest = 2.0 * p.E - p.n[0] * f(xa, ya);
        if (rest < 0.0) continue;
        for (int k = 0; k <= n; ++k) {
          const double xb = lo[2] + k * step[2];
          const double yb = std::min(p.A[1] / xb, (rest / p.n[1] + 1.0 + std::log(xb)) / xb - 1.0);
          if (yb < 0.0) continue;
          const double v = 0.5 * (p.n[0] * phi(ya) + p.n[1] * phi(yb));
          if (v > best) {
            best = v;
            arg[0] = xa;
            arg[1] = lo[1] + j * step[1];
            arg[2] = xb;
          }
        }
      }
    }
    for (int d = 0; d < 3; ++d) {
      const double width = 6.0 * step[d];
      lo[d] = std::max(lim_lo[d], arg[d] - width);
      hi[d] = std::min(1.0, arg[d] + width);
    }
  }
  return best;
}

std::vector<stats::ArmStats> Replay::stats(double gamma) const {
  std::vector<stats::ArmStats> out;
  for (const auto& xs : samples) {
    stats::ArmStats s(gamma);
    for (double x : xs) s.push(x);
    out.push_back(s);
  }
  return out;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace bai::testing
