// Independent oracles used by the test suites: finite differences, dense
// grids, sphere sampling, and a power-iteration singular pair. None of these
// share code with the search paths they check.
#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "bj/bj.hpp"

namespace oracle {

inline std::vector<double> axpy(const std::vector<double>& x, double t, const std::vector<double>& y) {
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + t * y[i];
  return r;
}

/// One-sided finite differences of t -> ||x + t y|| at 0.
inline std::pair<double, double> fd_one_sided(const bj::SpaceDescriptor& s,
                                              const std::vector<double>& x,
                                              const std::vector<double>& y, double h = 1e-6) {
  const double f0 = bj::norm(s, x);
  const double fp = bj::norm(s, axpy(x, h, y));
  const double fm = bj::norm(s, axpy(x, -h, y));
  return {(f0 - fm) / h, (fp - f0) / h};
}

struct GridMin {
  double argmin = 0.0;
  double value = 0.0;
};

/// Dense grid minimum of t -> ||x + t y|| over [lo, hi].
inline GridMin grid_min(const bj::SpaceDescriptor& s, const std::vector<double>& x,
                        const std::vector<double>& y, double lo, double hi, double step) {
  GridMin best{lo, bj::norm(s, axpy(x, lo, y))};
  for (double t = lo + step; t <= hi + 0.5 * step; t += step) {
    const double v = bj::norm(s, axpy(x, t, y));
    if (v < best.value) best = {t, v};
  }
  return best;
}

/// Grid-based orthogonality verdict over t in [-4, 4] with step 1e-4,
/// widened when the analytic bracket exceeds it.
inline bool grid_orthogonal(const bj::SpaceDescriptor& s, const std::vector<double>& x,
                            const std::vector<double>& y, double tol = 1e-6) {
  const double nx = bj::norm(s, x), ny = bj::norm(s, y);
  if (nx == 0.0 || ny == 0.0) return true;
  const double b = std::max(4.0, 2.0 * nx / ny);
  const auto m = grid_min(s, x, y, -b, b, 1e-4 * std::max(1.0, b / 4.0));
  return m.value >= nx - tol * std::max(1.0, nx);
}

/// Half-line grid minimum (t >= 0 for plus, t <= 0 for minus).
inline GridMin grid_min_halfline(const bj::SpaceDescriptor& s, const std::vector<double>& x,
                                 const std::vector<double>& y, bool plus) {
  const double nx = bj::norm(s, x), ny = bj::norm(s, y);
  if (ny == 0.0) return {0.0, nx};
  const double b = 2.0 * nx / ny;
  return plus ? grid_min(s, x, y, 0.0, b, b / 40000.0) : grid_min(s, x, y, -b, 0.0, b / 40000.0);
}

/// Sup of ||T u|| over a dense deterministic sample of the unit sphere
/// (a lower bound that converges from below).
inline double sphere_sup_norm(const bj::LinearOperator& T, int samples, std::uint64_t seed = 99) {
  double best = 0.0;
  if (T.domain.dim() == 2) {
    for (int i = 0; i < samples; ++i) {
      const double th = 2.0 * 3.14159265358979323846 * static_cast<double>(i) / samples;
      std::vector<double> u{std::cos(th), std::sin(th)};
      const double n = bj::norm(T.domain, u);
      for (auto& c : u) c /= n;
      best = std::max(best, bj::norm(T.codomain, T.apply(u)));
    }
    return best;
  }
  for (const auto& u : bj::sample_unit_sphere(T.domain, seed, samples))
    best = std::max(best, bj::norm(T.codomain, T.apply(u.coords)));
  return best;
}

/// Minimum over a dense lambda grid of ||T + t A||, refined once around the
/// coarse minimum; checks the 1-D search, with norms evaluated through the
/// library's norm routine.
inline GridMin op_grid_min(const bj::LinearOperator& T, const bj::LinearOperator& A, int points = 801) {
  const double nT = bj::operator_norm(T).value;
  const double nA = bj::operator_norm(A).value;
  GridMin best{0.0, nT};
  if (nA == 0.0 || nT == 0.0) return best;
  auto sweep = [&](double lo, double hi) {
    for (int i = 0; i < points; ++i) {
      const double t = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
      const double v = bj::operator_norm(bj::add_scaled(T, t, A)).value;
      if (v < best.value) best = {t, v};
    }
  };
  const double b = 2.0 * nT / nA;
  sweep(-b, b);
  const double step = 2.0 * b / (points - 1);
  sweep(best.argmin - 2.0 * step, best.argmin + 2.0 * step);
  return best;
}

/// Top singular pair of a matrix seen as l2 -> l2, by power iteration on
/// T' T; independent of the ascent machinery.
inline std::pair<double, std::vector<double>> top_singular(const bj::LinearOperator& T) {
  std::vector<double> v(static_cast<std::size_t>(T.cols()), 0.0);
  v[0] = 1.0;
  if (T.cols() > 1) v[1] = 0.7;  // avoid starting orthogonal to the top space
  double sigma = 0.0;
  for (int it = 0; it < 20000; ++it) {
    auto w = T.transpose_apply(T.apply(v));
    double n = 0.0;
    for (double c : w) n += c * c;
    n = std::sqrt(n);
    if (n == 0.0) return {0.0, v};
    for (auto& c : w) c /= n;
    v = std::move(w);
    const double ns = std::sqrt(n);
    if (std::abs(ns - sigma) < 1e-15 * std::max(1.0, ns) && it > 50) {
      sigma = ns;
      break;
    }
    sigma = ns;
  }
  return {sigma, v};
}

}  // namespace oracle
