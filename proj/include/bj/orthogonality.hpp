#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bj/config.hpp"
#include "bj/errors.hpp"
#include "bj/rng.hpp"
#include "bj/scalar_search.hpp"
#include "bj/space.hpp"

namespace bj {

enum class OrthMethod { analytic, numeric, both };

inline std::string to_string(OrthMethod m) {
  switch (m) {
    case OrthMethod::analytic: return "analytic";
    case OrthMethod::numeric: return "numeric";
    default: return "both";
  }
}

/// Outcome of a Birkhoff-James orthogonality test x B y, i.e. whether
/// ||x + t y|| >= ||x|| for every real t. Carries the evidence needed to
/// re-check the verdict independently.
struct OrthogonalityVerdict {
  bool orthogonal = false;
  double minimizer = 0.0;  // argmin of t -> ||x + t y||
  double min_value = 0.0;
  double margin = 0.0;  // ||x|| - min_value, always >= 0
  OrthMethod method = OrthMethod::analytic;
  double tolerance = 0.0;
};

/// Raised when the analytic and numeric routes disagree under method `both`.
class orthogonality_disagreement : public inconsistency_error {
public:
  orthogonality_disagreement(OrthogonalityVerdict analytic, OrthogonalityVerdict numeric)
      : inconsistency_error("analytic and numeric orthogonality verdicts disagree (analytic=" +
                            std::to_string(analytic.orthogonal) +
                            ", numeric margin=" + std::to_string(numeric.margin) + ")"),
        analytic_verdict(analytic),
        numeric_verdict(numeric) {}
  OrthogonalityVerdict analytic_verdict;
  OrthogonalityVerdict numeric_verdict;
};

namespace detail {

inline std::vector<double> add_scaled(std::span<const double> x, double t, std::span<const double> y) {
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + t * y[i];
  return r;
}

inline std::vector<double> scaled(std::span<const double> x, double t) {
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = t * x[i];
  return r;
}

}  // namespace detail

/// One-sided derivatives (d-, d+) of t -> ||x + t y|| at t = 0. Equal to the
/// min and max of f(y) over the norming functionals f of x.
inline std::pair<double, double> one_sided_derivatives(const SpaceDescriptor& s,
                                                       std::span<const double> x,
                                                       std::span<const double> y,
                                                       const Tolerances& tol = Tolerances::defaults()) {
  const auto iv = support_values(s, x, y, tol);
  return {iv.lo, iv.hi};
}

/// Global minimum of the convex map t -> ||x + t y||. Every minimizer lies in
/// |t| <= 2||x|| / ||y|| because ||x + t y|| >= |t| ||y|| - ||x||.
inline LineMinResult minimize_norm_line(const SpaceDescriptor& s, std::span<const double> x,
                                        std::span<const double> y,
                                        const Tolerances& tol = Tolerances::defaults()) {
  const double nx = norm(s, x), ny = norm(s, y);
  if (ny == 0.0 || nx == 0.0) return {0.0, nx, 0};
  const double bracket = 2.0 * nx / ny;
  auto res = golden_min([&](double t) { return norm(s, detail::add_scaled(x, t, y)); }, -bracket,
                        bracket, tol.line_search_rel);
  if (nx <= res.value) {  // t = 0 is always feasible
    res.argmin = 0.0;
    res.value = nx;
  }
  return res;
}

inline OrthogonalityVerdict bj_orthogonal(const SpaceDescriptor& s, std::span<const double> x,
                                          std::span<const double> y,
                                          OrthMethod method = OrthMethod::analytic,
                                          const Tolerances& tol = Tolerances::defaults()) {
  detail::check_dim(s, x);
  detail::check_dim(s, y);
  const double nx = norm(s, x), ny = norm(s, y);
  if (nx == 0.0 || ny == 0.0)
    return {true, 0.0, nx, 0.0, method, method == OrthMethod::analytic ? tol.analytic_orth : tol.numeric_orth};

  auto analytic = [&]() {
    const auto [dlo, dhi] = one_sided_derivatives(s, x, y, tol);
    const double slack = tol.analytic_orth * std::max(1.0, ny);
    OrthogonalityVerdict v;
    v.method = OrthMethod::analytic;
    v.tolerance = tol.analytic_orth;
    v.orthogonal = dlo <= slack && dhi >= -slack;
    if (v.orthogonal) {
      // 0 is a global minimizer, so the margin is exactly zero.
      v.minimizer = 0.0;
      v.min_value = nx;
      v.margin = 0.0;
    } else {
      const auto m = minimize_norm_line(s, x, y, tol);
      v.minimizer = m.argmin;
      v.min_value = m.value;
      v.margin = nx - m.value;
    }
    return v;
  };
  auto numeric = [&]() {
    const auto m = minimize_norm_line(s, x, y, tol);
    OrthogonalityVerdict v;
    v.method = OrthMethod::numeric;
    v.tolerance = tol.numeric_orth;
    v.minimizer = m.argmin;
    v.min_value = m.value;
    v.margin = nx - m.value;
    v.orthogonal = v.margin <= tol.numeric_orth * std::max(1.0, nx);
    return v;
  };

  switch (method) {
    case OrthMethod::analytic: return analytic();
    case OrthMethod::numeric: return numeric();
    default: {
      auto va = analytic();
      auto vn = numeric();
      if (va.orthogonal != vn.orthogonal) {
        // The routes may legitimately split inside the tolerance gap: both
        // margins at or below the looser (numeric) threshold is a marginal
        // case, resolved as orthogonal at that tolerance. Anything else is a
        // real inconsistency.
        const double loose = tol.numeric_orth * std::max(1.0, nx);
        if (std::max(va.margin, vn.margin) > loose) throw orthogonality_disagreement(va, vn);
        vn.orthogonal = true;
      }
      vn.method = OrthMethod::both;
      return vn;
    }
  }
}

enum class ConeSign { plus, minus };

/// Membership in the one-sided approximate-orthogonality cone:
/// y lies in x^{+eps} when ||x + t y|| >= sqrt(1 - eps^2) ||x|| for all t >= 0
/// (minus: all t <= 0).
inline bool in_cone(const SpaceDescriptor& s, std::span<const double> x, std::span<const double> y,
                    ConeSign sign, double eps, const Tolerances& tol = Tolerances::defaults()) {
  if (!(eps >= 0.0 && eps < 1.0)) throw input_error("cone parameter eps must be in [0, 1)");
  detail::check_dim(s, x);
  detail::check_dim(s, y);
  const double nx = norm(s, x), ny = norm(s, y);
  const double threshold = std::sqrt(1.0 - eps * eps) * nx;
  if (nx == 0.0 || ny == 0.0) return true;
  const double bracket = 2.0 * nx / ny;
  const double lo = sign == ConeSign::plus ? 0.0 : -bracket;
  const double hi = sign == ConeSign::plus ? bracket : 0.0;
  auto res = golden_min([&](double t) { return norm(s, detail::add_scaled(x, t, y)); }, lo, hi,
                        tol.line_search_rel);
  const double half_line_min = std::min(res.value, nx);
  return half_line_min >= threshold - tol.numeric_orth * std::max(1.0, nx);
}

// ---------------------------------------------------------------------------
// James companion scalars

/// All a with (a x + y) B x form a closed interval (the flat bottom of the
/// convex map a -> ||a x + y||); in strictly convex spaces it is a point.
inline std::pair<double, double> left_companion_interval(const SpaceDescriptor& s,
                                                         std::span<const double> x,
                                                         std::span<const double> y,
                                                         const Tolerances& tol = Tolerances::defaults()) {
  const double nx = norm(s, x);
  if (nx == 0.0) throw input_error("companion scalars require x != 0");
  const double ny = norm(s, y);
  if (ny == 0.0) return {0.0, 0.0};
  const double bracket = 2.0 * ny / nx + 1.0;
  auto derivative = [&](double a) -> std::pair<double, double> {
    const auto w = detail::add_scaled(y, a, x);
    // Collinear y: the map is |a - a0| ||x|| and the kink straddles zero.
    if (norm(s, w) <= 1e-12 * (std::abs(a) * nx + ny)) return {-nx, nx};
    return one_sided_derivatives(s, w, x, tol);
  };
  const double slack = tol.analytic_orth * std::max(1.0, nx);
  // At polyhedral kinks the derivative jumps past the slack band even when
  // the margin contract holds to machine precision; accept on margin then.
  auto margin_ok = [&](double a) {
    const auto w = detail::add_scaled(y, a, x);
    const double nw = norm(s, w);
    if (nw <= 1e-12 * (std::abs(a) * nx + ny)) return true;
    const auto m = minimize_norm_line(s, w, x, tol);
    return nw - m.value <= tol.analytic_orth * std::max(1.0, nw);
  };
  auto mid = bisect_on_derivative(derivative, -bracket, bracket, slack);
  if (!mid.found && !margin_ok(mid.argzero))
    throw numeric_failure("left companion bisection failed to meet the derivative criterion");
  auto valid = [&](double a) {
    const auto [dm, dp] = derivative(a);
    return dm <= slack && dp >= -slack;
  };
  if (!mid.found) return {mid.argzero, mid.argzero};  // kink point: the interval is that point
  // Expand from the known-valid point to the interval boundaries.
  double lo = mid.argzero, invalid_lo = -bracket;
  if (valid(invalid_lo)) {
    lo = invalid_lo;
  } else {
    for (int i = 0; i < 80; ++i) {
      const double m = 0.5 * (invalid_lo + lo);
      if (valid(m))
        lo = m;
      else
        invalid_lo = m;
    }
  }
  double hi = mid.argzero, invalid_hi = bracket;
  if (valid(invalid_hi)) {
    hi = invalid_hi;
  } else {
    for (int i = 0; i < 80; ++i) {
      const double m = 0.5 * (invalid_hi + hi);
      if (valid(m))
        hi = m;
      else
        invalid_hi = m;
    }
  }
  return {lo, hi};
}

/// Scalar a with (a x + y) B x; existence is guaranteed by convexity.
inline double james_left_companion(const SpaceDescriptor& s, std::span<const double> x,
                                   std::span<const double> y,
                                   const Tolerances& tol = Tolerances::defaults()) {
  const double nx = norm(s, x);
  if (nx == 0.0) throw input_error("companion scalars require x != 0");
  if (norm(s, y) == 0.0) return 0.0;
  const double ny = norm(s, y);
  const double bracket = 2.0 * ny / nx + 1.0;
  auto derivative = [&](double a) -> std::pair<double, double> {
    const auto w = detail::add_scaled(y, a, x);
    if (norm(s, w) <= 1e-12 * (std::abs(a) * nx + ny)) return {-nx, nx};
    return one_sided_derivatives(s, w, x, tol);
  };
  const double slack = tol.analytic_orth * std::max(1.0, nx);
  auto res = bisect_on_derivative(derivative, -bracket, bracket, slack);
  if (!res.found) {
    const auto w = detail::add_scaled(y, res.argzero, x);
    const double nw = norm(s, w);
    const auto m = minimize_norm_line(s, w, x, tol);
    if (nw > 1e-12 * (std::abs(res.argzero) * nx + ny) &&
        nw - m.value > tol.analytic_orth * std::max(1.0, nw))
      throw numeric_failure("left companion bisection failed to meet the derivative criterion");
  }
  return res.argzero;
}

/// All b with x B (b x + y): from f(b x + y) = b ||x|| + f(y) over f in J(x),
/// the valid set is [-d+ / ||x||, -d- / ||x||].
inline std::pair<double, double> right_companion_interval(const SpaceDescriptor& s,
                                                          std::span<const double> x,
                                                          std::span<const double> y,
                                                          const Tolerances& tol = Tolerances::defaults()) {
  const double nx = norm(s, x);
  if (nx == 0.0) throw input_error("companion scalars require x != 0");
  const auto [dlo, dhi] = one_sided_derivatives(s, x, y, tol);
  return {-dhi / nx, -dlo / nx};
}

/// Scalar b with x B (b x + y); midpoint of the valid interval, which for a
/// smooth x collapses to -f(y)/||x|| with f the unique norming functional.
inline double james_right_companion(const SpaceDescriptor& s, std::span<const double> x,
                                    std::span<const double> y,
                                    const Tolerances& tol = Tolerances::defaults()) {
  const auto [lo, hi] = right_companion_interval(s, x, y, tol);
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Point-level symmetry search

enum class Direction { left, right };
enum class SymmetryVerdict { symmetric_within_budget, not_symmetric };

inline std::string to_string(Direction d) { return d == Direction::left ? "left" : "right"; }
inline std::string to_string(SymmetryVerdict v) {
  return v == SymmetryVerdict::symmetric_within_budget ? "symmetric-within-budget" : "not-symmetric";
}

/// Result of a budget-bounded witness search against left/right symmetry of a
/// point. `not_symmetric` verdicts carry a witness whose two orthogonality
/// claims re-verify decisively; the absence of a witness is reported as
/// symmetric-within-budget, never as a proof.
struct PointSymmetryReport {
  VectorInSpace subject;
  Direction direction;
  SymmetryVerdict verdict;
  std::optional<VectorInSpace> witness;
  int trials_used = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
};

namespace detail {

/// Forward claim must hold at analytic+numeric tolerance, reverse claim must
/// fail with margin beyond witness_margin_factor * tolerance.
inline bool decisive_asymmetry(const SpaceDescriptor& s, std::span<const double> from,
                               std::span<const double> to, const Tolerances& tol) {
  try {
    const auto fwd = bj_orthogonal(s, from, to, OrthMethod::both, tol);
    if (!fwd.orthogonal) return false;
  } catch (const orthogonality_disagreement&) {
    return false;
  }
  const auto rev = bj_orthogonal(s, to, from, OrthMethod::numeric, tol);
  if (rev.orthogonal) return false;
  const double need = tol.witness_margin_factor * tol.numeric_orth * std::max(1.0, norm(s, to));
  if (rev.margin <= need) return false;
  const auto rev_a = bj_orthogonal(s, to, from, OrthMethod::analytic, tol);
  return !rev_a.orthogonal;
}

inline std::vector<double> unit_coordinate(int dim, int i, double sign = 1.0) {
  std::vector<double> e(static_cast<std::size_t>(dim), 0.0);
  e[static_cast<std::size_t>(i)] = sign;
  return e;
}

}  // namespace detail

/// Search for y with x B y but not y B x. Candidates are drawn half from
/// structured directions (coordinates, duality-map kernels) and half from
/// seeded random samples; each is shifted by a right companion so the forward
/// relation holds by construction.
inline PointSymmetryReport point_left_symmetric(const SpaceDescriptor& s, std::span<const double> x,
                                                int budget, std::uint64_t seed,
                                                const Tolerances& tol = Tolerances::defaults()) {
  const double nx = norm(s, x);
  if (nx == 0.0) throw input_error("symmetry is undefined at x = 0");
  PointSymmetryReport report{VectorInSpace(s, {x.begin(), x.end()}), Direction::left,
                             SymmetryVerdict::symmetric_within_budget, std::nullopt, 0, seed,
                             tol.numeric_orth};
  Rng rng(seed);
  const int n = s.dim();

  auto try_candidate = [&](std::vector<double> y) -> bool {
    ++report.trials_used;
    const double nY = norm(s, y);
    if (nY <= 1e-12) return false;
    for (auto& c : y) c /= nY;
    if (!detail::decisive_asymmetry(s, x, y, tol)) return false;
    report.verdict = SymmetryVerdict::not_symmetric;
    report.witness = VectorInSpace(s, std::move(y));
    return true;
  };
  // Shift u along x so that x B (b x + u); sweep the whole companion
  // interval, whose endpoints carry the non-generic witnesses.
  auto shifted = [&](std::span<const double> u, int which) -> std::vector<double> {
    const auto [blo, bhi] = right_companion_interval(s, x, u, tol);
    double b = 0.5 * (blo + bhi);
    if (which == 1) b = blo;
    if (which == 2) b = bhi;
    if (which == 3) b = rng.uniform(blo, bhi);
    return detail::add_scaled(u, b, x);
  };

  const int structured_budget = budget / 2;
  // Structured phase: duality-map kernel (2-d), then coordinate directions.
  if (n == 2 && is_smooth_point(s, x, tol).smooth && report.trials_used < structured_budget) {
    const auto f = canonical_norming(s, x, tol);
    if (try_candidate({f.coords[1], -f.coords[0]})) return report;
  }
  for (int i = 0; i < n && report.trials_used < structured_budget; ++i) {
    for (int which = 0; which < 3 && report.trials_used < structured_budget; ++which) {
      if (try_candidate(shifted(detail::unit_coordinate(n, i), which))) return report;
    }
  }
  // Random phase.
  while (report.trials_used < budget) {
    const auto u = rng.normal_vector(n);
    if (try_candidate(shifted(u, report.trials_used % 4))) return report;
  }
  return report;
}

/// Search for y with y B x but not x B y, generating candidates through left
/// companions (a x + u) B x and sweeping the companion interval.
inline PointSymmetryReport point_right_symmetric(const SpaceDescriptor& s, std::span<const double> x,
                                                 int budget, std::uint64_t seed,
                                                 const Tolerances& tol = Tolerances::defaults()) {
  const double nx = norm(s, x);
  if (nx == 0.0) throw input_error("symmetry is undefined at x = 0");
  PointSymmetryReport report{VectorInSpace(s, {x.begin(), x.end()}), Direction::right,
                             SymmetryVerdict::symmetric_within_budget, std::nullopt, 0, seed,
                             tol.numeric_orth};
  Rng rng(seed);
  const int n = s.dim();

  auto try_candidate = [&](std::vector<double> y) -> bool {
    ++report.trials_used;
    const double nY = norm(s, y);
    if (nY <= 1e-12) return false;
    for (auto& c : y) c /= nY;
    if (!detail::decisive_asymmetry(s, y, x, tol)) return false;
    report.verdict = SymmetryVerdict::not_symmetric;
    report.witness = VectorInSpace(s, std::move(y));
    return true;
  };
  auto shifted = [&](std::span<const double> u, int which) -> std::vector<double> {
    const auto [alo, ahi] = left_companion_interval(s, x, u, tol);
    double a = 0.5 * (alo + ahi);
    if (which == 1) a = alo;
    if (which == 2) a = ahi;
    if (which == 3) a = rng.uniform(alo, ahi);
    return detail::add_scaled(u, a, x);
  };

  const int structured_budget = budget / 2;
  for (int i = 0; i < n && report.trials_used < structured_budget; ++i) {
    // Coordinate vectors tried directly first; they are the classic
    // non-smooth witnesses and need no shift when already orthogonal to x.
    const auto e = detail::unit_coordinate(n, i);
    if (try_candidate(e)) return report;
    for (int which = 0; which < 3 && report.trials_used < structured_budget; ++which) {
      if (try_candidate(shifted(e, which))) return report;
    }
  }
  while (report.trials_used < budget) {
    const auto u = rng.normal_vector(n);
    if (try_candidate(shifted(u, report.trials_used % 4))) return report;
  }
  return report;
}

/// A pair (x, y) with x B y and y B x. Coordinate pairs work in every l_p
/// space and in 1-sums of them; an alternating-companion iteration from random
/// starts is kept as a fallback.
inline std::pair<VectorInSpace, VectorInSpace> mutually_orthogonal_pair(
    const SpaceDescriptor& s, std::uint64_t seed, const Tolerances& tol = Tolerances::defaults()) {
  if (s.dim() < 2) throw input_error("a mutually orthogonal pair needs dimension >= 2");
  auto mutual = [&](std::span<const double> a, std::span<const double> b) {
    return bj_orthogonal(s, a, b, OrthMethod::analytic, tol).orthogonal &&
           bj_orthogonal(s, b, a, OrthMethod::analytic, tol).orthogonal;
  };
  const int n = s.dim();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto ei = detail::unit_coordinate(n, i);
      const auto ej = detail::unit_coordinate(n, j);
      if (mutual(ei, ej)) return {VectorInSpace(s, ei), VectorInSpace(s, ej)};
    }
  Rng rng(seed);
  for (int restart = 0; restart < 25; ++restart) {
    auto x = rng.normal_vector(n);
    auto y = rng.normal_vector(n);
    for (auto* v : {&x, &y}) {
      const double nv = norm(s, *v);
      for (auto& c : *v) c /= nv;
    }
    for (int it = 0; it < 40; ++it) {
      // Alternate: make y B x, then x B y.
      const double a = james_left_companion(s, x, y, tol);
      y = detail::add_scaled(y, a, x);
      double ny = norm(s, y);
      if (ny <= 1e-12) break;
      for (auto& c : y) c /= ny;
      const double b = james_left_companion(s, y, x, tol);
      x = detail::add_scaled(x, b, y);
      const double nx2 = norm(s, x);
      if (nx2 <= 1e-12) break;
      for (auto& c : x) c /= nx2;
      if (mutual(x, y)) return {VectorInSpace(s, x), VectorInSpace(s, y)};
    }
  }
  throw numeric_failure("no mutually orthogonal pair found within budget");
}

}  // namespace bj
