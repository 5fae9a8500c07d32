#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bj/config.hpp"
#include "bj/errors.hpp"
#include "bj/rng.hpp"

namespace bj {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class SpaceKind { lp, sum1 };

/// A finite-dimensional normed space: either l_p^n for p in [1, inf], or a
/// 1-direct-sum of two descriptor spaces, ||(x, z)|| = ||x|| + ||z||.
/// Immutable value type; children of a sum are shared.
class SpaceDescriptor {
public:
  static SpaceDescriptor lp(double p, int dim) {
    if (dim < 1) throw input_error("space dimension must be >= 1");
    if (std::isnan(p) || p < 1.0) throw input_error("p must be in [1, inf]");
    // The duality-map exponent p-1 degenerates near the non-smooth endpoints;
    // reject rather than silently degrade.
    if (p > 1.0 && p < 1.0 + 1e-6) throw input_error("p too close to 1 (use p = 1 exactly)");
    if (p > 1e6 && !std::isinf(p)) throw input_error("p too large (use p = inf)");
    SpaceDescriptor s;
    s.kind_ = SpaceKind::lp;
    s.p_ = p;
    s.dim_ = dim;
    return s;
  }

  static SpaceDescriptor sum1(SpaceDescriptor left, SpaceDescriptor right) {
    SpaceDescriptor s;
    s.kind_ = SpaceKind::sum1;
    s.dim_ = left.dim() + right.dim();
    s.left_ = std::make_shared<SpaceDescriptor>(std::move(left));
    s.right_ = std::make_shared<SpaceDescriptor>(std::move(right));
    return s;
  }

  SpaceKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double p() const { return p_; }
  const SpaceDescriptor& left() const { return *left_; }
  const SpaceDescriptor& right() const { return *right_; }

  /// Midpoints of distinct unit vectors stay strictly inside the ball.
  bool strictly_convex() const {
    if (dim_ == 1) return true;
    if (kind_ == SpaceKind::lp) return p_ > 1.0 && !std::isinf(p_);
    return false;  // a 1-sum with both parts present has flat sphere segments
  }

  /// Every nonzero point has a unique norming functional.
  bool smooth() const {
    if (dim_ == 1) return true;
    if (kind_ == SpaceKind::lp) return p_ > 1.0 && !std::isinf(p_);
    return false;  // (x, 0) points of a 1-sum are never smooth
  }

  /// Finite-dimensional spaces are reflexive; recorded for hypothesis
  /// bookkeeping rather than computed.
  bool reflexive() const { return true; }

  /// Weak convergence plus norm convergence implies strong convergence;
  /// automatic in finite dimension, so recorded as a constant.
  bool kadets_klee() const { return true; }

  bool operator==(const SpaceDescriptor& o) const {
    if (kind_ != o.kind_ || dim_ != o.dim_) return false;
    if (kind_ == SpaceKind::lp) return p_ == o.p_;
    return left() == o.left() && right() == o.right();
  }
  bool operator!=(const SpaceDescriptor& o) const { return !(*this == o); }

  std::string to_string() const {
    if (kind_ == SpaceKind::lp) {
      std::string ps = std::isinf(p_) ? "inf" : std::to_string(p_);
      return "lp(p=" + ps + ",dim=" + std::to_string(dim_) + ")";
    }
    return "sum1(" + left().to_string() + "," + right().to_string() + ")";
  }

private:
  SpaceDescriptor() = default;
  SpaceKind kind_ = SpaceKind::lp;
  double p_ = 2.0;
  int dim_ = 1;
  std::shared_ptr<const SpaceDescriptor> left_, right_;
};

inline SpaceDescriptor l1(int dim) { return SpaceDescriptor::lp(1.0, dim); }
inline SpaceDescriptor l2(int dim) { return SpaceDescriptor::lp(2.0, dim); }
inline SpaceDescriptor linf(int dim) { return SpaceDescriptor::lp(kInf, dim); }

/// Conjugate exponent: 1/p + 1/q = 1.
inline double dual_exponent(double p) {
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

/// Descriptor of the dual space; only l_p spaces have a representable dual.
inline SpaceDescriptor dual_space(const SpaceDescriptor& s) {
  if (s.kind() != SpaceKind::lp)
    throw unsupported_space_error("dual descriptor exists only for lp spaces");
  return SpaceDescriptor::lp(dual_exponent(s.p()), s.dim());
}

namespace detail {

inline void check_dim(const SpaceDescriptor& s, std::span<const double> x) {
  if (static_cast<int>(x.size()) != s.dim())
    throw input_error("coordinate length " + std::to_string(x.size()) +
                      " does not match space dimension " + std::to_string(s.dim()));
}

inline double lp_norm(double p, std::span<const double> x) {
  if (p == 1.0) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
  }
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
  }
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double v : x) s += std::pow(std::abs(v) / m, p);
  return m * std::pow(s, 1.0 / p);
}

}  // namespace detail

/// The norm of the space applied to a raw coordinate sequence.
inline double norm(const SpaceDescriptor& s, std::span<const double> x) {
  detail::check_dim(s, x);
  if (s.kind() == SpaceKind::lp) return detail::lp_norm(s.p(), x);
  const int dl = s.left().dim();
  return norm(s.left(), x.subspan(0, static_cast<std::size_t>(dl))) +
         norm(s.right(), x.subspan(static_cast<std::size_t>(dl)));
}

/// Dual norm of a coefficient sequence acting on the space by the standard
/// pairing. For a 1-sum the dual norm is the max of the two part dual norms.
inline double dual_norm(const SpaceDescriptor& s, std::span<const double> f) {
  detail::check_dim(s, f);
  if (s.kind() == SpaceKind::lp) return detail::lp_norm(dual_exponent(s.p()), f);
  const int dl = s.left().dim();
  return std::max(dual_norm(s.left(), f.subspan(0, static_cast<std::size_t>(dl))),
                  dual_norm(s.right(), f.subspan(static_cast<std::size_t>(dl))));
}

inline double pairing(std::span<const double> f, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * x[i];
  return s;
}

/// A coordinate sequence tagged with the space it lives in.
struct VectorInSpace {
  SpaceDescriptor space;
  std::vector<double> coords;

  VectorInSpace(SpaceDescriptor s, std::vector<double> c) : space(std::move(s)), coords(std::move(c)) {
    detail::check_dim(space, coords);
  }
  double norm() const { return bj::norm(space, coords); }
};

/// A coefficient sequence acting on `space` by the standard pairing; its size
/// is measured in the dual norm.
struct Functional {
  SpaceDescriptor space;  // the predual space it acts on
  std::vector<double> coords;

  Functional(SpaceDescriptor s, std::vector<double> c) : space(std::move(s)), coords(std::move(c)) {
    detail::check_dim(space, coords);
  }
  double operator()(std::span<const double> x) const { return pairing(coords, x); }
  double dual_norm() const { return bj::dual_norm(space, coords); }
};

namespace detail {

inline double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

/// Duality-map functional at x for a smooth l_p space (1 < p < inf):
/// f_i = sign(x_i) (|x_i| / ||x||)^(p-1); then ||f||_q = 1 and f(x) = ||x||.
inline std::vector<double> lp_duality_map(double p, std::span<const double> x) {
  const double nx = lp_norm(p, x);
  std::vector<double> f(x.size(), 0.0);
  if (nx == 0.0) return f;
  for (std::size_t i = 0; i < x.size(); ++i)
    f[i] = sgn(x[i]) * std::pow(std::abs(x[i]) / nx, p - 1.0);
  return f;
}

inline std::vector<int> l1_free_indices(std::span<const double> x, double zero_rel_tol) {
  const double nx = lp_norm(1.0, x);
  std::vector<int> free;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::abs(x[i]) <= zero_rel_tol * nx) free.push_back(static_cast<int>(i));
  return free;
}

inline std::vector<int> linf_active_indices(std::span<const double> x, double zero_rel_tol) {
  const double m = lp_norm(kInf, x);
  std::vector<int> active;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::abs(x[i]) >= m * (1.0 - zero_rel_tol)) active.push_back(static_cast<int>(i));
  return active;
}

/// The unit vector normed by a given functional: x with ||x|| = 1 and
/// g(x) = ||g||*. Closed form on smooth strictly convex lp spaces, where the
/// point is unique.
inline std::vector<double> unit_vector_normed_by(const SpaceDescriptor& s, std::span<const double> g) {
  if (s.kind() != SpaceKind::lp || s.p() <= 1.0 || std::isinf(s.p()))
    throw unsupported_space_error("norming point requires a smooth strictly convex lp space");
  const double q = dual_exponent(s.p());
  const double ng = lp_norm(q, g);
  if (ng == 0.0) throw input_error("the zero functional norms no point");
  std::vector<double> x(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) x[i] = sgn(g[i]) * std::pow(std::abs(g[i]) / ng, q - 1.0);
  const double nx = lp_norm(s.p(), x);
  for (auto& c : x) c /= nx;
  return x;
}

}  // namespace detail

/// Closed interval [min, max] of f(y) as f ranges over the norming
/// functionals J(x) = {f : ||f||* = 1, f(x) = ||x||}. These are exactly the
/// one-sided derivatives of t -> ||x + t y|| at t = 0.
struct SupportInterval {
  double lo = 0.0;
  double hi = 0.0;
};

inline SupportInterval support_values(const SpaceDescriptor& s, std::span<const double> x,
                                      std::span<const double> y,
                                      const Tolerances& tol = Tolerances::defaults()) {
  detail::check_dim(s, x);
  detail::check_dim(s, y);
  const double nx = norm(s, x);
  if (nx == 0.0) throw input_error("support_values requires x != 0");
  if (s.kind() == SpaceKind::lp) {
    const double p = s.p();
    if (p == 1.0) {
      double base = 0.0, slack = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::abs(x[i]) <= tol.zero_coordinate * nx)
          slack += std::abs(y[i]);
        else
          base += detail::sgn(x[i]) * y[i];
      }
      return {base - slack, base + slack};
    }
    if (std::isinf(p)) {
      double lo = kInf, hi = -kInf;
      for (int i : detail::linf_active_indices(x, tol.zero_coordinate)) {
        const double v = detail::sgn(x[static_cast<std::size_t>(i)]) * y[static_cast<std::size_t>(i)];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      return {lo, hi};
    }
    const auto f = detail::lp_duality_map(p, x);
    const double d = pairing(f, y);
    return {d, d};
  }
  const std::size_t dl = static_cast<std::size_t>(s.left().dim());
  const auto xl = x.subspan(0, dl), xr = x.subspan(dl);
  const auto yl = y.subspan(0, dl), yr = y.subspan(dl);
  SupportInterval L, R;
  if (norm(s.left(), xl) <= tol.zero_coordinate * nx) {
    const double ny = norm(s.left(), yl);
    L = {-ny, ny};  // the whole dual ball acts on this block
  } else {
    L = support_values(s.left(), xl, yl, tol);
  }
  if (norm(s.right(), xr) <= tol.zero_coordinate * nx) {
    const double ny = norm(s.right(), yr);
    R = {-ny, ny};
  } else {
    R = support_values(s.right(), xr, yr, tol);
  }
  return {L.lo + R.lo, L.hi + R.hi};
}

namespace detail {

/// A distinguished member of J(x) (for smooth points, the member).
inline std::vector<double> canonical_norming_impl(const SpaceDescriptor& s, std::span<const double> x,
                                                  const Tolerances& tol) {
  if (s.kind() == SpaceKind::lp) {
    const double p = s.p();
    const double nx = lp_norm(p, x);
    std::vector<double> f(x.size(), 0.0);
    if (nx == 0.0) return f;
    if (p == 1.0) {
      for (std::size_t i = 0; i < x.size(); ++i)
        if (std::abs(x[i]) > tol.zero_coordinate * nx) f[i] = sgn(x[i]);
      return f;
    }
    if (std::isinf(p)) {
      const auto active = linf_active_indices(x, tol.zero_coordinate);
      for (int i : active)
        f[static_cast<std::size_t>(i)] =
            sgn(x[static_cast<std::size_t>(i)]) / static_cast<double>(active.size());
      return f;
    }
    return lp_duality_map(p, x);
  }
  const std::size_t dl = static_cast<std::size_t>(s.left().dim());
  auto fl = canonical_norming_impl(s.left(), x.subspan(0, dl), tol);
  auto fr = canonical_norming_impl(s.right(), x.subspan(dl), tol);
  fl.insert(fl.end(), fr.begin(), fr.end());
  return fl;
}

/// Member of J(x) attaining max (or min) of f(y) over the set.
inline std::vector<double> extreme_norming_impl(const SpaceDescriptor& s, std::span<const double> x,
                                                std::span<const double> y, bool maximize,
                                                const Tolerances& tol) {
  const double nx = norm(s, x);
  if (s.kind() == SpaceKind::lp) {
    const double p = s.p();
    if (p == 1.0) {
      std::vector<double> f(x.size(), 0.0);
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::abs(x[i]) > tol.zero_coordinate * nx)
          f[i] = sgn(x[i]);
        else
          f[i] = maximize ? sgn(y[i]) : -sgn(y[i]);
      }
      return f;
    }
    if (std::isinf(p)) {
      const auto active = linf_active_indices(x, tol.zero_coordinate);
      int best = active.front();
      double best_v = sgn(x[static_cast<std::size_t>(best)]) * y[static_cast<std::size_t>(best)];
      for (int i : active) {
        const double v = sgn(x[static_cast<std::size_t>(i)]) * y[static_cast<std::size_t>(i)];
        if ((maximize && v > best_v) || (!maximize && v < best_v)) {
          best = i;
          best_v = v;
        }
      }
      std::vector<double> f(x.size(), 0.0);
      f[static_cast<std::size_t>(best)] = sgn(x[static_cast<std::size_t>(best)]);
      return f;
    }
    return lp_duality_map(p, x);
  }
  const std::size_t dl = static_cast<std::size_t>(s.left().dim());
  const auto xl = x.subspan(0, dl), xr = x.subspan(dl);
  const auto yl = y.subspan(0, dl), yr = y.subspan(dl);
  std::vector<double> fl, fr;
  if (norm(s.left(), xl) <= tol.zero_coordinate * nx) {
    // Whole dual ball: the best action on yl is a norming functional of yl.
    fl = canonical_norming_impl(s.left(), yl, tol);
    if (!maximize)
      for (auto& v : fl) v = -v;
  } else {
    fl = extreme_norming_impl(s.left(), xl, yl, maximize, tol);
  }
  if (norm(s.right(), xr) <= tol.zero_coordinate * nx) {
    fr = canonical_norming_impl(s.right(), yr, tol);
    if (!maximize)
      for (auto& v : fr) v = -v;
  } else {
    fr = extreme_norming_impl(s.right(), xr, yr, maximize, tol);
  }
  fl.insert(fl.end(), fr.begin(), fr.end());
  return fl;
}

}  // namespace detail

inline Functional canonical_norming(const SpaceDescriptor& s, std::span<const double> x,
                                    const Tolerances& tol = Tolerances::defaults()) {
  detail::check_dim(s, x);
  if (norm(s, x) == 0.0) throw input_error("no norming functional at x = 0");
  return Functional(s, detail::canonical_norming_impl(s, x, tol));
}

/// Member of J(x) with a prescribed value f(y) = target; target must lie in
/// support_values(s, x, y). J(x) is convex, so a convex combination of the
/// two extreme members realizes any interior value.
inline Functional norming_member_with_value(const SpaceDescriptor& s, std::span<const double> x,
                                            std::span<const double> y, double target,
                                            const Tolerances& tol = Tolerances::defaults()) {
  const auto iv = support_values(s, x, y, tol);
  const double width = iv.hi - iv.lo;
  const double slack = 1e-9 * std::max(1.0, std::abs(iv.lo) + std::abs(iv.hi));
  if (target < iv.lo - slack || target > iv.hi + slack)
    throw input_error("requested functional value outside the attainable interval");
  auto f_lo = detail::extreme_norming_impl(s, x, y, /*maximize=*/false, tol);
  if (width <= 0.0) return Functional(s, std::move(f_lo));
  const auto f_hi = detail::extreme_norming_impl(s, x, y, /*maximize=*/true, tol);
  const double theta = std::clamp((target - iv.lo) / width, 0.0, 1.0);
  for (std::size_t i = 0; i < f_lo.size(); ++i) f_lo[i] = (1.0 - theta) * f_lo[i] + theta * f_hi[i];
  return Functional(s, std::move(f_lo));
}

// ---------------------------------------------------------------------------
// Structured norming-functional sets

enum class FunctionalSetKind { singleton, l1_box, linf_simplex, numeric_sample };

/// The set J(x) of norming functionals in a structured representation:
///   singleton      — smooth point, the unique member in `base`
///   l1_box         — l1 sign pattern in `base` (zeros on free coordinates),
///                    free coordinates range over [-1, 1]
///   linf_simplex   — convex hull of signed coordinate functionals on the
///                    active indices
///   numeric_sample — sampled members (1-sum spaces at non-smooth points)
struct FunctionalSet {
  FunctionalSetKind kind;
  SpaceDescriptor space;
  std::vector<double> anchor;  // the vector the set norms
  std::vector<double> base;    // singleton member / l1 sign pattern
  std::vector<int> indices;    // l1_box: free indices; linf_simplex: active indices
  std::vector<double> signs;   // linf_simplex: sign per active index
  std::vector<std::vector<double>> samples;  // numeric_sample members

  bool is_singleton() const { return kind == FunctionalSetKind::singleton; }

  Functional principal(const Tolerances& tol = Tolerances::defaults()) const {
    return canonical_norming(space, anchor, tol);
  }

  /// Representative members; for structured kinds these are seeded draws from
  /// the exact parametrization, so each satisfies the norming constraints.
  std::vector<Functional> sample_members(int count, std::uint64_t seed = 0x5EEDULL) const {
    std::vector<Functional> out;
    Rng rng(seed);
    switch (kind) {
      case FunctionalSetKind::singleton:
        out.emplace_back(space, base);
        break;
      case FunctionalSetKind::l1_box: {
        for (int k = 0; k < count; ++k) {
          auto f = base;
          for (int i : indices) f[static_cast<std::size_t>(i)] = rng.uniform(-1.0, 1.0);
          out.emplace_back(space, std::move(f));
        }
        break;
      }
      case FunctionalSetKind::linf_simplex: {
        for (int k = 0; k < count; ++k) {
          std::vector<double> w(indices.size());
          double tw = 0.0;
          for (auto& v : w) {
            v = -std::log(1.0 - rng.u01());
            tw += v;
          }
          std::vector<double> f(anchor.size(), 0.0);
          for (std::size_t j = 0; j < indices.size(); ++j)
            f[static_cast<std::size_t>(indices[j])] = signs[j] * w[j] / tw;
          out.emplace_back(space, std::move(f));
        }
        break;
      }
      case FunctionalSetKind::numeric_sample:
        for (const auto& f : samples) {
          out.emplace_back(space, f);
          if (static_cast<int>(out.size()) >= count) break;
        }
        break;
    }
    return out;
  }

  /// Two distinct members (only meaningful when the set is not a singleton).
  std::pair<Functional, Functional> two_distinct(const Tolerances& tol = Tolerances::defaults()) const {
    if (kind == FunctionalSetKind::l1_box) {
      auto a = base, b = base;
      a[static_cast<std::size_t>(indices.front())] = 1.0;
      b[static_cast<std::size_t>(indices.front())] = -1.0;
      return {Functional(space, std::move(a)), Functional(space, std::move(b))};
    }
    if (kind == FunctionalSetKind::linf_simplex) {
      std::vector<double> a(anchor.size(), 0.0), b(anchor.size(), 0.0);
      a[static_cast<std::size_t>(indices[0])] = signs[0];
      b[static_cast<std::size_t>(indices[1])] = signs[1];
      return {Functional(space, std::move(a)), Functional(space, std::move(b))};
    }
    if (kind == FunctionalSetKind::numeric_sample && samples.size() >= 2)
      return {Functional(space, samples[0]), Functional(space, samples[1])};
    (void)tol;
    throw input_error("functional set has a single member");
  }
};

namespace detail {

/// Sampled member of the dual unit ball (used for the free block of a 1-sum
/// norming set when that part of the anchor vanishes).
inline std::vector<double> sample_dual_ball(const SpaceDescriptor& s, Rng& rng) {
  auto v = rng.normal_vector(s.dim());
  const double dn = dual_norm(s, v);
  const double r = rng.u01();
  if (dn == 0.0) return std::vector<double>(static_cast<std::size_t>(s.dim()), 0.0);
  for (auto& c : v) c *= r / dn;
  return v;
}

inline std::vector<double> sample_norming_member(const SpaceDescriptor& s, std::span<const double> x,
                                                 Rng& rng, const Tolerances& tol);

inline std::vector<double> sample_norming_member_lp(const SpaceDescriptor& s, std::span<const double> x,
                                                    Rng& rng, const Tolerances& tol) {
  const double p = s.p();
  const double nx = lp_norm(p, x);
  if (p == 1.0) {
    std::vector<double> f(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      f[i] = std::abs(x[i]) > tol.zero_coordinate * nx ? sgn(x[i]) : rng.uniform(-1.0, 1.0);
    return f;
  }
  if (std::isinf(p)) {
    const auto active = linf_active_indices(x, tol.zero_coordinate);
    std::vector<double> w(active.size());
    double tw = 0.0;
    for (auto& v : w) {
      v = -std::log(1.0 - rng.u01());
      tw += v;
    }
    std::vector<double> f(x.size(), 0.0);
    for (std::size_t j = 0; j < active.size(); ++j)
      f[static_cast<std::size_t>(active[j])] = sgn(x[static_cast<std::size_t>(active[j])]) * w[j] / tw;
    return f;
  }
  return lp_duality_map(p, x);
}

inline std::vector<double> sample_norming_member(const SpaceDescriptor& s, std::span<const double> x,
                                                 Rng& rng, const Tolerances& tol) {
  if (s.kind() == SpaceKind::lp) return sample_norming_member_lp(s, x, rng, tol);
  const double nx = norm(s, x);
  const std::size_t dl = static_cast<std::size_t>(s.left().dim());
  const auto xl = x.subspan(0, dl), xr = x.subspan(dl);
  std::vector<double> fl = norm(s.left(), xl) <= tol.zero_coordinate * nx
                               ? sample_dual_ball(s.left(), rng)
                               : sample_norming_member(s.left(), xl, rng, tol);
  std::vector<double> fr = norm(s.right(), xr) <= tol.zero_coordinate * nx
                               ? sample_dual_ball(s.right(), rng)
                               : sample_norming_member(s.right(), xr, rng, tol);
  fl.insert(fl.end(), fr.begin(), fr.end());
  return fl;
}

}  // namespace detail

/// The full set J(x) = {f : ||f||* = 1, f(x) = ||x||} in structured form.
/// Smooth points yield a singleton. 1-sum spaces at non-smooth points are
/// returned as a numeric sample with a fixed budget of 64 members.
inline FunctionalSet norming_functionals(const SpaceDescriptor& s, std::span<const double> x,
                                         const Tolerances& tol = Tolerances::defaults()) {
  detail::check_dim(s, x);
  const double nx = norm(s, x);
  if (nx == 0.0) throw input_error("no norming functional at x = 0");
  FunctionalSet set{FunctionalSetKind::singleton, s, std::vector<double>(x.begin(), x.end()), {}, {}, {}, {}};
  if (s.kind() == SpaceKind::lp) {
    const double p = s.p();
    if (p == 1.0) {
      const auto free = detail::l1_free_indices(x, tol.zero_coordinate);
      set.base = detail::canonical_norming_impl(s, x, tol);
      if (free.empty()) return set;  // unique sign pattern -> smooth point
      set.kind = FunctionalSetKind::l1_box;
      set.indices = free;
      return set;
    }
    if (std::isinf(p)) {
      const auto active = detail::linf_active_indices(x, tol.zero_coordinate);
      if (active.size() == 1) {
        set.base = detail::canonical_norming_impl(s, x, tol);
        return set;
      }
      set.kind = FunctionalSetKind::linf_simplex;
      set.indices = active;
      for (int i : active) set.signs.push_back(detail::sgn(x[static_cast<std::size_t>(i)]));
      return set;
    }
    set.base = detail::lp_duality_map(p, x);
    return set;
  }
  // 1-sum: singleton only when both parts are nonzero and smooth there.
  const std::size_t dl = static_cast<std::size_t>(s.left().dim());
  const auto xl = x.subspan(0, dl), xr = x.subspan(dl);
  const bool left_zero = norm(s.left(), xl) <= tol.zero_coordinate * nx;
  const bool right_zero = norm(s.right(), xr) <= tol.zero_coordinate * nx;
  if (!left_zero && !right_zero) {
    const auto jl = norming_functionals(s.left(), xl, tol);
    const auto jr = norming_functionals(s.right(), xr, tol);
    if (jl.is_singleton() && jr.is_singleton()) {
      set.base = jl.base.empty() ? detail::canonical_norming_impl(s.left(), xl, tol) : jl.base;
      auto rb = jr.base.empty() ? detail::canonical_norming_impl(s.right(), xr, tol) : jr.base;
      set.base.insert(set.base.end(), rb.begin(), rb.end());
      return set;
    }
  }
  set.kind = FunctionalSetKind::numeric_sample;
  Rng rng(0xB1FFULL);
  constexpr int kSum1SampleBudget = 64;
  set.samples.push_back(detail::canonical_norming_impl(s, x, tol));
  for (int k = 1; k < kSum1SampleBudget; ++k)
    set.samples.push_back(detail::sample_norming_member(s, x, rng, tol));
  return set;
}

/// Smoothness of a point, decided structurally, with two distinct norming
/// functionals as evidence when the answer is no.
struct SmoothnessVerdict {
  bool smooth = false;
  std::optional<std::pair<Functional, Functional>> evidence;
};

inline SmoothnessVerdict is_smooth_point(const SpaceDescriptor& s, std::span<const double> x,
                                         const Tolerances& tol = Tolerances::defaults()) {
  detail::check_dim(s, x);
  const double nx = norm(s, x);
  if (nx == 0.0) throw input_error("smoothness is undefined at x = 0");
  if (s.kind() == SpaceKind::lp) {
    const auto set = norming_functionals(s, x, tol);
    if (set.is_singleton()) return {true, std::nullopt};
    return {false, set.two_distinct(tol)};
  }
  const std::size_t dl = static_cast<std::size_t>(s.left().dim());
  const auto xl = x.subspan(0, dl), xr = x.subspan(dl);
  const bool left_zero = norm(s.left(), xl) <= tol.zero_coordinate * nx;
  const bool right_zero = norm(s.right(), xr) <= tol.zero_coordinate * nx;
  auto embed = [&](const std::vector<double>& fl, const std::vector<double>& fr) {
    auto f = fl;
    f.insert(f.end(), fr.begin(), fr.end());
    return Functional(s, std::move(f));
  };
  if (left_zero || right_zero) {
    // The dual ball of the vanished block is free; exhibit 0 and a unit
    // functional on that block, paired with a fixed norming member elsewhere.
    const auto& free_part = left_zero ? s.left() : s.right();
    const auto& live_part = left_zero ? s.right() : s.left();
    const auto live_x = left_zero ? xr : xl;
    const auto live_f = detail::canonical_norming_impl(live_part, live_x, tol);
    std::vector<double> zero_f(static_cast<std::size_t>(free_part.dim()), 0.0);
    std::vector<double> unit_f(static_cast<std::size_t>(free_part.dim()), 0.0);
    std::vector<double> e1(static_cast<std::size_t>(free_part.dim()), 0.0);
    e1[0] = 1.0;
    unit_f = detail::canonical_norming_impl(free_part, e1, tol);
    auto a = left_zero ? embed(zero_f, live_f) : embed(live_f, zero_f);
    auto b = left_zero ? embed(unit_f, live_f) : embed(live_f, unit_f);
    return SmoothnessVerdict{false, std::make_pair(std::move(a), std::move(b))};
  }
  const auto vl = is_smooth_point(s.left(), xl, tol);
  const auto vr = is_smooth_point(s.right(), xr, tol);
  if (vl.smooth && vr.smooth) return {true, std::nullopt};
  if (!vl.smooth) {
    const auto fr = detail::canonical_norming_impl(s.right(), xr, tol);
    return {false, std::make_pair(embed(vl.evidence->first.coords, fr),
                                  embed(vl.evidence->second.coords, fr))};
  }
  const auto fl = detail::canonical_norming_impl(s.left(), xl, tol);
  return {false, std::make_pair(embed(fl, vr.evidence->first.coords),
                                embed(fl, vr.evidence->second.coords))};
}

/// Extreme points of the unit ball, when they form a finite enumerable set.
struct ExtremePoints {
  bool enumerable = false;
  std::vector<std::vector<double>> points;
};

inline ExtremePoints extreme_points(const SpaceDescriptor& s) {
  ExtremePoints out;
  if (s.kind() == SpaceKind::lp) {
    if (s.dim() == 1) {
      out.enumerable = true;
      out.points = {{1.0}, {-1.0}};
      return out;
    }
    if (s.p() == 1.0) {
      out.enumerable = true;
      for (int i = 0; i < s.dim(); ++i)
        for (double sign : {1.0, -1.0}) {
          std::vector<double> e(static_cast<std::size_t>(s.dim()), 0.0);
          e[static_cast<std::size_t>(i)] = sign;
          out.points.push_back(std::move(e));
        }
      return out;
    }
    if (std::isinf(s.p())) {
      if (s.dim() > 20) return out;  // 2^n blows past desk scale
      out.enumerable = true;
      const int n = s.dim();
      for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        std::vector<double> v(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? -1.0 : 1.0;
        out.points.push_back(std::move(v));
      }
      return out;
    }
    return out;  // strictly convex: the whole sphere, not enumerable
  }
  const auto el = extreme_points(s.left());
  const auto er = extreme_points(s.right());
  if (!el.enumerable || !er.enumerable) return out;
  out.enumerable = true;
  const int dl = s.left().dim(), dr = s.right().dim();
  for (const auto& p : el.points) {
    auto v = p;
    v.resize(static_cast<std::size_t>(dl + dr), 0.0);
    out.points.push_back(std::move(v));
  }
  for (const auto& p : er.points) {
    std::vector<double> v(static_cast<std::size_t>(dl), 0.0);
    v.insert(v.end(), p.begin(), p.end());
    out.points.push_back(std::move(v));
  }
  return out;
}

/// Deterministic unit-sphere sample: normalize standard-normal draws by the
/// space norm. Identical output for identical (space, seed, count).
inline std::vector<VectorInSpace> sample_unit_sphere(const SpaceDescriptor& s, std::uint64_t seed,
                                                     int count) {
  if (count < 1) throw input_error("sample count must be >= 1");
  std::vector<VectorInSpace> out;
  out.reserve(static_cast<std::size_t>(count));
  Rng rng(seed);
  while (static_cast<int>(out.size()) < count) {
    auto v = rng.normal_vector(s.dim());
    const double n = norm(s, v);
    if (n < 1e-12) continue;
    for (auto& c : v) c /= n;
    out.emplace_back(s, std::move(v));
  }
  return out;
}

}  // namespace bj
