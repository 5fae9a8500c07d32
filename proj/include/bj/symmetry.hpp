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
#include "bj/linalg.hpp"
#include "bj/operators.hpp"
#include "bj/orthogonality.hpp"
#include "bj/rng.hpp"
#include "bj/space.hpp"

namespace bj {

/// Result of a budget-bounded witness search against left/right symmetry of
/// an operator. A not-symmetric verdict carries the witness operator and the
/// name of the strategy that produced it.
struct OperatorSymmetryReport {
  LinearOperator subject;
  Direction direction;
  SymmetryVerdict verdict;
  std::optional<LinearOperator> witness;
  std::string strategy;
  int trials_used = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
};

namespace detail {

/// `from` B `to` must verify within tolerance and `to` B `from` must fail
/// with margin beyond witness_margin_factor * tolerance.
inline bool op_forward_holds_reverse_fails(const LinearOperator& from, const LinearOperator& to,
                                           const Tolerances& tol) {
  const auto fwd = op_bj_orthogonal_numeric(from, to, tol);
  if (!fwd.orthogonal) return false;
  const auto rev = op_bj_orthogonal_numeric(to, from, tol);
  if (rev.orthogonal) return false;
  const double scale = std::max(1.0, operator_norm(to, tol).value);
  return rev.margin > tol.witness_margin_factor * tol.numeric_orth * scale;
}

/// Basis of the kernel of a functional (rows of `fs` are functionals).
inline std::vector<std::vector<double>> kernel_basis(const std::vector<std::vector<double>>& fs,
                                                     int dim) {
  std::vector<double> m;
  for (const auto& f : fs) m.insert(m.end(), f.begin(), f.end());
  return linalg::nullspace(std::move(m), static_cast<int>(fs.size()), dim);
}

/// Search a subspace (given by a basis) for y mutually orthogonal with x.
/// Uses the sign change of c -> f_{y(c)}(x) along arcs in coefficient space;
/// valid for smooth strictly convex spaces where y B x iff f_y(x) = 0.
inline std::optional<std::vector<double>> mutual_partner_in_subspace(
    const SpaceDescriptor& s, std::span<const double> x,
    const std::vector<std::vector<double>>& basis, std::uint64_t seed, const Tolerances& tol) {
  if (basis.empty()) return std::nullopt;
  const int k = static_cast<int>(basis.size());
  auto assemble = [&](const std::vector<double>& c) {
    std::vector<double> y(x.size(), 0.0);
    for (int i = 0; i < k; ++i)
      for (std::size_t j = 0; j < y.size(); ++j) y[j] += c[static_cast<std::size_t>(i)] * basis[static_cast<std::size_t>(i)][j];
    const double ny = norm(s, y);
    if (ny > 1e-300)
      for (auto& v : y) v /= ny;
    return y;
  };
  auto phi = [&](const std::vector<double>& c) -> std::optional<double> {
    const auto y = assemble(c);
    if (norm(s, y) < 0.5) return std::nullopt;  // degenerate combination
    return canonical_norming(s, y, tol)(x);
  };
  auto accept = [&](const std::vector<double>& y) {
    return bj_orthogonal(s, y, x, OrthMethod::analytic, tol).orthogonal &&
           bj_orthogonal(s, x, y, OrthMethod::analytic, tol).orthogonal;
  };
  Rng rng(seed);
  for (int attempt = 0; attempt < 24; ++attempt) {
    auto c = rng.normal_vector(k);
    auto p = phi(c);
    if (!p) continue;
    if (std::abs(*p) <= tol.analytic_orth) {
      const auto y = assemble(c);
      if (accept(y)) return y;
    }
    if (k == 1) continue;  // a line has only one direction to test
    // Walk the half-arc from c to -c: phi is odd, so the sign flips.
    auto d = rng.normal_vector(k);
    double lo = 0.0, hi = 3.14159265358979323846;
    const double sign_lo = *p > 0.0 ? 1.0 : -1.0;
    bool ok = true;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      std::vector<double> cm(static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i)
        cm[static_cast<std::size_t>(i)] = std::cos(mid) * c[static_cast<std::size_t>(i)] +
                                          std::sin(mid) * d[static_cast<std::size_t>(i)];
      const auto pm = phi(cm);
      if (!pm) {
        ok = false;
        break;
      }
      if (std::abs(*pm) <= tol.analytic_orth * 1e-2) {
        const auto y = assemble(cm);
        if (accept(y)) return y;
        ok = false;
        break;
      }
      if ((*pm > 0.0 ? 1.0 : -1.0) == sign_lo)
        lo = mid;
      else
        hi = mid;
    }
    (void)ok;
  }
  return std::nullopt;
}

inline bool is_rank_one(const LinearOperator& T, double rel_tol) {
  const double scale = T.max_abs_entry();
  const double cutoff = rel_tol * scale * scale;
  for (int r1 = 0; r1 < T.rows(); ++r1)
    for (int r2 = r1 + 1; r2 < T.rows(); ++r2)
      for (int c1 = 0; c1 < T.cols(); ++c1)
        for (int c2 = c1 + 1; c2 < T.cols(); ++c2)
          if (std::abs(T.at(r1, c1) * T.at(r2, c2) - T.at(r1, c2) * T.at(r2, c1)) > cutoff)
            return false;
  return true;
}

/// Split a rank-one operator into T = f(.) w with ||f||* = 1, ||w|| = ||T||.
inline std::pair<std::vector<double>, std::vector<double>> rank_one_split(const LinearOperator& T) {
  int best = 0;
  double best_norm = -1.0;
  for (int c = 0; c < T.cols(); ++c) {
    const double n = norm(T.codomain, T.column(c));
    if (n > best_norm) {
      best_norm = n;
      best = c;
    }
  }
  const auto wraw = T.column(best);
  std::vector<double> f(static_cast<std::size_t>(T.cols()), 0.0);
  for (int c = 0; c < T.cols(); ++c) {
    const auto col = T.column(c);
    const double d = linalg::dot(col, wraw);
    f[static_cast<std::size_t>(c)] = sgn(d) * norm(T.codomain, col);
  }
  const double nf = dual_norm(T.domain, f);
  for (auto& v : f) v /= nf;
  std::vector<double> w = wraw;
  for (auto& v : w) v *= nf / best_norm;
  return {f, w};
}

/// Search the whole space for y mutually orthogonal with the anchor, by
/// alternating companion shifts (coordinates first, then random starts).
inline std::optional<std::vector<double>> mutual_partner(const SpaceDescriptor& s,
                                                         std::span<const double> anchor,
                                                         std::uint64_t seed, const Tolerances& tol) {
  const double na = norm(s, anchor);
  if (na == 0.0 || s.dim() < 2) return std::nullopt;
  std::vector<double> a(anchor.begin(), anchor.end());
  for (auto& v : a) v /= na;
  auto mutual = [&](std::span<const double> y) {
    return bj_orthogonal(s, a, y, OrthMethod::analytic, tol).orthogonal &&
           bj_orthogonal(s, y, a, OrthMethod::analytic, tol).orthogonal;
  };
  // Smooth strictly convex spaces reduce to the in-kernel search: a B y pins
  // y to ker f_a, and y B a becomes the sign change of f_y(a) there.
  if (s.smooth() && s.strictly_convex()) {
    const auto fa = canonical_norming(s, a, tol);
    const auto K = kernel_basis({fa.coords}, s.dim());
    if (auto y = mutual_partner_in_subspace(s, a, K, seed, tol)) return y;
  }
  std::vector<std::vector<double>> starts;
  for (int i = 0; i < s.dim(); ++i) starts.push_back(unit_coordinate(s.dim(), i));
  Rng rng(seed);
  for (int r = 0; r < 20; ++r) starts.push_back(rng.normal_vector(s.dim()));
  for (auto y : starts) {
    for (int it = 0; it < 40; ++it) {
      double ny = norm(s, y);
      if (ny <= 1e-12) break;
      for (auto& v : y) v /= ny;
      if (mutual(y)) return y;
      const double c1 = james_left_companion(s, a, y, tol);  // (c1 a + y) B a
      y = add_scaled(y, c1, a);
      ny = norm(s, y);
      if (ny <= 1e-12) break;
      for (auto& v : y) v /= ny;
      if (mutual(y)) return y;
      const double c2 = james_right_companion(s, a, y, tol);  // a B (c2 a + y)
      y = add_scaled(y, c2, a);
    }
  }
  return std::nullopt;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// The counterexample constructor for unit-norm operators whose kernel fills
// the hyperplane B-J orthogonal to an attainment point.

/// Certificate wrapping the constructed comparison operator A together with
/// the scalars whose inequalities make the construction work:
///   r = ||x + y|| in (1, 2),  (1 - t)(1 + ||T||) < eps < (2 - r)/(1 + 2r),
///   w = (1 - t) T x + t v with ||w - v|| < eps.
struct Step3Certificate {
  VectorInSpace x;
  VectorInSpace y;
  VectorInSpace v;
  double r = 0.0;
  double t = 0.0;
  double eps = 0.0;
  std::vector<double> w;
  LinearOperator A;
};

inline Step3Certificate construct_step3_witness(const LinearOperator& T, const VectorInSpace& x,
                                                const VectorInSpace& y, const VectorInSpace& v,
                                                const Tolerances& tol = Tolerances::defaults()) {
  const auto& dom = T.domain;
  const auto& cod = T.codomain;
  if (x.space != dom || y.space != dom) throw input_error("x and y must live in the domain");
  if (v.space != cod) throw input_error("v must live in the codomain");
  const double nT = operator_norm(T, tol).value;
  if (std::abs(nT - 1.0) > 1e-6)
    throw precondition_error("unit_norm", "||T|| = " + std::to_string(nT) + ", caller must normalize");
  if (!dom.strictly_convex() || !dom.smooth())
    throw precondition_error("domain_geometry", "domain must be strictly convex and smooth");
  for (const auto* u : {&x, &y})
    if (std::abs(u->norm() - 1.0) > 1e-9)
      throw precondition_error("unit_vectors", "x and y must be unit vectors");
  if (std::abs(v.norm() - 1.0) > 1e-9)
    throw precondition_error("unit_vectors", "v must be a unit vector");
  const auto Tx = T.apply(x.coords);
  if (norm(cod, Tx) < nT * (1.0 - tol.attainment))
    throw precondition_error("x_attains", "x is not in the attainment set of T");
  auto mutual = [&](const SpaceDescriptor& s, std::span<const double> p, std::span<const double> q) {
    return bj_orthogonal(s, p, q, OrthMethod::analytic, tol).orthogonal &&
           bj_orthogonal(s, q, p, OrthMethod::analytic, tol).orthogonal;
  };
  if (!mutual(dom, x.coords, y.coords))
    throw precondition_error("xy_mutually_orthogonal", "x and y are not mutually B-J orthogonal");
  if (!mutual(cod, Tx, v.coords))
    throw precondition_error("v_mutually_orthogonal", "v and Tx are not mutually B-J orthogonal");

  const auto fx = canonical_norming(dom, x.coords, tol);
  const auto H = detail::kernel_basis({fx.coords}, dom.dim());
  for (const auto& h : H) {
    const double nh = norm(dom, h);
    if (norm(cod, T.apply(h)) > 1e-7 * std::max(1.0, nh))
      throw precondition_error("kernel_structure",
                               "T does not annihilate the hyperplane orthogonal to x");
  }

  Step3Certificate cert{x, y, v, 0.0, 0.0, 0.0, {}, LinearOperator::zero(dom, cod)};
  cert.r = norm(dom, detail::add_scaled(x.coords, 1.0, y.coords));
  if (!(cert.r > 1.0 + 1e-9 && cert.r < 2.0 - 1e-9))
    throw precondition_error("r_in_range", "||x + y|| = " + std::to_string(cert.r) +
                                               " must lie strictly inside (1, 2)");
  // Place (1 - t)(1 + ||T||) at half the upper bound so the eps bracket is
  // comfortably nonempty, and take eps at its midpoint.
  const double upper = (2.0 - cert.r) / (1.0 + 2.0 * cert.r);
  cert.t = 1.0 - upper / (2.0 * (1.0 + nT));
  cert.eps = 0.5 * ((1.0 - cert.t) * (1.0 + nT) + upper);

  cert.w = detail::add_scaled(detail::scaled(Tx, 1.0 - cert.t), cert.t, v.coords);

  const auto fy = canonical_norming(dom, y.coords, tol);
  const auto Hy = detail::kernel_basis({fx.coords, fy.coords}, dom.dim());
  if (static_cast<int>(Hy.size()) != dom.dim() - 2)
    throw numeric_failure("unexpected kernel dimension in the step-3 construction");

  // Solve for the operator sending x -> v, y -> w, Hy -> 0.
  const int n = dom.dim();
  std::vector<double> B(static_cast<std::size_t>(n * n));
  for (int r = 0; r < n; ++r) {
    B[static_cast<std::size_t>(r * n + 0)] = x.coords[static_cast<std::size_t>(r)];
    B[static_cast<std::size_t>(r * n + 1)] = y.coords[static_cast<std::size_t>(r)];
    for (int c = 2; c < n; ++c)
      B[static_cast<std::size_t>(r * n + c)] = Hy[static_cast<std::size_t>(c - 2)][static_cast<std::size_t>(r)];
  }
  for (int j = 0; j < n; ++j) {
    std::vector<double> ej(static_cast<std::size_t>(n), 0.0);
    ej[static_cast<std::size_t>(j)] = 1.0;
    const auto coef = linalg::solve(B, ej, n);  // e_j = coef0 x + coef1 y + ...
    for (int r = 0; r < cod.dim(); ++r)
      cert.A.at(r, j) = coef[0] * v.coords[static_cast<std::size_t>(r)] + coef[1] * cert.w[static_cast<std::size_t>(r)];
  }

  // The chain of inequalities the construction promises, re-checked on the
  // produced numbers.
  const double wv = norm(cod, detail::add_scaled(cert.w, -1.0, v.coords));
  if (!(wv <= (1.0 - cert.t) * (1.0 + nT) + 1e-12 && wv < cert.eps))
    throw inconsistency_error("step3: ||w - v|| exceeds its bound");
  if (!((1.0 - cert.t) * (1.0 + nT) < cert.eps && cert.eps < upper))
    throw inconsistency_error("step3: the (t, eps) bracket is violated");
  auto mid = detail::add_scaled(x.coords, 1.0, y.coords);
  for (auto& c : mid) c /= cert.r;
  if (!(norm(cod, cert.A.apply(mid)) > 1.0 + 2.0 * cert.eps))
    throw inconsistency_error("step3: ||A((x+y)/r)|| fails to exceed 1 + 2 eps");
  const auto fwd = op_bj_orthogonal_numeric(T, cert.A, tol);
  if (!fwd.orthogonal) throw inconsistency_error("step3: T is not orthogonal to the witness");
  const auto rev = op_bj_orthogonal_numeric(cert.A, T, tol);
  const double scale = std::max(1.0, operator_norm(cert.A, tol).value);
  if (rev.orthogonal || rev.margin <= tol.witness_margin_factor * tol.numeric_orth * scale)
    throw inconsistency_error("step3: the witness fails to refute reverse orthogonality");
  return cert;
}

/// Executable form of the minus-cone lemma: with v B u in a strictly convex
/// space, w = (1-t) u + t v and ab > 0, the vector a u must escape the minus
/// cone of a v + b w. Returns true when it does.
inline bool check_minus_cone_lemma(const SpaceDescriptor& s, std::span<const double> u,
                                   std::span<const double> v, double a, double b, double t,
                                   const Tolerances& tol = Tolerances::defaults()) {
  if (!s.strictly_convex())
    throw precondition_error("strictly_convex", "the lemma needs a strictly convex space");
  if (!(t > 0.0 && t < 1.0)) throw precondition_error("t_range", "t must lie in (0, 1)");
  if (!(a * b > 0.0)) throw precondition_error("ab_positive", "the lemma is silent unless ab > 0");
  if (!bj_orthogonal(s, v, u, OrthMethod::analytic, tol).orthogonal)
    throw precondition_error("v_orthogonal_u", "hypothesis v B u does not hold");
  const auto w = detail::add_scaled(detail::scaled(u, 1.0 - t), t, v);
  const auto z = detail::add_scaled(detail::scaled(v, a), b, w);
  const auto au = detail::scaled(u, a);
  return !in_cone(s, z, au, ConeSign::minus, 0.0, tol);
}

// ---------------------------------------------------------------------------
// Operator-level symmetry falsifiers

inline OperatorSymmetryReport falsify_left_symmetric_op(const LinearOperator& T, int budget,
                                                        std::uint64_t seed,
                                                        const Tolerances& tol = Tolerances::defaults()) {
  if (T.is_zero()) throw input_error("left symmetry of the zero operator is trivial; T must be nonzero");
  OperatorSymmetryReport report{T,       Direction::left, SymmetryVerdict::symmetric_within_budget,
                                std::nullopt, "",          0,
                                seed,    tol.numeric_orth};
  const auto& dom = T.domain;
  const auto& cod = T.codomain;
  const double nT = operator_norm(T, tol).value;
  const auto att = norm_attainment_set(T, tol.attainment, tol);
  std::vector<std::vector<double>> x_pool;
  for (std::size_t i = 0; i < att.points.size(); i += 2) x_pool.push_back(att.points[i]);
  Rng rng(seed);

  // S1: for y B x with T y != 0, the rank-one operator f(.) T y built from a
  // norming functional f of y vanishing on x satisfies T B A by construction;
  // refute A B T numerically.
  const int s1_budget = budget / 2;
  int zero_ty = 0, nonzero_ty = 0;
  std::vector<std::vector<double>> u_stream;
  for (int i = 0; i < dom.dim(); ++i) u_stream.push_back(detail::unit_coordinate(dom.dim(), i));
  while (report.trials_used < s1_budget) {
    const auto& x = x_pool[static_cast<std::size_t>(report.trials_used) % x_pool.size()];
    std::vector<double> u;
    if (static_cast<std::size_t>(report.trials_used) < u_stream.size())
      u = u_stream[static_cast<std::size_t>(report.trials_used)];
    else
      u = rng.normal_vector(dom.dim());
    ++report.trials_used;
    const auto [alo, ahi] = left_companion_interval(dom, x, u, tol);
    double a = 0.5 * (alo + ahi);
    const int which = report.trials_used % 4;
    if (which == 1) a = alo;
    if (which == 2) a = ahi;
    if (which == 3) a = rng.uniform(alo, ahi);
    auto y = detail::add_scaled(u, a, x);
    const double ny = norm(dom, y);
    if (ny <= 1e-9) continue;
    for (auto& c : y) c /= ny;
    if (!bj_orthogonal(dom, y, x, OrthMethod::analytic, tol).orthogonal) continue;
    const auto Ty = T.apply(y);
    // Companion-shifted candidates carry O(slack) contamination along T's
    // range; images below the zero_direction scale count as annihilated.
    if (norm(cod, Ty) <= tol.zero_direction * nT) {
      ++zero_ty;
      continue;
    }
    ++nonzero_ty;
    Functional f = norming_member_with_value(dom, y, x, 0.0, tol);
    const auto A = rank_one(f, VectorInSpace(cod, Ty));
    if (detail::op_forward_holds_reverse_fails(T, A, tol)) {
      report.verdict = SymmetryVerdict::not_symmetric;
      report.witness = A;
      report.strategy = "S1";
      return report;
    }
  }

  // S2: every sampled y B x had T y = 0, which is the rank-one kernel
  // structure the step-3 construction needs. The attainment point is taken
  // from the rank-one decomposition (exact), not from the ascent sample.
  if (nonzero_ty == 0 && zero_ty >= std::min(8, s1_budget) && dom.strictly_convex() && dom.smooth() &&
      dom.kind() == SpaceKind::lp && detail::is_rank_one(T, tol.rank_one)) {
    try {
      const auto Tn = scaled(T, 1.0 / nT);
      const auto [g, tau] = detail::rank_one_split(Tn);
      const auto x = detail::unit_vector_normed_by(dom, g);
      const auto fx = canonical_norming(dom, x, tol);
      const auto H = detail::kernel_basis({fx.coords}, dom.dim());
      const auto y = detail::mutual_partner_in_subspace(dom, x, H, seed ^ 0xABCDULL, tol);
      if (y) {
        const auto Tx = Tn.apply(x);
        const auto v = detail::mutual_partner(cod, Tx, seed ^ 0xDCBAULL, tol);
        if (v) {
          const auto cert = construct_step3_witness(
              Tn, VectorInSpace(dom, x), VectorInSpace(dom, *y), VectorInSpace(cod, *v), tol);
          ++report.trials_used;
          report.verdict = SymmetryVerdict::not_symmetric;
          report.witness = cert.A;
          report.strategy = "S2";
          return report;
        }
      }
    } catch (const error&) {
      // fall through to S3
    }
  }

  // S3: random operators companion-shifted along T so the forward relation
  // T B A holds, then the reverse is tested. The one-sided derivatives of
  // t -> ||T + t A0|| come from the attainment sample (max rule).
  while (report.trials_used < budget) {
    ++report.trials_used;
    std::vector<double> m(static_cast<std::size_t>(dom.dim() * cod.dim()));
    for (auto& e : m) e = rng.normal();
    LinearOperator A0(dom, cod, std::move(m));
    double dplus = -kInf, dminus = kInf;
    for (const auto& p : att.points) {
      const auto Tp = T.apply(p);
      const auto Ap = A0.apply(p);
      const auto [lo, hi] = one_sided_derivatives(cod, Tp, Ap, tol);
      dplus = std::max(dplus, hi);
      dminus = std::min(dminus, lo);
    }
    const double clo = -dplus / nT, chi = -dminus / nT;
    double c = 0.5 * (clo + chi);
    const int which = report.trials_used % 4;
    if (which == 1) c = clo;
    if (which == 2) c = chi;
    if (which == 3) c = rng.uniform(clo, chi);
    const auto A = add_scaled(A0, c, T);
    if (detail::op_forward_holds_reverse_fails(T, A, tol)) {
      report.verdict = SymmetryVerdict::not_symmetric;
      report.witness = A;
      report.strategy = "S3";
      return report;
    }
  }
  return report;
}

inline OperatorSymmetryReport falsify_right_symmetric_op(const LinearOperator& T, int budget,
                                                         std::uint64_t seed,
                                                         const Tolerances& tol = Tolerances::defaults()) {
  if (T.is_zero()) throw input_error("right symmetry of the zero operator is trivial; T must be nonzero");
  OperatorSymmetryReport report{T,       Direction::right, SymmetryVerdict::symmetric_within_budget,
                                std::nullopt, "",           0,
                                seed,    tol.numeric_orth};
  const auto& dom = T.domain;
  const auto& cod = T.codomain;

  // R1: a nontrivial kernel forces I B T; when T B I fails, the identity
  // itself is the witness.
  if (dom == cod) {
    const int n = dom.dim();
    if (linalg::rank(T.entries, n, n, 1e-9) < n) {
      ++report.trials_used;
      const auto I = LinearOperator::identity(dom, cod);
      if (op_bj_orthogonal_numeric(I, T, tol).orthogonal &&
          detail::op_forward_holds_reverse_fails(I, T, tol)) {
        report.verdict = SymmetryVerdict::not_symmetric;
        report.witness = I;
        report.strategy = "R1";
        return report;
      }
    }
  }

  const auto att = norm_attainment_set(T, tol.attainment, tol);

  // R2: a two-point attainment set {±x} reduces the operator question to the
  // point question at T x. A point witness y lifts to A(a x + h) = a y.
  if (!att.entire_sphere && att.points.size() == 2) {
    const auto& x = att.points.front();
    const auto Tx = T.apply(x);
    const auto pr = point_right_symmetric(cod, Tx, std::max(8, budget / 4), seed ^ 0x5151ULL, tol);
    report.trials_used += pr.trials_used;
    if (pr.verdict == SymmetryVerdict::not_symmetric) {
      const auto fx = canonical_norming(dom, x, tol);
      const auto A = rank_one(fx, *pr.witness);
      if (detail::op_forward_holds_reverse_fails(A, T, tol)) {
        report.verdict = SymmetryVerdict::not_symmetric;
        report.witness = A;
        report.strategy = "R2";
        return report;
      }
    }
  }

  // R3: random operators shifted to the foot of the minimum along T, so that
  // A B T holds by construction; T B A is then tested.
  Rng rng(seed);
  OperatorNormEvaluator eval(tol);
  while (report.trials_used < budget) {
    ++report.trials_used;
    std::vector<double> m(static_cast<std::size_t>(dom.dim() * cod.dim()));
    for (auto& e : m) e = rng.normal();
    LinearOperator A0(dom, cod, std::move(m));
    const double nA0 = operator_norm(A0, tol).value;
    const double nT = operator_norm(T, tol).value;
    if (nA0 == 0.0) continue;
    const double bracket = 2.0 * nA0 / nT;
    auto res = golden_min([&](double mu) { return eval(add_scaled(A0, mu, T)); }, -bracket, bracket,
                          tol.line_search_rel, 120);
    const auto A = add_scaled(A0, res.argmin, T);
    if (detail::op_forward_holds_reverse_fails(A, T, tol)) {
      report.verdict = SymmetryVerdict::not_symmetric;
      report.witness = A;
      report.strategy = "R3";
      return report;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Left-symmetry classifiers

enum class LeftSymmetryClass { yes, no, zero_operator };

inline std::string to_string(LeftSymmetryClass c) {
  switch (c) {
    case LeftSymmetryClass::yes: return "yes";
    case LeftSymmetryClass::no: return "no";
    default: return "zero-operator";
  }
}

/// Verdict of the structural left-symmetry classifiers. `yes` ships the
/// certificate (f, w, active index); `no` names the first failed condition
/// and, when that condition is the point-level one, attaches the report.
struct ClassifierVerdict {
  LeftSymmetryClass result = LeftSymmetryClass::no;
  std::optional<Functional> f;
  std::optional<VectorInSpace> w;
  int active_index = -1;
  std::string violation;
  std::optional<PointSymmetryReport> point_report;
};

/// Left-symmetry classifier for operators out of an l1 domain: T must be
/// rank one with a signed coordinate functional and a left-symmetric
/// direction in the codomain.
inline ClassifierVerdict classify_left_symmetric_from_l1(const LinearOperator& T, int budget,
                                                         std::uint64_t seed,
                                                         const Tolerances& tol = Tolerances::defaults()) {
  if (T.domain.kind() != SpaceKind::lp || T.domain.p() != 1.0)
    throw unsupported_space_error("classifier requires an l1 domain");
  if (!T.codomain.smooth())
    throw precondition_error("codomain_smooth", "classifier requires a smooth codomain");
  ClassifierVerdict verdict;
  if (T.is_zero()) {
    verdict.result = LeftSymmetryClass::zero_operator;
    return verdict;
  }
  if (!detail::is_rank_one(T, tol.rank_one)) {
    verdict.violation = "rank greater than one";
    return verdict;
  }
  auto [f, w] = detail::rank_one_split(T);
  // f now has unit sup norm; a left-symmetric operator needs all of its mass
  // on one coordinate.
  int active = -1, support = 0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (std::abs(f[i]) > 1e-9) {
      ++support;
      active = static_cast<int>(i);
    }
  if (support != 1 || std::abs(std::abs(f[static_cast<std::size_t>(active)]) - 1.0) > 1e-9) {
    verdict.violation = "f not a signed coordinate functional";
    return verdict;
  }
  const auto pr = point_left_symmetric(T.codomain, w, budget, seed, tol);
  if (pr.verdict == SymmetryVerdict::not_symmetric) {
    verdict.violation = "w not left symmetric";
    verdict.point_report = pr;
    return verdict;
  }
  verdict.result = LeftSymmetryClass::yes;
  verdict.f = Functional(T.domain, std::move(f));
  verdict.w = VectorInSpace(T.codomain, std::move(w));
  verdict.active_index = active;
  return verdict;
}

/// Left-symmetry classifier for operators out of X sum1 R: rank one, the
/// functional must vanish on the X block, and the direction must be left
/// symmetric in the codomain.
inline ClassifierVerdict classify_left_symmetric_direct_sum(const LinearOperator& T, int budget,
                                                            std::uint64_t seed,
                                                            const Tolerances& tol = Tolerances::defaults()) {
  if (T.domain.kind() != SpaceKind::sum1 || T.domain.right().dim() != 1)
    throw unsupported_space_error("classifier requires a domain of the form X sum1 R");
  if (!T.codomain.smooth())
    throw precondition_error("codomain_smooth", "classifier requires a smooth codomain");
  ClassifierVerdict verdict;
  if (T.is_zero()) {
    verdict.result = LeftSymmetryClass::zero_operator;
    return verdict;
  }
  const double nT = operator_norm(T, tol).value;
  const double n_last = norm(T.codomain, T.column(T.cols() - 1));
  if (n_last < nT * (1.0 - tol.attainment))
    throw precondition_error("norm_attained_at_scalar_slot",
                             "||T|| must equal ||T(0,1)|| after normalization");
  if (!detail::is_rank_one(T, tol.rank_one)) {
    verdict.violation = "rank greater than one";
    return verdict;
  }
  const int dl = T.domain.left().dim();
  const double scale = T.max_abs_entry();
  for (int c = 0; c < dl; ++c)
    for (int r = 0; r < T.rows(); ++r)
      if (std::abs(T.at(r, c)) > 1e-9 * scale) {
        verdict.violation = "X not contained in ker f";
        return verdict;
      }
  auto [f, w] = detail::rank_one_split(T);
  const auto pr = point_left_symmetric(T.codomain, w, budget, seed, tol);
  if (pr.verdict == SymmetryVerdict::not_symmetric) {
    verdict.violation = "w not left symmetric";
    verdict.point_report = pr;
    return verdict;
  }
  verdict.result = LeftSymmetryClass::yes;
  verdict.f = Functional(T.domain, std::move(f));
  verdict.w = VectorInSpace(T.codomain, std::move(w));
  verdict.active_index = T.cols() - 1;
  return verdict;
}

// ---------------------------------------------------------------------------
// Section-3 instance checks

/// For an operator whose norm is attained as an eigenvalue magnitude and
/// whose kernel is nontrivial, right symmetry must fail; the expected witness
/// is the identity.
struct SpectralInstanceReport {
  bool passed = false;
  int nullity = 0;
  double matched_eigenvalue = 0.0;
  OperatorSymmetryReport falsifier;
};

inline SpectralInstanceReport spectral_instance_test(const LinearOperator& T, int budget,
                                                     std::uint64_t seed,
                                                     const Tolerances& tol = Tolerances::defaults()) {
  if (T.domain != T.codomain)
    throw precondition_error("endomorphism", "spectral test requires domain = codomain");
  const int n = T.domain.dim();
  const double nT = operator_norm(T, tol).value;
  const auto eigs = linalg::eigenvalues(T.entries, n);
  double matched = 0.0;
  bool found = false;
  for (const auto& e : eigs)
    if (std::abs(std::abs(e) - nT) <= 1e-7 * std::max(1.0, nT)) {
      matched = std::abs(e);
      found = true;
    }
  if (!found)
    throw precondition_error("spectral_value", "||T|| does not match any eigenvalue magnitude");
  const int nullity = n - linalg::rank(T.entries, n, n, 1e-9);
  if (nullity < 1) throw precondition_error("nullity", "T must have a nontrivial kernel");
  SpectralInstanceReport out{false, nullity, matched,
                             falsify_right_symmetric_op(T, budget, seed, tol)};
  out.passed = out.falsifier.verdict == SymmetryVerdict::not_symmetric;
  return out;
}

/// Two-dimensional strictly convex domains: a two-point attainment set must
/// make the right-symmetry falsifier succeed; four or more attainment points
/// must contain a linearly independent pair.
struct Dim2ExtremeReport {
  bool passed = false;
  bool entire_sphere = false;
  int attainment_card = 0;
  std::optional<OperatorSymmetryReport> falsifier;
  std::optional<std::pair<VectorInSpace, VectorInSpace>> independent_pair;
};

inline Dim2ExtremeReport dim2_extreme_check(const LinearOperator& T, int budget, std::uint64_t seed,
                                            const Tolerances& tol = Tolerances::defaults()) {
  if (T.domain.dim() != 2)
    throw precondition_error("dim2", "check requires a two-dimensional domain");
  if (!T.domain.strictly_convex())
    throw precondition_error("domain_strictly_convex", "domain must be strictly convex");
  if (!T.codomain.strictly_convex() || !T.codomain.smooth())
    throw precondition_error("codomain_geometry", "codomain must be strictly convex and smooth");
  Dim2ExtremeReport out;
  const auto att = norm_attainment_set(T, tol.attainment, tol);
  out.entire_sphere = att.entire_sphere;
  out.attainment_card = static_cast<int>(att.points.size());
  auto independent = [&]() -> std::optional<std::pair<VectorInSpace, VectorInSpace>> {
    for (std::size_t i = 0; i < att.points.size(); ++i)
      for (std::size_t j = i + 1; j < att.points.size(); ++j) {
        const auto& a = att.points[i];
        const auto& b = att.points[j];
        const double det = a[0] * b[1] - a[1] * b[0];
        if (std::abs(det) > 1e-9)
          return std::make_pair(VectorInSpace(T.domain, a), VectorInSpace(T.domain, b));
      }
    return std::nullopt;
  };
  if (att.entire_sphere || att.points.size() >= 4) {
    out.independent_pair = independent();
    out.passed = out.independent_pair.has_value();
    return out;
  }
  out.falsifier = falsify_right_symmetric_op(T, budget, seed, tol);
  out.passed = out.falsifier->verdict == SymmetryVerdict::not_symmetric;
  return out;
}

}  // namespace bj
