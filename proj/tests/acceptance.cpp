// Acceptance suite: one line per criterion, every tolerance pinned in code.
// Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "bj/bj.hpp"
#include "oracles.hpp"

using namespace bj;

namespace {

int g_failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int index, const std::string& name, bool pass, const std::string& detail, double secs) {
  std::printf("[%s] criterion %2d: %s — %s (%.1f s)\n", pass ? "PASS" : "FAIL", index, name.c_str(),
              detail.c_str(), secs);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::vector<double> unit(const SpaceDescriptor& s, Rng& rng) {
  for (;;) {
    auto v = rng.normal_vector(s.dim());
    const double n = norm(s, v);
    if (n < 1e-9) continue;
    for (auto& c : v) c /= n;
    return v;
  }
}

LinearOperator random_op(const SpaceDescriptor& dom, const SpaceDescriptor& cod, Rng& rng) {
  std::vector<double> m(static_cast<std::size_t>(dom.dim() * cod.dim()));
  for (auto& v : m) v = rng.normal();
  return LinearOperator(dom, cod, std::move(m));
}

std::vector<SpaceDescriptor> agreement_families() {
  std::vector<SpaceDescriptor> fams;
  for (int n : {2, 3, 5})
    for (double p : {1.0, 1.5, 2.0, 3.0, kInf}) fams.push_back(SpaceDescriptor::lp(p, n));
  return fams;
}

// 1. analytic/numeric verdict agreement: 1000 pairs per family, 0 mismatches.
void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  long total = 0, agreed = 0;
  for (const auto& s : agreement_families()) {
    Rng rng(101);
    for (int t = 0; t < 1000; ++t) {
      const auto x = unit(s, rng);
      const auto y = unit(s, rng);
      ++total;
      try {
        (void)bj_orthogonal(s, x, y, OrthMethod::both);  // throws on disagreement
        ++agreed;
      } catch (const orthogonality_disagreement&) {
      }
    }
  }
  const double secs = seconds_since(t0);
  report(1, "analytic/numeric agreement", agreed == total && secs < 30.0,
         std::to_string(agreed) + "/" + std::to_string(total) + " pairs agree, runtime bound 30 s",
         secs);
}

// 2. l2 verdicts equal inner-product orthogonality; orthogonality is
// symmetric in every orthogonal case.
void criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = l2(3);
  Rng rng(202);
  long match = 0, orth_cases = 0, symmetric = 0;
  const int total = 1000;
  for (int t = 0; t < total; ++t) {
    const auto x = unit(s, rng);
    auto y = unit(s, rng);
    if (t % 2 == 0) {
      const double d = pairing(x, y);
      for (std::size_t k = 0; k < y.size(); ++k) y[k] -= d * x[k];
      const double n = norm(s, y);
      if (n < 1e-9) continue;
      for (auto& c : y) c /= n;
    }
    const bool verdict = bj_orthogonal(s, x, y, OrthMethod::both).orthogonal;
    const bool inner = std::abs(pairing(x, y)) <= 1e-9 * norm(s, x) * norm(s, y);
    if (verdict == inner) ++match;
    if (verdict) {
      ++orth_cases;
      if (bj_orthogonal(s, y, x, OrthMethod::both).orthogonal) ++symmetric;
    }
  }
  report(2, "l2 inner-product equivalence and symmetry",
         match == total && orth_cases > 0 && symmetric == orth_cases,
         std::to_string(match) + "/" + std::to_string(total) + " match, " +
             std::to_string(symmetric) + "/" + std::to_string(orth_cases) + " orthogonal cases symmetric",
         seconds_since(t0));
}

// 3. definitional vs attainment-set operator orthogonality, 500 pairs per
// family, 0 disagreements beyond tolerance, under 5 minutes. A split whose
// margin sits inside the tolerance band around the decision threshold is the
// knife edge the two routes share, not a route inconsistency.
void criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::pair<SpaceDescriptor, SpaceDescriptor>> fams;
  for (double p : {1.5, 2.0, 3.0})
    for (double q : {1.5, 2.0, 3.0}) fams.emplace_back(SpaceDescriptor::lp(p, 3), SpaceDescriptor::lp(q, 3));
  fams.emplace_back(l1(3), l2(3));
  long total = 0, agreed = 0, marginal = 0;
  for (const auto& [dom, cod] : fams) {
    Rng rng(303);
    for (int t = 0; t < 500; ++t) {
      const auto T = random_op(dom, cod, rng);
      const auto A = random_op(dom, cod, rng);
      if (T.is_zero()) continue;
      ++total;
      const auto direct = op_bj_orthogonal_numeric(T, A);
      const bool via_mt = op_bj_orthogonal_via_mt(T, A).orthogonal;
      if (direct.orthogonal == via_mt) {
        ++agreed;
      } else {
        const double band = 1e-7 * std::max(1.0, operator_norm(T).value);
        if (direct.margin > 0.1 * band && direct.margin < 10.0 * band)
          ++marginal;
      }
    }
  }
  const double secs = seconds_since(t0);
  report(3, "operator orthogonality route agreement",
         agreed + marginal == total && secs < 300.0,
         std::to_string(agreed) + "/" + std::to_string(total) + " pairs agree, " +
             std::to_string(marginal) + " marginal at the threshold, runtime bound 300 s",
         secs);
}

// 4. every nonzero operator between strictly convex spaces loses left
// symmetry, witness re-verified on the lambda grid, under 10 minutes.
void criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> ps{1.5, 2.0, 3.0};
  Rng rng(404);
  int found = 0;
  const int total = 100;
  for (int t = 0; t < total; ++t) {
    const auto dom = SpaceDescriptor::lp(ps[static_cast<std::size_t>(t) % 3], 3);
    const auto cod = SpaceDescriptor::lp(ps[static_cast<std::size_t>(t / 3) % 3], 3);
    const auto T = random_op(dom, cod, rng);
    if (T.is_zero()) continue;
    const auto rep = falsify_left_symmetric_op(T, 500, 404 + static_cast<std::uint64_t>(t));
    if (rep.verdict != SymmetryVerdict::not_symmetric) continue;
    const auto& A = *rep.witness;
    const double nT = operator_norm(T).value;
    const double nA = operator_norm(A).value;
    const auto fwd = oracle::op_grid_min(T, A, 401);
    const auto rev = oracle::op_grid_min(A, T, 401);
    if (fwd.value >= nT - 1e-6 * std::max(1.0, nT) &&
        nA - rev.value > 10.0 * 1e-7 * std::max(1.0, nA))
      ++found;
  }
  const double secs = seconds_since(t0);
  report(4, "left-symmetry falsifier with verified witnesses", found == total && secs < 600.0,
         std::to_string(found) + "/" + std::to_string(total) + " witnesses verified, runtime bound 600 s",
         secs);
}

// 5. l1-domain classification in both directions against the falsifier.
void criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto dom = l1(3);
  const auto cod = l2(3);
  Rng rng(505);
  int part_a = 0, part_b = 0;
  for (int t = 0; t < 20; ++t) {
    std::vector<double> f(3, 0.0);
    f[static_cast<std::size_t>(rng.uniform_int(0, 2))] = rng.u01() < 0.5 ? -1.0 : 1.0;
    const auto T = rank_one(Functional(dom, f), VectorInSpace(cod, unit(cod, rng)));
    const auto cls = classify_left_symmetric_from_l1(T, 500, 505 + static_cast<std::uint64_t>(t));
    const auto fal = falsify_left_symmetric_op(T, 500, 909 + static_cast<std::uint64_t>(t));
    if (cls.result == LeftSymmetryClass::yes && fal.verdict == SymmetryVerdict::symmetric_within_budget)
      ++part_a;
  }
  for (int t = 0; t < 20; ++t) {
    std::vector<double> f(3, 0.0);
    const int active = 2 + (t % 2);
    for (int k = 0; k < active; ++k) f[static_cast<std::size_t>(k)] = rng.uniform(0.3, 1.0) * (rng.u01() < 0.5 ? -1.0 : 1.0);
    const double nf = dual_norm(dom, f);
    for (auto& c : f) c /= nf;
    const auto T = rank_one(Functional(dom, f), VectorInSpace(cod, unit(cod, rng)));
    const auto cls = classify_left_symmetric_from_l1(T, 500, 606 + static_cast<std::uint64_t>(t));
    const auto fal = falsify_left_symmetric_op(T, 500, 707 + static_cast<std::uint64_t>(t));
    bool ok = cls.result == LeftSymmetryClass::no && fal.verdict == SymmetryVerdict::not_symmetric;
    if (ok) {
      const auto& A = *fal.witness;
      const double nA = operator_norm(A).value;
      const auto fwd = oracle::op_grid_min(T, A, 401);
      const auto rev = oracle::op_grid_min(A, T, 401);
      const double nT = operator_norm(T).value;
      ok = fwd.value >= nT - 1e-6 * std::max(1.0, nT) &&
           nA - rev.value > 10.0 * 1e-7 * std::max(1.0, nA);
    }
    if (ok) ++part_b;
  }
  report(5, "l1 rank-one classification both directions", part_a == 20 && part_b == 20,
         "certified " + std::to_string(part_a) + "/20 inconclusive-and-yes, refuted " +
             std::to_string(part_b) + "/20 with verified witnesses",
         seconds_since(t0));
}

// 6. the minus-cone exclusion on 1000 strictly convex instances.
void criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(606);
  int held = 0, total = 0;
  while (total < 1000) {
    const auto s = total % 2 == 0 ? l2(3) : SpaceDescriptor::lp(3.0, 3);
    const auto u = unit(s, rng);
    auto v = unit(s, rng);
    const double a0 = james_left_companion(s, u, v);
    v = oracle::axpy(v, a0, u);
    const double nv = norm(s, v);
    if (nv < 1e-9) continue;
    for (auto& c : v) c /= nv;
    const double sign = rng.u01() < 0.5 ? -1.0 : 1.0;
    const double a = sign * rng.uniform(0.1, 3.0);
    const double b = sign * rng.uniform(0.1, 3.0);
    const double t = rng.uniform(0.05, 0.95);
    ++total;
    if (check_minus_cone_lemma(s, u, v, a, b, t)) ++held;
  }
  report(6, "minus-cone exclusion", held == total,
         std::to_string(held) + "/" + std::to_string(total) + " instances", seconds_since(t0));
}

// 7. singular operators: the identity is orthogonal to T, and a refuted
// reverse makes the falsifier name the identity.
void criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(707);
  int id_orth = 0, falsifier_consistent = 0, refuted_cases = 0;
  const int total = 200;
  for (int t = 0; t < total; ++t) {
    const double p = std::vector<double>{1.5, 2.0, 3.0}[static_cast<std::size_t>(t % 3)];
    const auto s = SpaceDescriptor::lp(p, 3);
    auto T = random_op(s, s, rng);
    const double c0 = rng.normal(), c1 = rng.normal();
    for (int r = 0; r < 3; ++r) T.at(r, 2) = c0 * T.at(r, 0) + c1 * T.at(r, 1);
    const auto I = LinearOperator::identity(s, s);
    const auto fwd = op_bj_orthogonal_numeric(I, T);
    if (fwd.min_value >= 1.0 - 1e-9) ++id_orth;
    const auto rev = op_bj_orthogonal_numeric(T, I);
    if (!rev.orthogonal) {
      ++refuted_cases;
      const auto rep = falsify_right_symmetric_op(T, 500, 808 + static_cast<std::uint64_t>(t));
      if (rep.verdict == SymmetryVerdict::not_symmetric && rep.strategy == "R1" &&
          rep.witness->entries == I.entries)
        ++falsifier_consistent;
    }
  }
  report(7, "identity orthogonal to singular operators",
         id_orth == total && falsifier_consistent == refuted_cases && refuted_cases > 0,
         std::to_string(id_orth) + "/" + std::to_string(total) + " I-orthogonality, " +
             std::to_string(falsifier_consistent) + "/" + std::to_string(refuted_cases) +
             " identity witnesses",
         seconds_since(t0));
}

// 8. the rank-one embedding is isometric and preserves orthogonality in both
// directions.
void criterion8() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::pair<SpaceDescriptor, SpaceDescriptor>> fams{
      {SpaceDescriptor::lp(3.0, 3), l2(3)},
      {l1(3), SpaceDescriptor::lp(1.5, 3)},
      {l2(3), SpaceDescriptor::lp(3.0, 3)}};
  Rng rng(808);
  int isometric = 0;
  const int iso_total = 200;
  for (int t = 0; t < iso_total; ++t) {
    const auto& [X, Y] = fams[static_cast<std::size_t>(t) % fams.size()];
    const auto f = canonical_norming(X, unit(X, rng));
    const auto y = rng.normal_vector(Y.dim());
    const auto Ay = embed_gamma(f, VectorInSpace(Y, y));
    if (std::abs(operator_norm(Ay).value - norm(Y, y)) <= 1e-9 * (1.0 + norm(Y, y))) ++isometric;
  }
  int match = 0;
  const int pair_total = 500;
  for (int t = 0; t < pair_total; ++t) {
    const auto& [X, Y] = fams[static_cast<std::size_t>(t) % fams.size()];
    const auto f = canonical_norming(X, unit(X, rng));
    const auto z = unit(Y, rng);
    auto w = unit(Y, rng);
    if (t % 3 == 0) {
      const double b = james_right_companion(Y, z, w);
      w = oracle::axpy(w, b, z);  // plant orthogonal pairs in the sample
      const double nw = norm(Y, w);
      if (nw < 1e-9) continue;
      for (auto& c : w) c /= nw;
    }
    const auto Az = embed_gamma(f, VectorInSpace(Y, z));
    const auto Aw = embed_gamma(f, VectorInSpace(Y, w));
    if (op_bj_orthogonal_numeric(Az, Aw).orthogonal ==
        bj_orthogonal(Y, z, w, OrthMethod::numeric).orthogonal)
      ++match;
  }
  report(8, "rank-one slice embedding",
         isometric == iso_total && match == pair_total,
         std::to_string(isometric) + "/" + std::to_string(iso_total) + " isometric, " +
             std::to_string(match) + "/" + std::to_string(pair_total) + " orthogonality matches",
         seconds_since(t0));
}

// 9. the counterexample constructor on 20 kernel-structured rank-ones.
void criterion9() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto dom = SpaceDescriptor::lp(3.0, 3);
  const auto cod = l2(3);
  Rng rng(909);
  int good = 0;
  const int total = 20;
  for (int t = 0; t < total; ++t) {
    // T = f_x(.) tau is unit-norm with attainment at x and kernel = ker f_x.
    const auto x = unit(dom, rng);
    const auto tau = unit(cod, rng);
    const auto fx = canonical_norming(dom, x);
    const auto T = rank_one(fx, VectorInSpace(cod, tau));
    const auto H = bj::detail::kernel_basis({fx.coords}, dom.dim());
    const auto y = bj::detail::mutual_partner_in_subspace(dom, x, H, 909 + static_cast<std::uint64_t>(t),
                                                          Tolerances::defaults());
    const auto v = bj::detail::mutual_partner(cod, tau, 111 + static_cast<std::uint64_t>(t),
                                              Tolerances::defaults());
    if (!y || !v) continue;
    try {
      const auto cert = construct_step3_witness(T, VectorInSpace(dom, x), VectorInSpace(dom, *y),
                                                VectorInSpace(cod, *v));
      bool ok = cert.r > 1.0 && cert.r < 2.0;
      const double lower = (1.0 - cert.t) * 2.0;  // (1 - t)(1 + ||T||) with ||T|| = 1
      const double upper = (2.0 - cert.r) / (1.0 + 2.0 * cert.r);
      ok = ok && lower < cert.eps && cert.eps < upper;
      ok = ok && norm(cod, oracle::axpy(cert.w, -1.0, *v)) <= lower + 1e-12;
      const auto fwd = op_bj_orthogonal_numeric(T, cert.A);
      ok = ok && fwd.orthogonal;
      const auto rev = op_bj_orthogonal_numeric(cert.A, T);
      const double nA = operator_norm(cert.A).value;
      ok = ok && !rev.orthogonal && rev.margin > 10.0 * 1e-7 * std::max(1.0, nA);
      if (ok) ++good;
    } catch (const error&) {
    }
  }
  report(9, "step-3 counterexample constructor", good == total,
         std::to_string(good) + "/" + std::to_string(total) + " certificates verified",
         seconds_since(t0));
}

// 10. one-sided derivatives against finite differences, 500 instances with
// forced sign-pattern cases.
void criterion10() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto fams = agreement_families();
  Rng rng(1010);
  int ok = 0;
  const int total = 500;
  for (int t = 0; t < total; ++t) {
    const auto& s = fams[static_cast<std::size_t>(t) % fams.size()];
    auto x = unit(s, rng);
    if (t % 3 == 0 && s.dim() >= 2) {
      if (s.p() == 1.0) {
        x[0] = 0.0;  // exact zero coordinate: box freedom
      } else if (std::isinf(s.p())) {
        x[1] = x[0];  // tied maxima: simplex freedom
      }
      const double n = norm(s, x);
      if (n < 1e-9) continue;
      for (auto& c : x) c /= n;
    }
    const auto y = unit(s, rng);
    const auto [dm, dp] = one_sided_derivatives(s, x, y);
    const auto [om, op] = oracle::fd_one_sided(s, x, y);
    if (std::abs(dm - om) <= 1e-5 && std::abs(dp - op) <= 1e-5) ++ok;
  }
  report(10, "derivative oracle", ok == total,
         std::to_string(ok) + "/" + std::to_string(total) + " finite-difference matches",
         seconds_since(t0));
}

// 11. companion residuals and uniqueness.
void criterion11() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto fams = agreement_families();
  Rng rng(1111);
  int residual_ok = 0, unique_ok = 0, unique_total = 0;
  const int total = 500;
  for (int t = 0; t < total; ++t) {
    const auto& s = fams[static_cast<std::size_t>(t) % fams.size()];
    const auto x = unit(s, rng);
    const auto y = unit(s, rng);
    const double a = james_left_companion(s, x, y);
    const double b = james_right_companion(s, x, y);
    const auto ya = oracle::axpy(y, a, x);
    const auto yb = oracle::axpy(y, b, x);
    bool ok = true;
    try {
      ok = bj_orthogonal(s, ya, x, OrthMethod::both).orthogonal &&
           bj_orthogonal(s, x, yb, OrthMethod::both).orthogonal;
    } catch (const orthogonality_disagreement&) {
      ok = false;
    }
    if (ok) ++residual_ok;
    if (s.smooth() && s.strictly_convex()) {
      ++unique_total;
      const auto [rlo, rhi] = right_companion_interval(s, x, y);
      const auto [llo, lhi] = left_companion_interval(s, x, y);
      if (rhi - rlo <= 1e-6 && lhi - llo <= 1e-6) ++unique_ok;
    }
  }
  report(11, "companion residuals and uniqueness",
         residual_ok == total && unique_ok == unique_total && unique_total > 0,
         std::to_string(residual_ok) + "/" + std::to_string(total) + " residuals, " +
             std::to_string(unique_ok) + "/" + std::to_string(unique_total) + " uniqueness",
         seconds_since(t0));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  std::printf("%s: %d criterion(s) failed (total %.1f s)\n", g_failures == 0 ? "OK" : "FAILED",
              g_failures, seconds_since(t0));
  return g_failures == 0 ? 0 : 1;
}
