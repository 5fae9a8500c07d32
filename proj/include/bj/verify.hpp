#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bj/json_io.hpp"
#include "bj/operators.hpp"
#include "bj/orthogonality.hpp"
#include "bj/rng.hpp"
#include "bj/space.hpp"
#include "bj/symmetry.hpp"

namespace bj {

/// Configuration of a theorem-verification suite run.
struct TheoremConfig {
  std::uint64_t seed = 7;
  int trials = 0;  // 0 = suite default
  int budget = 300;
  std::vector<std::pair<SpaceDescriptor, SpaceDescriptor>> operator_families;  // empty = defaults
  std::vector<SpaceDescriptor> vector_spaces;                                  // empty = defaults
  Tolerances tol = Tolerances::defaults();
};

enum class TrialStatus { ok, inconclusive, failed };

inline std::string to_string(TrialStatus s) {
  switch (s) {
    case TrialStatus::ok: return "ok";
    case TrialStatus::inconclusive: return "inconclusive";
    default: return "failed";
  }
}

struct TrialOutcome {
  int index = 0;
  TrialStatus status = TrialStatus::ok;
  std::string detail;
};

/// Suite outcome. `pass` means every trial was conclusive and none failed;
/// budget-bounded "no witness found" outcomes are carried as inconclusive and
/// are never treated as confirmation of a universally quantified claim.
struct TheoremReport {
  std::string theorem;
  std::uint64_t seed = 0;
  int budget = 0;
  std::vector<TrialOutcome> trials;
  nlohmann::json witnesses = nlohmann::json::array();
  int failed = 0;
  int inconclusive = 0;
  bool pass = false;

  void add(TrialStatus status, std::string detail) {
    trials.push_back({static_cast<int>(trials.size()), status, std::move(detail)});
    if (status == TrialStatus::failed) ++failed;
    if (status == TrialStatus::inconclusive) ++inconclusive;
  }
  void witness(nlohmann::json w) {
    if (witnesses.size() < 24) witnesses.push_back(std::move(w));
  }
  void finish() { pass = failed == 0 && inconclusive == 0; }
};

inline std::vector<std::string> theorem_ids() {
  return {"prop-2.1", "th-2.2", "th-2.3", "lemma-2.5", "th-2.6",  "gamma-2.11", "th-2.13",
          "th-2.14",  "th-3.1", "prop-3.2", "th-3.3",  "th-3.4",  "th-3.5"};
}

namespace detail {

inline std::vector<SpaceDescriptor> default_vector_spaces() {
  return {l1(3), SpaceDescriptor::lp(1.5, 3), l2(3), SpaceDescriptor::lp(3.0, 3), linf(3)};
}

inline std::vector<std::pair<SpaceDescriptor, SpaceDescriptor>> default_operator_families() {
  std::vector<std::pair<SpaceDescriptor, SpaceDescriptor>> fams;
  for (double p : {1.5, 2.0, 3.0})
    for (double q : {1.5, 2.0, 3.0})
      fams.emplace_back(SpaceDescriptor::lp(p, 3), SpaceDescriptor::lp(q, 3));
  fams.emplace_back(l1(3), l2(3));
  return fams;
}

inline LinearOperator random_operator(const SpaceDescriptor& dom, const SpaceDescriptor& cod, Rng& rng) {
  std::vector<double> m(static_cast<std::size_t>(dom.dim() * cod.dim()));
  for (auto& v : m) v = rng.normal();
  return LinearOperator(dom, cod, std::move(m));
}

inline std::vector<double> random_unit(const SpaceDescriptor& s, Rng& rng) {
  for (;;) {
    auto v = rng.normal_vector(s.dim());
    const double n = norm(s, v);
    if (n < 1e-12) continue;
    for (auto& c : v) c /= n;
    return v;
  }
}

}  // namespace detail

inline TheoremReport verify_theorem(const std::string& id, const TheoremConfig& cfg) {
  TheoremReport report;
  report.theorem = id;
  report.seed = cfg.seed;
  report.budget = cfg.budget;
  const auto& tol = cfg.tol;
  auto spaces = cfg.vector_spaces.empty() ? detail::default_vector_spaces() : cfg.vector_spaces;
  auto families =
      cfg.operator_families.empty() ? detail::default_operator_families() : cfg.operator_families;
  std::uint64_t trial_counter = 0;
  auto next_rng = [&]() { return Rng::for_trial(cfg.seed, trial_counter++); };

  if (id == "prop-2.1") {
    // Consistency of point symmetry with smoothness and strict convexity:
    // (i) right symmetric + smooth may never coexist with a left witness;
    // (ii,iii) in strictly convex spaces a left-symmetric-looking point may
    // not carry a right witness or fail smoothness.
    const int trials = cfg.trials > 0 ? cfg.trials : 6;
    for (const auto& s : spaces) {
      for (int t = 0; t < trials; ++t) {
        auto rng = next_rng();
        const auto x = detail::random_unit(s, rng);
        const bool smooth = is_smooth_point(s, x, tol).smooth;
        const auto left = point_left_symmetric(s, x, cfg.budget, cfg.seed + t, tol);
        const auto right = point_right_symmetric(s, x, cfg.budget, cfg.seed + 7919 + t, tol);
        const bool left_witness = left.verdict == SymmetryVerdict::not_symmetric;
        const bool right_witness = right.verdict == SymmetryVerdict::not_symmetric;
        if (!right_witness && smooth && left_witness) {
          report.add(TrialStatus::failed, s.to_string() + ": right-symmetric smooth point has a left witness");
          report.witness(io::to_json(left));
          continue;
        }
        if (s.strictly_convex() && !left_witness && right_witness) {
          report.add(TrialStatus::failed, s.to_string() + ": left-symmetric point in a strictly convex space has a right witness");
          report.witness(io::to_json(right));
          continue;
        }
        if (s.strictly_convex() && !left_witness && !smooth) {
          report.add(TrialStatus::failed, s.to_string() + ": left-symmetric point in a strictly convex space is not smooth");
          continue;
        }
        report.add(TrialStatus::ok, s.to_string());
      }
    }
  } else if (id == "th-2.2") {
    // The definitional operator test and the attainment-set characterization
    // must agree.
    const int trials = cfg.trials > 0 ? cfg.trials : 40;
    for (const auto& [dom, cod] : families) {
      for (int t = 0; t < trials; ++t) {
        auto rng = next_rng();
        const auto T = detail::random_operator(dom, cod, rng);
        const auto A = detail::random_operator(dom, cod, rng);
        if (T.is_zero()) continue;
        const auto direct = op_bj_orthogonal_numeric(T, A, tol);
        const auto via_mt = op_bj_orthogonal_via_mt(T, A, tol);
        if (direct.orthogonal == via_mt.orthogonal) {
          report.add(TrialStatus::ok, dom.to_string() + "->" + cod.to_string());
        } else {
          // Splits inside the tolerance band around the threshold are the
          // shared knife edge of the two routes, not disagreements.
          const double band = tol.numeric_orth * std::max(1.0, operator_norm(T, tol).value);
          if (direct.margin > 0.1 * band && direct.margin < 10.0 * band) {
            report.add(TrialStatus::ok, dom.to_string() + "->" + cod.to_string() + ": marginal split at the threshold");
          } else {
            report.add(TrialStatus::failed,
                       dom.to_string() + "->" + cod.to_string() + ": verdicts disagree (margin " +
                           std::to_string(direct.margin) + ")");
            report.witness(nlohmann::json{{"T", io::to_json(T)}, {"A", io::to_json(A)}});
          }
        }
      }
    }
  } else if (id == "th-2.3") {
    // For y B x at an attainment point with T y != 0, the rank-one operator
    // built from a norming functional of y vanishing on x must be orthogonal
    // to by T (soundness) and generically refutes reverse orthogonality.
    const int trials = cfg.trials > 0 ? cfg.trials : 20;
    for (const auto& [dom, cod] : families) {
      if (!dom.strictly_convex() || !dom.smooth()) continue;
      for (int t = 0; t < trials; ++t) {
        auto rng = next_rng();
        const auto T = detail::random_operator(dom, cod, rng);
        if (T.is_zero()) continue;
        const double nT = operator_norm(T, tol).value;
        const auto att = norm_attainment_set(T, tol.attainment, tol);
        const auto& x = att.points.front();
        bool sound = true, refuted = false, saw_nonzero = false;
        for (int k = 0; k < 30 && !refuted; ++k) {
          const auto u = rng.normal_vector(dom.dim());
          const double a = james_left_companion(dom, x, u, tol);
          auto y = detail::add_scaled(u, a, x);
          const double ny = norm(dom, y);
          if (ny <= 1e-9) continue;
          for (auto& c : y) c /= ny;
          const auto Ty = T.apply(y);
          if (norm(cod, Ty) <= 1e-9 * nT) continue;
          saw_nonzero = true;
          const auto f = norming_member_with_value(dom, y, x, 0.0, tol);
          const auto A = rank_one(f, VectorInSpace(cod, Ty));
          if (!op_bj_orthogonal_numeric(T, A, tol).orthogonal) {
            sound = false;
            break;
          }
          if (detail::op_forward_holds_reverse_fails(T, A, tol)) refuted = true;
        }
        if (!sound)
          report.add(TrialStatus::failed, dom.to_string() + ": constructed operator not orthogonal to by T");
        else if (!saw_nonzero)
          report.add(TrialStatus::ok, dom.to_string() + ": all companions annihilated (rank-one kernel)");
        else if (refuted)
          report.add(TrialStatus::ok, dom.to_string());
        else
          report.add(TrialStatus::inconclusive, dom.to_string() + ": no reverse refutation within sample");
      }
    }
  } else if (id == "lemma-2.5") {
    const int trials = cfg.trials > 0 ? cfg.trials : 300;
    std::vector<SpaceDescriptor> convex;
    for (const auto& s : spaces)
      if (s.strictly_convex()) convex.push_back(s);
    if (convex.empty()) convex = {l2(3), SpaceDescriptor::lp(3.0, 3)};
    for (int t = 0; t < trials; ++t) {
      auto rng = next_rng();
      const auto& s = convex[static_cast<std::size_t>(t) % convex.size()];
      const auto u = detail::random_unit(s, rng);
      auto v = detail::random_unit(s, rng);
      const double a0 = james_left_companion(s, u, v, tol);
      v = detail::add_scaled(v, a0, u);  // now v B u
      const double nv = norm(s, v);
      if (nv <= 1e-9) {
        report.add(TrialStatus::ok, "degenerate draw skipped");
        continue;
      }
      for (auto& c : v) c /= nv;
      const double sign = rng.u01() < 0.5 ? -1.0 : 1.0;
      const double a = sign * rng.uniform(0.1, 3.0);
      const double b = sign * rng.uniform(0.1, 3.0);
      const double tt = rng.uniform(0.05, 0.95);
      if (check_minus_cone_lemma(s, u, v, a, b, tt, tol))
        report.add(TrialStatus::ok, s.to_string());
      else {
        report.add(TrialStatus::failed, s.to_string() + ": minus-cone conclusion violated");
        report.witness(nlohmann::json{{"u", u}, {"v", v}, {"a", a}, {"b", b}, {"t", tt}});
      }
    }
  } else if (id == "th-2.6") {
    // Between strictly convex spaces every nonzero operator must yield a
    // verified left-symmetry witness.
    const int trials = cfg.trials > 0 ? cfg.trials : 8;
    for (const auto& [dom, cod] : families) {
      if (!dom.strictly_convex() || !cod.strictly_convex()) continue;
      for (int t = 0; t < trials; ++t) {
        auto rng = next_rng();
        const auto T = detail::random_operator(dom, cod, rng);
        if (T.is_zero()) continue;
        const auto rep = falsify_left_symmetric_op(T, cfg.budget, cfg.seed + t, tol);
        if (rep.verdict == SymmetryVerdict::not_symmetric) {
          report.add(TrialStatus::ok, dom.to_string() + "->" + cod.to_string() + " via " + rep.strategy);
          report.witness(io::to_json(rep));
        } else {
          report.add(TrialStatus::inconclusive,
                     dom.to_string() + "->" + cod.to_string() + ": no witness within budget");
        }
      }
    }
  } else if (id == "gamma-2.11") {
    // The embedding y -> f(.) y is isometric and preserves orthogonality in
    // both directions.
    const int trials = cfg.trials > 0 ? cfg.trials : 30;
    for (const auto& [dom, cod] : families) {
      for (int t = 0; t < trials; ++t) {
        auto rng = next_rng();
        const auto f = canonical_norming(dom, detail::random_unit(dom, rng), tol);
        const auto y = detail::random_unit(cod, rng);
        const auto Ay = embed_gamma(f, VectorInSpace(cod, y), tol);
        const double gap = std::abs(operator_norm(Ay, tol).value - norm(cod, y));
        if (gap > 1e-9) {
          report.add(TrialStatus::failed, "embedding not isometric, gap " + std::to_string(gap));
          continue;
        }
        const auto z = detail::random_unit(cod, rng);
        const auto w = detail::random_unit(cod, rng);
        const auto Az = embed_gamma(f, VectorInSpace(cod, z), tol);
        const auto Aw = embed_gamma(f, VectorInSpace(cod, w), tol);
        const bool op_orth = op_bj_orthogonal_numeric(Az, Aw, tol).orthogonal;
        const bool vec_orth = bj_orthogonal(cod, z, w, OrthMethod::numeric, tol).orthogonal;
        if (op_orth != vec_orth) {
          report.add(TrialStatus::failed, "orthogonality not preserved by the embedding");
          report.witness(nlohmann::json{{"z", z}, {"w", w}, {"f", f.coords}});
        } else {
          report.add(TrialStatus::ok, dom.to_string() + "->" + cod.to_string());
        }
      }
    }
  } else if (id == "th-2.13") {
    // Operators out of X sum1 R: the three certificate conditions against the
    // classifier and the falsifier.
    const int trials = cfg.trials > 0 ? cfg.trials : 5;
    const auto X = l2(2);
    const auto D = SpaceDescriptor::sum1(X, l2(1));
    for (int t = 0; t < trials; ++t) {
      auto rng = next_rng();
      // Positive instance: T(x, s) = s w with w left symmetric in l2.
      {
        const auto Y = l2(2);
        const auto w = detail::random_unit(Y, rng);
        std::vector<double> f(static_cast<std::size_t>(D.dim()), 0.0);
        f.back() = 1.0;
        const auto T = rank_one(Functional(D, f), VectorInSpace(Y, w));
        const auto cls = classify_left_symmetric_direct_sum(T, cfg.budget, cfg.seed + t, tol);
        const auto fal = falsify_left_symmetric_op(T, cfg.budget, cfg.seed + 31 + t, tol);
        if (cls.result != LeftSymmetryClass::yes)
          report.add(TrialStatus::failed, "positive instance misclassified: " + cls.violation);
        else if (fal.verdict == SymmetryVerdict::not_symmetric) {
          report.add(TrialStatus::failed, "falsifier found a witness against a certified operator");
          report.witness(io::to_json(fal));
        } else
          report.add(TrialStatus::ok, "positive instance");
      }
      // Negative instance: the functional leaks onto the X block.
      {
        const auto Y = l2(2);
        const auto w = detail::random_unit(Y, rng);
        std::vector<double> f(static_cast<std::size_t>(D.dim()), 0.0);
        f[0] = 0.1;
        f.back() = 1.0;
        const auto T = rank_one(Functional(D, f), VectorInSpace(Y, w));
        const auto cls = classify_left_symmetric_direct_sum(T, cfg.budget, cfg.seed + 61 + t, tol);
        const auto fal = falsify_left_symmetric_op(T, cfg.budget, cfg.seed + 97 + t, tol);
        if (cls.result != LeftSymmetryClass::no || cls.violation != "X not contained in ker f")
          report.add(TrialStatus::failed, "kernel violation not detected");
        else if (fal.verdict != SymmetryVerdict::not_symmetric)
          report.add(TrialStatus::inconclusive, "negative instance: no falsifier witness within budget");
        else
          report.add(TrialStatus::ok, "negative instance (ker f)");
      }
      // Negative instance: w not left symmetric in l3.
      {
        const auto Y = SpaceDescriptor::lp(3.0, 2);
        std::vector<double> w{2.0, 1.0};
        const double nw = norm(Y, w);
        for (auto& c : w) c /= nw;
        std::vector<double> f(static_cast<std::size_t>(D.dim()), 0.0);
        f.back() = 1.0;
        const auto T = rank_one(Functional(D, f), VectorInSpace(Y, w));
        const auto cls = classify_left_symmetric_direct_sum(T, cfg.budget, cfg.seed + 151 + t, tol);
        const auto fal = falsify_left_symmetric_op(T, cfg.budget, cfg.seed + 181 + t, tol);
        if (cls.result != LeftSymmetryClass::no || cls.violation != "w not left symmetric")
          report.add(TrialStatus::failed, "non-symmetric direction not detected");
        else if (fal.verdict != SymmetryVerdict::not_symmetric)
          report.add(TrialStatus::inconclusive, "negative instance: no falsifier witness within budget");
        else
          report.add(TrialStatus::ok, "negative instance (w)");
      }
    }
  } else if (id == "th-2.14") {
    // l1 domains: signed coordinate functionals with left-symmetric
    // directions are certified and witness-free; anything else is refuted.
    const int trials = cfg.trials > 0 ? cfg.trials : 10;
    const auto dom = l1(3);
    const auto cod = l2(3);
    for (int t = 0; t < trials; ++t) {
      auto rng = next_rng();
      {
        std::vector<double> f(3, 0.0);
        f[static_cast<std::size_t>(rng.uniform_int(0, 2))] = rng.u01() < 0.5 ? -1.0 : 1.0;
        const auto w = detail::random_unit(cod, rng);
        const auto T = rank_one(Functional(dom, f), VectorInSpace(cod, w));
        const auto cls = classify_left_symmetric_from_l1(T, cfg.budget, cfg.seed + t, tol);
        const auto fal = falsify_left_symmetric_op(T, cfg.budget, cfg.seed + 211 + t, tol);
        if (cls.result != LeftSymmetryClass::yes)
          report.add(TrialStatus::failed, "certified instance misclassified: " + cls.violation);
        else if (fal.verdict == SymmetryVerdict::not_symmetric) {
          report.add(TrialStatus::failed, "falsifier found a witness against a certified operator");
          report.witness(io::to_json(fal));
        } else
          report.add(TrialStatus::ok, "coordinate-functional instance");
      }
      {
        std::vector<double> f{rng.uniform(0.3, 1.0), rng.uniform(0.3, 1.0), 0.0};
        if (rng.u01() < 0.5) f[2] = rng.uniform(0.3, 1.0);
        const double nf = dual_norm(dom, f);
        for (auto& c : f) c /= nf;
        const auto w = detail::random_unit(cod, rng);
        const auto T = rank_one(Functional(dom, f), VectorInSpace(cod, w));
        const auto cls = classify_left_symmetric_from_l1(T, cfg.budget, cfg.seed + 241 + t, tol);
        const auto fal = falsify_left_symmetric_op(T, cfg.budget, cfg.seed + 271 + t, tol);
        if (cls.result != LeftSymmetryClass::no)
          report.add(TrialStatus::failed, "spread functional not rejected");
        else if (fal.verdict != SymmetryVerdict::not_symmetric)
          report.add(TrialStatus::inconclusive, "spread functional: no falsifier witness within budget");
        else {
          report.add(TrialStatus::ok, "spread-functional instance via " + fal.strategy);
          report.witness(io::to_json(fal));
        }
      }
    }
  } else if (id == "th-3.1") {
    // Smooth operators (two-point attainment) between strictly convex smooth
    // spaces cannot be right symmetric.
    const int trials = cfg.trials > 0 ? cfg.trials : 8;
    for (const auto& [dom, cod] : families) {
      if (!dom.strictly_convex() || !cod.strictly_convex() || !cod.smooth()) continue;
      for (int t = 0; t < trials; ++t) {
        auto rng = next_rng();
        const auto T = detail::random_operator(dom, cod, rng);
        if (T.is_zero()) continue;
        const auto att = norm_attainment_set(T, tol.attainment, tol);
        if (att.entire_sphere || att.points.size() != 2) {
          report.add(TrialStatus::ok, "skip: attainment set not two-point");
          continue;
        }
        const auto rep = falsify_right_symmetric_op(T, cfg.budget, cfg.seed + t, tol);
        if (rep.verdict == SymmetryVerdict::not_symmetric)
          report.add(TrialStatus::ok, dom.to_string() + "->" + cod.to_string() + " via " + rep.strategy);
        else
          report.add(TrialStatus::inconclusive, "no right-symmetry witness within budget");
      }
    }
  } else if (id == "prop-3.2") {
    // Contrapositive: two-point attainment and a non-right-symmetric image
    // direction force a right-symmetry witness for the operator.
    const int trials = cfg.trials > 0 ? cfg.trials : 10;
    const auto dom = SpaceDescriptor::lp(3.0, 3);
    const auto cod = SpaceDescriptor::lp(3.0, 3);
    for (int t = 0; t < trials; ++t) {
      auto rng = next_rng();
      const auto x = detail::random_unit(dom, rng);
      const auto tau = detail::random_unit(cod, rng);
      const auto pr = point_right_symmetric(cod, tau, cfg.budget, cfg.seed + t, tol);
      if (pr.verdict != SymmetryVerdict::not_symmetric) {
        report.add(TrialStatus::ok, "image direction right-symmetric within budget; nothing to check");
        continue;
      }
      const auto T = rank_one(canonical_norming(dom, x, tol), VectorInSpace(cod, tau));
      const auto rep = falsify_right_symmetric_op(T, cfg.budget, cfg.seed + 331 + t, tol);
      if (rep.verdict == SymmetryVerdict::not_symmetric) {
        report.add(TrialStatus::ok, "operator witness via " + rep.strategy);
      } else {
        report.add(TrialStatus::inconclusive, "point witness exists but no operator witness found");
      }
    }
  } else if (id == "th-3.3") {
    const int trials = cfg.trials > 0 ? cfg.trials : 8;
    std::vector<std::pair<SpaceDescriptor, SpaceDescriptor>> fams;
    for (double p : {1.5, 2.0, 3.0})
      for (double q : {1.5, 2.0, 3.0}) fams.emplace_back(SpaceDescriptor::lp(p, 2), SpaceDescriptor::lp(q, 2));
    for (const auto& [dom, cod] : fams) {
      for (int t = 0; t < trials; ++t) {
        auto rng = next_rng();
        const auto T = detail::random_operator(dom, cod, rng);
        if (T.is_zero()) continue;
        const auto rep = dim2_extreme_check(T, cfg.budget, cfg.seed + t, tol);
        if (rep.passed)
          report.add(TrialStatus::ok, dom.to_string() + "->" + cod.to_string());
        else if (rep.falsifier && rep.falsifier->verdict == SymmetryVerdict::symmetric_within_budget)
          report.add(TrialStatus::inconclusive, "two-point attainment but no witness within budget");
        else
          report.add(TrialStatus::failed, "no independent attainment pair found");
      }
    }
  } else if (id == "th-3.4") {
    // Diagonal instances whose norm is an eigenvalue and whose kernel is
    // nontrivial must lose right symmetry, with the identity as witness.
    const int trials = cfg.trials > 0 ? cfg.trials : 12;
    for (double p : {1.5, 2.0, 3.0}) {
      const auto s = SpaceDescriptor::lp(p, 3);
      for (int t = 0; t < trials; ++t) {
        auto rng = next_rng();
        auto T = LinearOperator::zero(s, s);
        T.at(0, 0) = rng.uniform(0.5, 2.0) * (rng.u01() < 0.5 ? -1.0 : 1.0);
        T.at(1, 1) = rng.uniform(0.0, 0.9) * std::abs(T.at(0, 0));
        const auto rep = spectral_instance_test(T, cfg.budget, cfg.seed + t, tol);
        if (rep.passed) {
          report.add(TrialStatus::ok, s.to_string() + " via " + rep.falsifier.strategy);
        } else {
          report.add(TrialStatus::inconclusive, "no right-symmetry witness within budget");
        }
      }
    }
  } else if (id == "th-3.5") {
    // Singular operators: the identity is orthogonal to T; a refuted reverse
    // makes the falsifier report the identity witness.
    const int trials = cfg.trials > 0 ? cfg.trials : 30;
    for (int t = 0; t < trials; ++t) {
      auto rng = next_rng();
      const double p = std::vector<double>{1.5, 2.0, 3.0}[static_cast<std::size_t>(t % 3)];
      const auto s = SpaceDescriptor::lp(p, 3);
      auto T = detail::random_operator(s, s, rng);
      const double c0 = rng.normal(), c1 = rng.normal();
      for (int r = 0; r < 3; ++r) T.at(r, 2) = c0 * T.at(r, 0) + c1 * T.at(r, 1);
      const auto I = LinearOperator::identity(s, s);
      const auto fwd = op_bj_orthogonal_numeric(I, T, cfg.tol);
      if (fwd.min_value < 1.0 - 1e-9) {
        report.add(TrialStatus::failed, "I is not orthogonal to a singular T (min " +
                                            std::to_string(fwd.min_value) + ")");
        report.witness(io::to_json(T));
        continue;
      }
      const auto rev = op_bj_orthogonal_numeric(T, I, cfg.tol);
      if (rev.orthogonal) {
        report.add(TrialStatus::ok, "T orthogonal to I; the theorem's first branch");
        continue;
      }
      const auto rep = falsify_right_symmetric_op(T, cfg.budget, cfg.seed + t, cfg.tol);
      if (rep.verdict == SymmetryVerdict::not_symmetric)
        report.add(TrialStatus::ok, s.to_string() + " witness via " + rep.strategy);
      else
        report.add(TrialStatus::failed, "reverse refuted but falsifier found no witness");
    }
  } else {
    throw input_error("unknown theorem id: " + id);
  }
  report.finish();
  return report;
}

inline nlohmann::json report_to_json(const TheoremReport& r, const TheoremConfig& cfg) {
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& t : r.trials)
    trials.push_back({{"index", t.index}, {"status", to_string(t.status)}, {"detail", t.detail}});
  nlohmann::json fams = nlohmann::json::array();
  for (const auto& [dom, cod] : cfg.operator_families)
    fams.push_back(io::selector_string(dom) + "->" + io::selector_string(cod));
  nlohmann::json spaces = nlohmann::json::array();
  for (const auto& s : cfg.vector_spaces) spaces.push_back(io::selector_string(s));
  return nlohmann::json{{"theorem", r.theorem},
                        {"config", {{"seed", cfg.seed},
                                    {"trials", cfg.trials},
                                    {"budget", cfg.budget},
                                    {"operator_families", fams},
                                    {"vector_spaces", spaces}}},
                        {"trials", trials},
                        {"witnesses", r.witnesses},
                        {"pass", r.pass},
                        {"failed", r.failed},
                        {"inconclusive", r.inconclusive},
                        {"tolerances", cfg.tol.as_map()},
                        {"seed", r.seed}};
}

}  // namespace bj
