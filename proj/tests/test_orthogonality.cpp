#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "bj/bj.hpp"
#include "oracles.hpp"

using namespace bj;

namespace {
const std::vector<SpaceDescriptor> kFamilies{l1(2),  l1(3),  SpaceDescriptor::lp(1.5, 3),
                                             l2(2),  l2(3),  SpaceDescriptor::lp(3.0, 2),
                                             linf(2), linf(3)};

std::vector<double> unit(const SpaceDescriptor& s, Rng& rng) {
  for (;;) {
    auto v = rng.normal_vector(s.dim());
    const double n = norm(s, v);
    if (n < 1e-9) continue;
    for (auto& c : v) c /= n;
    return v;
  }
}
}  // namespace

TEST_CASE("one-sided derivatives: frozen values against finite differences") {
  {
    const std::vector<double> x{1.0, 0.0}, y{0.0, 1.0};
    const auto [dm, dp] = one_sided_derivatives(l2(2), x, y);
    CHECK(dm == Catch::Approx(0.0).margin(1e-12));
    CHECK(dp == Catch::Approx(0.0).margin(1e-12));
  }
  {
    const std::vector<double> x{1.0, 0.0}, y{0.5, 1.0};
    const auto [dm, dp] = one_sided_derivatives(l1(2), x, y);
    CHECK(dm == Catch::Approx(-0.5).margin(1e-12));
    CHECK(dp == Catch::Approx(1.5).margin(1e-12));
    const auto [om, op] = oracle::fd_one_sided(l1(2), x, y);
    CHECK(dm == Catch::Approx(om).margin(1e-5));
    CHECK(dp == Catch::Approx(op).margin(1e-5));
  }
  {
    const std::vector<double> x{1.0, 1.0}, y{1.0, -1.0};
    const auto [dm, dp] = one_sided_derivatives(linf(2), x, y);
    CHECK(dm == Catch::Approx(-1.0).margin(1e-12));
    CHECK(dp == Catch::Approx(1.0).margin(1e-12));
  }
  CHECK_THROWS_AS(one_sided_derivatives(l2(2), std::vector<double>{0.0, 0.0}, std::vector<double>{1.0, 0.0}),
                  input_error);
}

TEST_CASE("one-sided derivatives match finite differences on random instances") {
  int checked = 0;
  Rng rng(2024);
  while (checked < 500) {
    const auto& s = kFamilies[static_cast<std::size_t>(checked) % kFamilies.size()];
    const auto x = unit(s, rng);
    const auto y = unit(s, rng);
    const auto [dm, dp] = one_sided_derivatives(s, x, y);
    const auto [om, op] = oracle::fd_one_sided(s, x, y);
    CHECK(dm == Catch::Approx(om).margin(1e-5));
    CHECK(dp == Catch::Approx(op).margin(1e-5));
    CHECK(dm <= dp + 1e-12);
    ++checked;
  }
}

TEST_CASE("one-sided derivatives on 1-sums, including vanished parts") {
  const auto s = SpaceDescriptor::sum1(l2(2), l2(1));
  Rng rng(77);
  for (int t = 0; t < 100; ++t) {
    auto x = unit(s, rng);
    if (t % 3 == 0) x[2] = 0.0;  // kill the scalar slot
    if (norm(s, x) == 0.0) continue;
    const auto y = unit(s, rng);
    const auto [dm, dp] = one_sided_derivatives(s, x, y);
    const auto [om, op] = oracle::fd_one_sided(s, x, y);
    CHECK(dm == Catch::Approx(om).margin(1e-5));
    CHECK(dp == Catch::Approx(op).margin(1e-5));
  }
}

TEST_CASE("bj_orthogonal frozen examples") {
  const std::vector<double> e1{1.0, 0.0}, e2{0.0, 1.0};
  CHECK(bj_orthogonal(l2(2), e1, e2, OrthMethod::both).orthogonal);

  const std::vector<double> x{1.0, 0.0}, y{0.5, 1.0};
  CHECK(bj_orthogonal(l1(2), x, y, OrthMethod::both).orthogonal);
  CHECK(oracle::grid_orthogonal(l1(2), x, y));
  const auto rev = bj_orthogonal(l1(2), y, x, OrthMethod::both);
  CHECK_FALSE(rev.orthogonal);
  CHECK(rev.minimizer == Catch::Approx(-0.5).margin(1e-3));
  CHECK(rev.min_value == Catch::Approx(1.0).margin(1e-9));
  const auto g = oracle::grid_min(l1(2), y, x, -4.0, 4.0, 1e-4);
  CHECK(rev.min_value == Catch::Approx(g.value).margin(1e-6));

  const auto l32 = SpaceDescriptor::lp(3.0, 2);
  const std::vector<double> a{2.0, 1.0}, b{1.0, -4.0};
  CHECK(bj_orthogonal(l32, a, b, OrthMethod::both).orthogonal);  // duality map (4,1) kills (1,-4)
  CHECK(oracle::grid_orthogonal(l32, a, b));
  CHECK_FALSE(bj_orthogonal(l32, b, a, OrthMethod::both).orthogonal);
  CHECK_FALSE(oracle::grid_orthogonal(l32, b, a, 1e-4));
}

TEST_CASE("degenerate arguments are orthogonal to everything") {
  const std::vector<double> z{0.0, 0.0}, x{1.0, 2.0};
  for (auto m : {OrthMethod::analytic, OrthMethod::numeric, OrthMethod::both}) {
    CHECK(bj_orthogonal(l2(2), x, z, m).orthogonal);
    CHECK(bj_orthogonal(l2(2), z, x, m).orthogonal);
    CHECK(bj_orthogonal(l2(2), z, z, m).orthogonal);
  }
}

TEST_CASE("analytic and numeric methods agree on random pairs") {
  Rng rng(99);
  for (const auto& s : kFamilies) {
    for (int t = 0; t < 200; ++t) {
      const auto x = unit(s, rng);
      const auto y = unit(s, rng);
      CHECK_NOTHROW(bj_orthogonal(s, x, y, OrthMethod::both));
    }
  }
}

TEST_CASE("verdicts are scaling invariant") {
  Rng rng(7);
  for (const auto& s : kFamilies) {
    for (int t = 0; t < 50; ++t) {
      const auto x = unit(s, rng);
      const auto y = unit(s, rng);
      const double alpha = rng.uniform(0.1, 9.0);
      const double beta = rng.uniform(0.1, 9.0) * (rng.u01() < 0.5 ? -1.0 : 1.0);
      auto ax = x;
      for (auto& c : ax) c *= alpha;
      auto by = y;
      for (auto& c : by) c *= beta;
      CHECK(bj_orthogonal(s, x, y, OrthMethod::analytic).orthogonal ==
            bj_orthogonal(s, ax, by, OrthMethod::analytic).orthogonal);
    }
  }
}

TEST_CASE("l2 verdicts coincide with inner-product orthogonality") {
  Rng rng(55);
  const auto s = l2(3);
  for (int t = 0; t < 1000; ++t) {
    const auto x = unit(s, rng);
    auto y = unit(s, rng);
    if (t % 4 == 0) {
      // project onto the orthogonal complement to hit the boundary case
      const double d = pairing(x, y);
      for (std::size_t k = 0; k < y.size(); ++k) y[k] -= d * x[k];
      if (norm(s, y) < 1e-9) continue;
    }
    const bool verdict = bj_orthogonal(s, x, y, OrthMethod::both).orthogonal;
    const bool inner = std::abs(pairing(x, y)) <= 1e-9 * norm(s, x) * norm(s, y);
    CHECK(verdict == inner);
  }
}

TEST_CASE("norm along a line is midpoint convex") {
  Rng rng(12);
  for (int t = 0; t < 1000; ++t) {
    const auto& s = kFamilies[static_cast<std::size_t>(t) % kFamilies.size()];
    const auto x = unit(s, rng);
    const auto y = unit(s, rng);
    const double l1v = rng.uniform(-3.0, 3.0), l2v = rng.uniform(-3.0, 3.0);
    const double mid = norm(s, oracle::axpy(x, 0.5 * (l1v + l2v), y));
    const double avg = 0.5 * (norm(s, oracle::axpy(x, l1v, y)) + norm(s, oracle::axpy(x, l2v, y)));
    CHECK(mid <= avg + 1e-10);
  }
}

TEST_CASE("cones: frozen examples and the eps=0 conjunction") {
  const std::vector<double> x{1.0, 0.0};
  CHECK(in_cone(l2(2), x, x, ConeSign::plus, 0.0));
  const std::vector<double> mx{-1.0, 0.0};
  CHECK_FALSE(in_cone(l2(2), x, mx, ConeSign::plus, 0.6));  // min over t>=0 of |1-t| = 0 < 0.8
  CHECK_THROWS_AS(in_cone(l2(2), x, mx, ConeSign::plus, 1.0), input_error);
  CHECK_THROWS_AS(in_cone(l2(2), x, mx, ConeSign::plus, -0.1), input_error);

  Rng rng(31);
  for (int t = 0; t < 200; ++t) {
    const auto& s = kFamilies[static_cast<std::size_t>(t) % kFamilies.size()];
    const auto a = unit(s, rng);
    const auto b = unit(s, rng);
    const bool both_cones = in_cone(s, a, b, ConeSign::plus, 0.0) && in_cone(s, a, b, ConeSign::minus, 0.0);
    CHECK(both_cones == bj_orthogonal(s, a, b, OrthMethod::numeric).orthogonal);
  }
}

TEST_CASE("cone membership against the half-line grid oracle") {
  Rng rng(81);
  for (int t = 0; t < 150; ++t) {
    const auto& s = kFamilies[static_cast<std::size_t>(t) % kFamilies.size()];
    const auto x = unit(s, rng);
    const auto y = unit(s, rng);
    const double eps = rng.uniform(0.0, 0.9);
    for (bool plus : {true, false}) {
      const auto g = oracle::grid_min_halfline(s, x, y, plus);
      const double threshold = std::sqrt(1.0 - eps * eps) * norm(s, x);
      if (std::abs(g.value - threshold) < 1e-4) continue;  // skip knife-edge draws
      CHECK(in_cone(s, x, y, plus ? ConeSign::plus : ConeSign::minus, eps) == (g.value >= threshold));
    }
  }
}

TEST_CASE("cone membership is monotone in eps") {
  Rng rng(82);
  for (int t = 0; t < 150; ++t) {
    const auto& s = kFamilies[static_cast<std::size_t>(t) % kFamilies.size()];
    const auto x = unit(s, rng);
    const auto y = unit(s, rng);
    const double e1 = rng.uniform(0.0, 0.5), e2 = e1 + rng.uniform(0.0, 0.45);
    for (auto sign : {ConeSign::plus, ConeSign::minus})
      if (in_cone(s, x, y, sign, e1)) CHECK(in_cone(s, x, y, sign, e2));
  }
}

TEST_CASE("james companions: frozen examples") {
  const std::vector<double> x{1.0, 0.0}, y{1.0, 1.0};
  CHECK(james_left_companion(l2(2), x, y) == Catch::Approx(-1.0).margin(1e-9));
  CHECK(james_right_companion(l2(2), x, y) == Catch::Approx(-1.0).margin(1e-12));

  const std::vector<double> e2v{0.0, 1.0};
  CHECK(james_left_companion(l1(2), x, e2v) == Catch::Approx(0.0).margin(1e-9));

  const auto l32 = SpaceDescriptor::lp(3.0, 2);
  const std::vector<double> a{2.0, 1.0}, b{0.0, 1.0};
  CHECK(james_right_companion(l32, a, b) == Catch::Approx(-1.0 / 9.0).margin(1e-12));

  const std::vector<double> zero{0.0, 0.0};
  CHECK(james_left_companion(l2(2), x, zero) == 0.0);
  CHECK(james_right_companion(l2(2), x, zero) == 0.0);
  CHECK_THROWS_AS(james_left_companion(l2(2), zero, y), input_error);
}

TEST_CASE("companion residuals on random instances") {
  Rng rng(2025);
  int n = 0;
  while (n < 500) {
    const auto& s = kFamilies[static_cast<std::size_t>(n) % kFamilies.size()];
    const auto x = unit(s, rng);
    const auto y = unit(s, rng);
    const double a = james_left_companion(s, x, y);
    const auto ya = oracle::axpy(y, a, x);
    CHECK(bj_orthogonal(s, ya, x, OrthMethod::both).orthogonal);
    const double b = james_right_companion(s, x, y);
    const auto yb = oracle::axpy(y, b, x);
    CHECK(bj_orthogonal(s, x, yb, OrthMethod::both).orthogonal);
    ++n;
  }
}

TEST_CASE("companion uniqueness under smoothness and strict convexity") {
  Rng rng(4096);
  const std::vector<SpaceDescriptor> smooth_convex{SpaceDescriptor::lp(1.5, 3), l2(3),
                                                   SpaceDescriptor::lp(3.0, 2)};
  for (const auto& s : smooth_convex) {
    for (int t = 0; t < 40; ++t) {
      const auto x = unit(s, rng);
      const auto y = unit(s, rng);
      // Right: the valid interval collapses to a point in smooth spaces.
      const auto [rlo, rhi] = right_companion_interval(s, x, y);
      CHECK(rhi - rlo <= 1e-6);
      // Left: two different bracket runs agree in strictly convex spaces.
      const auto [llo, lhi] = left_companion_interval(s, x, y);
      CHECK(lhi - llo <= 1e-6);
      const double mid = james_left_companion(s, x, y);
      CHECK(std::abs(mid - 0.5 * (llo + lhi)) <= 1e-6);
    }
  }
}

TEST_CASE("point left symmetry: frozen witnesses") {
  // Inner-product spaces have no witnesses.
  Rng rng(1);
  const auto x3 = unit(l2(3), rng);
  const auto rep = point_left_symmetric(l2(3), x3, 120, 5);
  CHECK(rep.verdict == SymmetryVerdict::symmetric_within_budget);
  CHECK(rep.trials_used == 120);

  // l3: the duality-map kernel direction witnesses immediately.
  const auto l32 = SpaceDescriptor::lp(3.0, 2);
  const std::vector<double> a{2.0, 1.0};
  const auto rl = point_left_symmetric(l32, a, 200, 5);
  REQUIRE(rl.verdict == SymmetryVerdict::not_symmetric);
  const auto& w = rl.witness->coords;
  CHECK(std::abs(w[0] * (-4.0) - w[1] * 1.0) < 1e-6);  // parallel to (1, -4)
  CHECK(oracle::grid_orthogonal(l32, a, w));
  CHECK_FALSE(oracle::grid_orthogonal(l32, w, a, 1e-4));

  // l1: (1, 0) has witnesses like (0.5, 1).
  const std::vector<double> e1v{1.0, 0.0};
  const auto r1 = point_left_symmetric(l1(2), e1v, 200, 5);
  REQUIRE(r1.verdict == SymmetryVerdict::not_symmetric);
  CHECK(oracle::grid_orthogonal(l1(2), e1v, r1.witness->coords));
  CHECK_FALSE(oracle::grid_orthogonal(l1(2), r1.witness->coords, e1v, 1e-4));

  CHECK_THROWS_AS(point_left_symmetric(l2(2), std::vector<double>{0.0, 0.0}, 10, 1), input_error);
}

TEST_CASE("point right symmetry: frozen witnesses and scale invariance") {
  Rng rng(2);
  const auto x3 = unit(l2(3), rng);
  CHECK(point_right_symmetric(l2(3), x3, 120, 5).verdict == SymmetryVerdict::symmetric_within_budget);

  const std::vector<double> ones{1.0, 1.0};
  const auto r = point_right_symmetric(l1(2), ones, 200, 5);
  REQUIRE(r.verdict == SymmetryVerdict::not_symmetric);
  CHECK(oracle::grid_orthogonal(l1(2), r.witness->coords, ones));
  CHECK_FALSE(oracle::grid_orthogonal(l1(2), ones, r.witness->coords, 1e-4));

  std::vector<double> scaled{5.0, 5.0};
  const auto rs = point_right_symmetric(l1(2), scaled, 200, 5);
  REQUIRE(rs.verdict == r.verdict);
  // same witness direction up to sign
  const auto& w1 = r.witness->coords;
  const auto& w2 = rs.witness->coords;
  const double cross = w1[0] * w2[1] - w1[1] * w2[0];
  CHECK(std::abs(cross) < 1e-9);
}

TEST_CASE("witness reports re-verify decisively") {
  Rng rng(606);
  const std::vector<SpaceDescriptor> spaces{l1(2), l1(3), SpaceDescriptor::lp(3.0, 2), linf(2)};
  for (const auto& s : spaces) {
    for (int t = 0; t < 10; ++t) {
      const auto x = unit(s, rng);
      for (auto dir : {Direction::left, Direction::right}) {
        const auto rep = dir == Direction::left ? point_left_symmetric(s, x, 150, 17 + t)
                                                : point_right_symmetric(s, x, 150, 17 + t);
        if (rep.verdict != SymmetryVerdict::not_symmetric) continue;
        const auto& w = rep.witness->coords;
        const auto& from = dir == Direction::left ? x : w;
        const auto& to = dir == Direction::left ? w : x;
        CHECK(bj_orthogonal(s, from, to, OrthMethod::both).orthogonal);
        const auto reverse = bj_orthogonal(s, to, from, OrthMethod::numeric);
        CHECK_FALSE(reverse.orthogonal);
        CHECK(reverse.margin > 10.0 * reverse.tolerance * std::max(1.0, norm(s, to)));
      }
    }
  }
}

TEST_CASE("mutually orthogonal pairs") {
  const auto l33 = SpaceDescriptor::lp(3.0, 3);
  const auto [x, y] = mutually_orthogonal_pair(l33, 3);
  CHECK(x.coords == std::vector<double>{1.0, 0.0, 0.0});
  CHECK(y.coords == std::vector<double>{0.0, 1.0, 0.0});
  CHECK(oracle::grid_orthogonal(l33, x.coords, y.coords));
  CHECK(oracle::grid_orthogonal(l33, y.coords, x.coords));

  for (const auto& s : {l2(4), l1(2), linf(3), SpaceDescriptor::sum1(l2(2), l2(1))}) {
    const auto [u, v] = mutually_orthogonal_pair(s, 9);
    CHECK(bj_orthogonal(s, u.coords, v.coords, OrthMethod::both).orthogonal);
    CHECK(bj_orthogonal(s, v.coords, u.coords, OrthMethod::both).orthogonal);
  }
  CHECK_THROWS_AS(mutually_orthogonal_pair(l2(1), 1), input_error);
}

TEST_CASE("marginal method splits resolve instead of erroring") {
  // With an absurdly loose numeric tolerance every pair is numerically
  // orthogonal; the split against the analytic verdict stays inside the
  // tolerance gap and must resolve, not throw.
  Tolerances loose;
  loose.numeric_orth = 10.0;
  const std::vector<double> x{1.0, 0.0}, y{1.0, 0.0};
  const auto v = bj_orthogonal(l2(2), x, y, OrthMethod::both, loose);
  CHECK(v.orthogonal);
  CHECK(v.method == OrthMethod::both);

  // A genuinely near-orthogonal pair sits between the default tolerances and
  // must also resolve quietly.
  const std::vector<double> a{1.0, 0.0}, b{2.8e-4, 1.0};
  CHECK_NOTHROW(bj_orthogonal(l2(2), a, b, OrthMethod::both));
}
