#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <vector>

#include "bj/bj.hpp"
#include "oracles.hpp"

using namespace bj;

namespace {
std::vector<SpaceDescriptor> all_families() {
  return {l1(2), l1(3), SpaceDescriptor::lp(1.5, 3), l2(2), l2(3), SpaceDescriptor::lp(3.0, 2),
          SpaceDescriptor::lp(3.0, 3), linf(2), linf(3),
          SpaceDescriptor::sum1(l2(2), l2(1)), SpaceDescriptor::sum1(l1(2), SpaceDescriptor::lp(3.0, 2))};
}
}  // namespace

TEST_CASE("norm evaluates the lp and 1-sum formulas") {
  const std::vector<double> v34{3.0, 4.0};
  CHECK(norm(l2(2), v34) == Catch::Approx(5.0).margin(1e-14));
  const std::vector<double> v123{1.0, -2.0, 3.0};
  CHECK(norm(l1(3), v123) == Catch::Approx(6.0).margin(1e-14));
  const auto sum = SpaceDescriptor::sum1(l2(2), l2(1));
  const std::vector<double> v342{3.0, 4.0, 2.0};
  CHECK(norm(sum, v342) == Catch::Approx(7.0).margin(1e-14));
  CHECK(norm(linf(3), v123) == Catch::Approx(3.0).margin(1e-14));
}

TEST_CASE("norm rejects dimension mismatches") {
  const std::vector<double> v{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(norm(l2(2), v), input_error);
}

TEST_CASE("descriptor validation rejects degenerate exponents and dimensions") {
  CHECK_THROWS_AS(SpaceDescriptor::lp(2.0, 0), input_error);
  CHECK_THROWS_AS(SpaceDescriptor::lp(0.5, 2), input_error);
  CHECK_THROWS_AS(SpaceDescriptor::lp(1.0 + 1e-9, 2), input_error);
  CHECK_THROWS_AS(SpaceDescriptor::lp(2e6, 2), input_error);
  CHECK_NOTHROW(SpaceDescriptor::lp(1.0, 2));
  CHECK_NOTHROW(SpaceDescriptor::lp(kInf, 2));
}

TEST_CASE("geometry flags") {
  CHECK(l2(3).strictly_convex());
  CHECK(l2(3).smooth());
  CHECK_FALSE(l1(2).strictly_convex());
  CHECK_FALSE(linf(2).smooth());
  CHECK(l1(1).strictly_convex());  // a line segment has no flat sphere
  CHECK(l1(1).smooth());
  const auto sum = SpaceDescriptor::sum1(l2(2), l2(1));
  CHECK_FALSE(sum.strictly_convex());
  CHECK_FALSE(sum.smooth());
  CHECK(sum.dim() == 3);
}

TEST_CASE("norm axioms on random inputs") {
  for (const auto& s : all_families()) {
    Rng rng(17);
    for (int t = 0; t < 200; ++t) {
      const auto x = rng.normal_vector(s.dim());
      const auto y = rng.normal_vector(s.dim());
      const double alpha = rng.uniform(-3.0, 3.0);
      auto ax = x;
      for (auto& c : ax) c *= alpha;
      CHECK(norm(s, ax) == Catch::Approx(std::abs(alpha) * norm(s, x)).margin(1e-12 * (1.0 + norm(s, x))));
      const auto xy = oracle::axpy(x, 1.0, y);
      CHECK(norm(s, xy) <= norm(s, x) + norm(s, y) + 1e-12);
    }
  }
}

TEST_CASE("direct-sum norm equals the sum of part norms") {
  const auto sum = SpaceDescriptor::sum1(SpaceDescriptor::lp(3.0, 2), l1(2));
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const auto x = rng.normal_vector(4);
    const std::vector<double> xl(x.begin(), x.begin() + 2), xr(x.begin() + 2, x.end());
    CHECK(std::abs(norm(sum, x) - (norm(SpaceDescriptor::lp(3.0, 2), xl) + norm(l1(2), xr))) < 1e-15 * (1.0 + norm(sum, x)));
  }
}

TEST_CASE("norming functionals are singletons at smooth points") {
  const std::vector<double> x{0.6, 0.8};
  const auto set = norming_functionals(l2(2), x);
  REQUIRE(set.is_singleton());
  CHECK(set.base[0] == Catch::Approx(0.6).margin(1e-12));
  CHECK(set.base[1] == Catch::Approx(0.8).margin(1e-12));
}

TEST_CASE("l1 box members all norm the anchor") {
  const std::vector<double> x{1.0, 0.0};
  const auto set = norming_functionals(l1(2), x);
  REQUIRE(set.kind == FunctionalSetKind::l1_box);
  for (const auto& f : set.sample_members(32, 11)) {
    CHECK(f.dual_norm() == Catch::Approx(1.0).margin(1e-10));
    CHECK(f(x) == Catch::Approx(1.0).margin(1e-10));
    CHECK(std::abs(f.coords[1]) <= 1.0 + 1e-12);
  }
}

TEST_CASE("linf simplex members all norm the anchor") {
  const std::vector<double> x{1.0, 1.0};
  const auto set = norming_functionals(linf(2), x);
  REQUIRE(set.kind == FunctionalSetKind::linf_simplex);
  REQUIRE(set.indices.size() == 2);
  for (const auto& f : set.sample_members(32, 13)) {
    CHECK(f.dual_norm() == Catch::Approx(1.0).margin(1e-10));
    CHECK(f(x) == Catch::Approx(1.0).margin(1e-10));
    CHECK(f.coords[0] >= -1e-12);  // convex hull of (1,0) and (0,1)
    CHECK(f.coords[1] >= -1e-12);
  }
}

TEST_CASE("1-sum norming sets sample within budget and validate") {
  const auto s = SpaceDescriptor::sum1(l2(2), l2(1));
  const std::vector<double> x{0.6, 0.8, 0.0};  // zero scalar slot: non-smooth point
  const auto set = norming_functionals(s, x);
  REQUIRE(set.kind == FunctionalSetKind::numeric_sample);
  CHECK(set.samples.size() == 64);
  for (const auto& f : set.sample_members(64, 1)) {
    CHECK(f.dual_norm() <= 1.0 + 1e-10);
    CHECK(f(x) == Catch::Approx(norm(s, x)).margin(1e-10));
  }
  const std::vector<double> y{0.6, 0.8, 0.5};  // both parts alive: unique functional
  CHECK(norming_functionals(s, y).is_singleton());
}

TEST_CASE("norming functional invariants on random vectors") {
  for (const auto& s : all_families()) {
    Rng rng(23);
    for (int t = 0; t < 60; ++t) {
      const auto x = rng.normal_vector(s.dim());
      if (norm(s, x) == 0.0) continue;
      const auto set = norming_functionals(s, x);
      for (const auto& f : set.sample_members(8, 101 + static_cast<std::uint64_t>(t))) {
        CHECK(f.dual_norm() >= 1.0 - 1e-10);
        CHECK(f.dual_norm() <= 1.0 + 1e-10);
        CHECK(f(x) >= norm(s, x) - 1e-10 * (1.0 + norm(s, x)));
        CHECK(f(x) <= norm(s, x) + 1e-10 * (1.0 + norm(s, x)));
      }
    }
  }
}

TEST_CASE("smooth point detection with evidence") {
  const std::vector<double> a{2.0, 1.0};
  CHECK(is_smooth_point(SpaceDescriptor::lp(3.0, 2), a).smooth);

  const std::vector<double> b{1.0, 0.0};
  const auto vb = is_smooth_point(l1(2), b);
  REQUIRE_FALSE(vb.smooth);
  REQUIRE(vb.evidence.has_value());
  const auto& [f1, f2] = *vb.evidence;
  // the two distinct members (1, +1) and (1, -1), both norming b
  CHECK(f1(b) == Catch::Approx(1.0).margin(1e-12));
  CHECK(f2(b) == Catch::Approx(1.0).margin(1e-12));
  CHECK(std::abs(f1.coords[1] - f2.coords[1]) > 1.0);

  const std::vector<double> c{1.0, 1.0};
  CHECK(is_smooth_point(l1(2), c).smooth);  // no free coordinate

  CHECK_THROWS_AS(is_smooth_point(l2(2), std::vector<double>{0.0, 0.0}), input_error);
}

TEST_CASE("smooth flag consistency on flagged spaces") {
  for (const auto& s : all_families()) {
    if (!s.smooth()) continue;
    for (const auto& x : sample_unit_sphere(s, 31, 500)) CHECK(is_smooth_point(s, x.coords).smooth);
  }
}

TEST_CASE("strict convexity flag consistency") {
  for (const auto& s : all_families()) {
    if (!s.strictly_convex() || s.dim() < 2) continue;
    const auto pts = sample_unit_sphere(s, 37, 1000);
    for (int i = 0; i + 1 < 1000; i += 2) {
      const auto& x = pts[static_cast<std::size_t>(i)].coords;
      const auto& y = pts[static_cast<std::size_t>(i) + 1].coords;
      std::vector<double> mid(x.size());
      for (std::size_t k = 0; k < x.size(); ++k) mid[k] = 0.5 * (x[k] + y[k]);
      std::vector<double> diff(x.size());
      for (std::size_t k = 0; k < x.size(); ++k) diff[k] = x[k] - y[k];
      if (norm(s, diff) < 1e-6) continue;
      CHECK(norm(s, mid) < 1.0 - 1e-12);
    }
  }
}

TEST_CASE("extreme points enumeration") {
  const auto e1 = extreme_points(l1(2));
  REQUIRE(e1.enumerable);
  CHECK(e1.points.size() == 4);

  const auto einf = extreme_points(linf(2));
  REQUIRE(einf.enumerable);
  CHECK(einf.points.size() == 4);
  for (const auto& p : einf.points) {
    CHECK(std::abs(p[0]) == 1.0);
    CHECK(std::abs(p[1]) == 1.0);
  }

  CHECK_FALSE(extreme_points(l2(3)).enumerable);

  const auto sum = SpaceDescriptor::sum1(l1(2), l2(1));
  const auto es = extreme_points(sum);
  REQUIRE(es.enumerable);
  CHECK(es.points.size() == 6);  // 4 embedded cross-polytope vertices + (0,0,+-1)
  for (const auto& p : es.points) CHECK(norm(sum, p) == Catch::Approx(1.0).margin(1e-14));

  CHECK_FALSE(extreme_points(SpaceDescriptor::sum1(l2(2), l2(1))).enumerable);
}

TEST_CASE("unit sphere sampling is deterministic and normalized") {
  const auto a = sample_unit_sphere(l1(2), 1, 1000);
  const auto b = sample_unit_sphere(l1(2), 1, 1000);
  REQUIRE(a.size() == 1000);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].coords == b[i].coords);
    CHECK(std::abs(a[i].norm() - 1.0) <= 1e-12);
  }
  for (const auto& x : sample_unit_sphere(l2(3), 7, 10)) {
    auto renorm = x.coords;
    const double n = norm(l2(3), renorm);
    for (auto& c : renorm) c /= n;
    for (std::size_t k = 0; k < renorm.size(); ++k)
      CHECK(renorm[k] == Catch::Approx(x.coords[k]).margin(1e-12));
  }
  CHECK_THROWS_AS(sample_unit_sphere(l2(2), 1, 0), input_error);
}

TEST_CASE("norming functional selection with a prescribed value") {
  Rng rng(41);
  for (const auto& s : all_families()) {
    for (int t = 0; t < 40; ++t) {
      const auto x = rng.normal_vector(s.dim());
      const auto y = rng.normal_vector(s.dim());
      if (norm(s, x) == 0.0) continue;
      const auto iv = support_values(s, x, y);
      const double target = iv.lo + (iv.hi - iv.lo) * rng.u01();
      const auto f = norming_member_with_value(s, x, y, target);
      CHECK(f.dual_norm() == Catch::Approx(1.0).margin(1e-9));
      CHECK(f(x) == Catch::Approx(norm(s, x)).margin(1e-9 * (1.0 + norm(s, x))));
      CHECK(f(y) == Catch::Approx(target).margin(1e-9 * (1.0 + std::abs(target))));
    }
  }
}

TEST_CASE("dual norm and dual space round out the lp family") {
  CHECK(dual_exponent(1.0) == kInf);
  CHECK(dual_exponent(kInf) == 1.0);
  CHECK(dual_exponent(1.5) == Catch::Approx(3.0));
  CHECK(dual_space(l1(3)) == linf(3));
  CHECK_THROWS_AS(dual_space(SpaceDescriptor::sum1(l2(1), l2(1))), unsupported_space_error);
  const auto sum = SpaceDescriptor::sum1(l2(2), l1(2));
  const std::vector<double> f{3.0, 4.0, 2.0, -1.0};
  CHECK(dual_norm(sum, f) == Catch::Approx(std::max(5.0, 2.0)).margin(1e-12));
}
