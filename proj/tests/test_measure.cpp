#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "adf/measure.hpp"

using namespace adf;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("contains on primitives") {
  CHECK(Region::disk({0, 0}, 1.0).contains({0.5, 0}));
  CHECK_FALSE(Region::disk({0, 0}, 1.0).contains({1.5, 0}));
  CHECK(Region::disk({0, 0}, 1.0).contains({1.0, 0}));  // boundary inside

  const Region ring = Region::difference(Region::disk({0, 0}, 1.0), Region::disk({0, 0}, 0.5));
  CHECK_FALSE(ring.contains({0.25, 0}));
  CHECK(ring.contains({0.75, 0}));

  const Region sec = Region::annular_sector({0, 0}, 1.0, 2.0, 0.0, kPi / 2);
  const double c45 = 1.5 * std::cos(kPi / 4);
  CHECK(sec.contains({c45, c45}));
  CHECK_FALSE(sec.contains({c45, -c45}));
  CHECK_FALSE(sec.contains({0.5, 0.5}));

  const Region tri = Region::polygon({{0, 0}, {2, 0}, {0, 2}});
  CHECK(tri.contains({0.5, 0.5}));
  CHECK(tri.contains({1.0, 1.0}));  // boundary
  CHECK_FALSE(tri.contains({1.5, 1.5}));
  CHECK_THROWS_AS(Region::polygon({{0, 0}, {0, 2}, {2, 0}}), ValidationError);  // clockwise
}

TEST_CASE("discretize_region") {
  SUBCASE("unit disk mass converges to pi") {
    const QuadratureMeasure mu = discretize_region(Region::disk({0, 0}, 1.0), 0.01);
    CHECK(mu.total_mass == doctest::Approx(kPi).epsilon(0.005));
    CHECK_FALSE(mu.atomic);
  }
  SUBCASE("aligned rectangle tiles exactly") {
    const QuadratureMeasure mu =
        discretize_region(Region::rectangle({0, 0}, {2, 1}), 0.1);
    CHECK(mu.total_mass == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(mu.size() == 200);
  }
  SUBCASE("union of disjoint squares is additive") {
    const Region a = Region::rectangle({0, 0}, {1, 1});
    const Region b = Region::rectangle({3, 0}, {4, 1});
    const double ma = discretize_region(a, 0.05).total_mass;
    const double mb = discretize_region(b, 0.05).total_mass;
    const double mu = discretize_region(Region::union_of({a, b}), 0.05).total_mass;
    CHECK(mu == doctest::Approx(ma + mb).epsilon(1e-9));
  }
  SUBCASE("empty region is degenerate") {
    const Region none = Region::difference(Region::disk({0, 0}, 1.0), Region::disk({0, 0}, 1.0));
    CHECK_THROWS_AS(discretize_region(none, 0.1), DegenerateMeasureError);
  }
  SUBCASE("h must be positive") {
    CHECK_THROWS_AS(discretize_region(Region::disk({0, 0}, 1.0), 0.0), ArgumentError);
  }
  SUBCASE("disk mass error shrinks under refinement") {
    double prev = 1.0;
    for (double h : {0.1, 0.05, 0.025, 0.0125}) {
      const double err =
          std::abs(discretize_region(Region::disk({0, 0}, 1.0), h).total_mass - kPi);
      CHECK(err < prev + 1e-12);
      prev = err;
    }
    CHECK(prev < 0.01);
  }
}

TEST_CASE("contains agrees with sampled area") {
  // Monte Carlo area of the annular sector vs. the closed form.
  const Region sec = Region::annular_sector({0, 0}, 0.5, 1.5, 0.25, 0.25 + kPi / 3);
  const double exact = 0.5 * (1.5 * 1.5 - 0.5 * 0.5) * (kPi / 3);
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  int hits = 0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i)
    if (sec.contains({u(rng), u(rng)})) ++hits;
  const double est = 9.0 * hits / n;
  CHECK(est == doctest::Approx(exact).epsilon(0.01));
}

TEST_CASE("from_points") {
  CHECK(from_points({{{3, 4}, 1.0}}).total_mass == doctest::Approx(1.0));
  CHECK_THROWS_AS(from_points({}), DegenerateMeasureError);
  CHECK_THROWS_AS(from_points({{{0, 0}, -1.0}}), ArgumentError);
  const QuadratureMeasure mu = from_points({{{0, 0}, 2.0}, {{1, 1}, 3.0}});
  CHECK(mu.total_mass == doctest::Approx(5.0));
  CHECK(mu.atomic);
}

TEST_CASE("radial graph sector membership") {
  // Constant radius samples reduce to an annular sector.
  const Region r = Region::radial_graph_sector({0, 0}, 0.0, kPi / 2, {0.5, 0.5, 0.5},
                                               {1.0, 1.0, 1.0});
  CHECK(r.contains({0.7, 0.1}));
  CHECK_FALSE(r.contains({0.3, 0.1}));
  CHECK_FALSE(r.contains({0.7, -0.1}));
  CHECK(r.contains({0.0, 1.0}));  // outer boundary at the end angle
}
