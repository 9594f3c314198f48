#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "adf/constructions.hpp"
#include "adf/variation.hpp"

using namespace adf;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("stationary_circle") {
  SUBCASE("radius formula") {
    const Scene a = stationary_circle(0.3, 64);
    for (const Point2& v : a.graph.vertices())
      CHECK(norm(v) == doctest::Approx(0.4472135954999579).epsilon(1e-12));
    const Scene b = stationary_circle(0.125, 64);
    CHECK(norm(b.graph.vertex(0)) == doctest::Approx(0.6123724356957945).epsilon(1e-12));
  }
  SUBCASE("degenerate lambda") {
    CHECK_THROWS_AS(stationary_circle(0.5, 64), ConstructionError);
    CHECK_THROWS_AS(stationary_circle(0.0, 64), ConstructionError);
  }
  SUBCASE("scene containment") { CHECK_NOTHROW(validate_scene(stationary_circle(0.3, 512))); }
}

TEST_CASE("stadium_domain") {
  SUBCASE("area and endpoints") {
    const Scene s = stadium_domain(0.25, 2.0);
    const QuadratureMeasure mu = discretize_region(s.region, 0.01);
    CHECK(mu.total_mass == doctest::Approx(2.0 + kPi * 0.25).epsilon(0.01));
    CHECK(distance(s.graph.vertex(0), {0, 0}) < 1e-12);
    CHECK(distance(s.graph.vertex(1), {2, 0}) < 1e-12);
    CHECK(s.lambda == doctest::Approx(0.25));
  }
  SUBCASE("degenerate width rejected") {
    CHECK_THROWS_AS(stadium_domain(0.0, 2.0), ConstructionError);
  }
}

TEST_CASE("wedge_set") {
  SUBCASE("arm directions") {
    const Scene s = wedge_set(kPi / 3, 1.0, 0.25);
    const Vec2 d1 = normalized(s.graph.vertex(1) - s.graph.vertex(0));
    const Vec2 d2 = normalized(s.graph.vertex(2) - s.graph.vertex(0));
    CHECK(d1.x == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d1.y == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-12));
    CHECK(d2.y == doctest::Approx(-std::sqrt(3.0) / 2).epsilon(1e-12));
  }
  SUBCASE("collapsed wedge rejected") {
    CHECK_THROWS_AS(wedge_set(kPi / 2, 1.0, 0.25), ArgumentError);
  }
}

TEST_CASE("solve_rect_height") {
  SUBCASE("reference solution") {
    const double h = solve_rect_height(0.5, 0.125);
    CHECK(h == doctest::Approx(0.25725356158428169).epsilon(1e-9));
    CHECK(rect_capture_integral(0.5, h) == doctest::Approx(0.125).epsilon(1e-10));
  }
  SUBCASE("monotone in lambda") {
    double prev = 0.0;
    for (double lam : {0.01, 0.05, 0.125, 0.3}) {
      const double h = solve_rect_height(0.5, lam);
      CHECK(h > prev);
      prev = h;
    }
  }
  SUBCASE("round trip against the outer quadrature") {
    // lambda = integral over z in [-k,k] of sqrt(z^2+h^2)-|z| dz.
    const double k = 0.5, lambda = 0.125;
    const double h = solve_rect_height(k, lambda);
    const int n = 20000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double z = k * (i + 0.5) / n;
      acc += std::sqrt(z * z + h * h) - z;
    }
    acc *= 2.0 * k / n;
    CHECK(acc == doctest::Approx(lambda).epsilon(1e-6));
  }
}

TEST_CASE("corner parameters and domain") {
  const double lambda = 0.125, R = 1.0, alpha = kPi / 6;
  const CornerParams p = CornerParams::create(lambda, R, alpha, 0.5 * R * (1 - std::cos(alpha)));

  SUBCASE("closed-form constants") {
    CHECK(p.b == doctest::Approx(std::sqrt(1.25) - 1.0).epsilon(1e-14));
    CHECK(p.r == doctest::Approx(0.5).epsilon(1e-14));
    // f(0) = sqrt(2R^2 + 2 lambda - (R cos(alpha))^2)
    const double f0 = std::sqrt(2.0 + 0.25 - 0.75);
    CHECK(f0 == doctest::Approx(1.224744871391589).epsilon(1e-12));
    // f(alpha) = R + b
    const double fa = std::sqrt(2.0 + 0.25 - 1.0);
    CHECK(fa == doctest::Approx(R + p.b).epsilon(1e-12));
  }
  SUBCASE("k bound enforced") {
    CHECK_THROWS_AS(CornerParams::create(lambda, R, alpha, R * (1 - std::cos(alpha)) + 0.01),
                    ArgumentError);
    CHECK_THROWS_AS(CornerParams::create(lambda, R, alpha, 0.0), ArgumentError);
  }
  SUBCASE("scene containment and arc meeting point") {
    const Scene s = corner_domain(p, 256);
    CHECK_NOTHROW(validate_scene(s));
    // The two arcs meet at O = (0, R sin(alpha)).
    bool has_O = false;
    for (const Point2& v : s.graph.vertices())
      if (distance(v, {0.0, R * std::sin(alpha)}) < 1e-9) has_O = true;
    CHECK(has_O);
  }
  SUBCASE("region pieces do not overlap") {
    const Scene s = corner_domain(p, 256);
    REQUIRE(s.region.kind() == Region::Kind::Union);
    const double h = 0.005;
    const double whole = discretize_region(s.region, h).total_mass;
    double parts = 0.0;
    for (const Region& c : s.region.children()) parts += discretize_region(c, h).total_mass;
    CHECK(parts == doctest::Approx(whole).epsilon(0.005));
  }
}

TEST_CASE("h_of_phi") {
  SUBCASE("reference values") {
    CHECK(h_of_phi(kPi / 4) == doctest::Approx(1.2955871493926381).epsilon(1e-12));
    CHECK(h_of_phi(0.1) == doctest::Approx(1.0033506329997354).epsilon(1e-12));
    CHECK(h_of_phi(1.2) == doctest::Approx(2.4104036748275479).epsilon(1e-12));
  }
  SUBCASE("quadrature matches the antiderivative on a grid") {
    for (int i = 1; i <= 100; ++i) {
      const double phi = (kPi / 2) * i / 101.0;
      CHECK(std::abs(h_of_phi(phi) - h_of_phi_closed(phi)) <= 1e-10);
    }
  }
  SUBCASE("domain validation") {
    CHECK_THROWS_AS(h_of_phi(0.0), ArgumentError);
    CHECK_THROWS_AS(h_of_phi(kPi / 2), ArgumentError);
  }
}

TEST_CASE("corner_nonstationary_test") {
  SUBCASE("reference example") {
    const CornerTestResult t = corner_nonstationary_test(0.125, 1.0, 1.0, kPi / 4);
    CHECK(t.ratio == doctest::Approx(17.944271909999159).epsilon(1e-9));
    CHECK(t.h == doctest::Approx(1.2955871493926381).epsilon(1e-9));
    CHECK(t.non_stationary);
  }
  SUBCASE("small radii push the ratio toward 1 from above") {
    const CornerTestResult t = corner_nonstationary_test(0.125, 1e-4, 1e-4, kPi / 4);
    CHECK(t.ratio > 1.0);
    CHECK(t.ratio < 1.001);
  }
  SUBCASE("ratio exceeds 1 on random draws") {
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> lam(0.01, 0.45), rad(0.05, 3.0), ph(0.05, 1.5);
    for (int i = 0; i < 100; ++i) {
      const CornerTestResult t = corner_nonstationary_test(lam(rng), rad(rng), rad(rng), ph(rng));
      CHECK(t.ratio > 1.0);
    }
  }
}

TEST_CASE("gamma_threshold") {
  const GammaReport rep = gamma_threshold(1e-3);
  CHECK(rep.profile.size() > 1000);
  // g tends to 0 at the left endpoint.
  CHECK(std::abs(rep.profile.front().second) < 1e-2);
  // The report either brackets interior roots or documents their absence
  // with the sampled profile attached.
  if (rep.roots.empty()) {
    CHECK(rep.no_interior_root);
    CHECK(rep.min_value >= 0.0);
  } else {
    CHECK_FALSE(rep.no_interior_root);
  }
}

TEST_CASE("corner scene approaches stationarity under refinement") {
  const CornerParams p = CornerParams::create(0.125, 1.0, kPi / 6, 0.03);
  const Scene s = corner_domain(p, 256);
  double prev = std::numeric_limits<double>::infinity();
  for (double h : {0.04, 0.02}) {
    const QuadratureMeasure mu = discretize_region(s.region, h);
    const double res = stationarity_residual(s.graph, mu, s.lambda, 1e-2).residual_norm;
    CHECK(res < prev);
    prev = res;
  }
}
