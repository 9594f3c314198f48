#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "adf/constructions.hpp"
#include "adf/numerics.hpp"
#include "adf/variation.hpp"

using namespace adf;

namespace {

constexpr double kPi = 3.14159265358979323846;

EmbeddedGraph circle_gon(double r, int n) {
  std::vector<Point2> vs;
  std::vector<EdgeRef> es;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * kPi * i / n;
    vs.push_back({r * std::cos(a), r * std::sin(a)});
    es.push_back({i, (i + 1) % n});
  }
  return EmbeddedGraph(vs, es);
}

OnSigmaField radial_field(const EmbeddedGraph& g) {
  OnSigmaField X = OnSigmaField::zero(g);
  for (int v = 0; v < g.vertex_count(); ++v)
    X.at_vertex[static_cast<std::size_t>(v)] = normalized(g.vertex(v));
  return X;
}

EmbeddedGraph random_tree(std::mt19937& rng, int nv) {
  std::uniform_real_distribution<double> coord(-0.6, 0.6);
  std::vector<Point2> vs;
  for (int i = 0; i < nv; ++i) vs.push_back({coord(rng), coord(rng)});
  std::vector<EdgeRef> es;
  for (int i = 1; i < nv; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    es.push_back({pick(rng), i});
  }
  return EmbeddedGraph(vs, es);
}

}  // namespace

TEST_CASE("curvature atoms") {
  SUBCASE("collinear interior vertex has a zero atom") {
    const EmbeddedGraph g({{0, 0}, {1, 0}, {2, 0}}, {{0, 1}, {1, 2}});
    const auto atoms = curvature_atoms(g);
    CHECK(norm(atoms[1]) < 1e-12);
    CHECK(norm(atoms[0]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(norm(atoms[2]) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("segment translation leaves length unchanged") {
    const EmbeddedGraph g({{0, 0}, {1, 0}}, {{0, 1}});
    CHECK(curvature_pairing(g, OnSigmaField::constant(g, {1, 0})) ==
          doctest::Approx(0.0).epsilon(1e-15));
  }
  SUBCASE("endpoint pull lengthens the segment") {
    const EmbeddedGraph g({{0, 0}, {1, 0}}, {{0, 1}});
    const OnSigmaField X = OnSigmaField::hat(g, 1, {1, 0});
    CHECK(curvature_pairing(g, X) == doctest::Approx(-1.0).epsilon(1e-12));
  }
  SUBCASE("V graph matches -2 sin(phi)") {
    const double phi = 0.7;
    // Arms symmetric about the +y bisector.
    const EmbeddedGraph g({{0, 0},
                           {std::sin(phi), std::cos(phi)},
                           {-std::sin(phi), std::cos(phi)}},
                          {{0, 1}, {0, 2}});
    const OnSigmaField X = OnSigmaField::hat(g, 0, {0, 1});
    CHECK(curvature_pairing(g, X) == doctest::Approx(2.0 * std::cos(phi)).epsilon(1e-12));
    // Field along the bisector applied against the opening: the length
    // derivative -<H,X> equals -2 cos(phi); with the aperture measured
    // from the arms to the bisector's normal this is the -2 sin form.
    const OnSigmaField Y = OnSigmaField::hat(g, 0, {1, 0});
    CHECK(curvature_pairing(g, Y) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("circle polyline curvature against the radial field") {
    const EmbeddedGraph g = circle_gon(0.7, 512);
    CHECK(curvature_pairing(g, radial_field(g)) ==
          doctest::Approx(-2.0 * kPi).epsilon(1e-3));
  }
}

TEST_CASE("average_distance and functional_value") {
  SUBCASE("atomic cases") {
    const EmbeddedGraph g({{0, 0}, {1, 0}}, {{0, 1}});
    CHECK(average_distance(g, from_points({{{1, 1}, 1.0}})) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(average_distance(g, from_points({{{0, 0}, 1.0}, {{1, 0}, 2.0}})) ==
          doctest::Approx(0.0).epsilon(1e-15));
    CHECK(functional_value(g, from_points({{{2, 0}, 1.0}}), 0.5) ==
          doctest::Approx(1.5).epsilon(1e-12));
  }
  SUBCASE("measure supported on a length-3 graph") {
    const EmbeddedGraph g({{0, 0}, {3, 0}}, {{0, 1}});
    CHECK(functional_value(g, from_points({{{1, 0}, 1.0}}), 0.2) ==
          doctest::Approx(0.6).epsilon(1e-12));
  }
  SUBCASE("circle in the unit disk reproduces the radial integral") {
    const QuadratureMeasure mu = discretize_region(Region::disk({0, 0}, 1.0), 0.005);
    const EmbeddedGraph g = circle_gon(0.5, 512);
    CHECK(average_distance(g, mu) == doctest::Approx(0.78539816339744831).epsilon(0.005));
    const double rstar = std::sqrt(0.2);
    const EmbeddedGraph gs = circle_gon(rstar, 512);
    CHECK(functional_value(gs, mu, 0.3) ==
          doctest::Approx(1.7197383167376901).epsilon(0.005));
  }
}

TEST_CASE("first_variation") {
  SUBCASE("hand-evaluated atomic case") {
    const EmbeddedGraph g({{0, 0}, {1, 0}}, {{0, 1}});
    const QuadratureMeasure mu = from_points({{{2, 0}, 1.0}});
    const VariationReport r = first_variation(g, mu, 0.3, OnSigmaField::hat(g, 1, {1, 0}));
    CHECK(r.integral_term == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(r.curvature_term == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(r.total == doctest::Approx(-0.7).epsilon(1e-12));
  }
  SUBCASE("circle law at r = 0.6 and r = r*") {
    const QuadratureMeasure mu = discretize_region(Region::disk({0, 0}, 1.0), 0.005);
    const EmbeddedGraph g6 = circle_gon(0.6, 512);
    const double dF6 = first_variation(g6, mu, 0.3, radial_field(g6)).total;
    CHECK(dF6 == doctest::Approx(1.0053096491487337).epsilon(0.01));
    const EmbeddedGraph g3 = circle_gon(0.3, 512);
    const double dF3 = first_variation(g3, mu, 0.3, radial_field(g3)).total;
    CHECK(dF3 == doctest::Approx(-0.69115038378975451).epsilon(0.01));
    const EmbeddedGraph gs = circle_gon(std::sqrt(0.2), 512);
    CHECK(std::abs(first_variation(gs, mu, 0.3, radial_field(gs)).total) <= 1e-2);
  }
  SUBCASE("linearity in the field") {
    std::mt19937 rng(3);
    const EmbeddedGraph g = random_tree(rng, 6);
    const QuadratureMeasure mu = discretize_region(Region::disk({0, 0}, 1.2), 0.05);
    OnSigmaField X = OnSigmaField::zero(g), Y = OnSigmaField::zero(g), Z = OnSigmaField::zero(g);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int v = 0; v < g.vertex_count(); ++v) {
      X.at_vertex[v] = {u(rng), u(rng)};
      Y.at_vertex[v] = {u(rng), u(rng)};
      Z.at_vertex[v] = 2.0 * X.at_vertex[v] + (-0.5) * Y.at_vertex[v];
    }
    const double lhs = first_variation(g, mu, 0.2, Z).total;
    const double rhs = 2.0 * first_variation(g, mu, 0.2, X).total -
                       0.5 * first_variation(g, mu, 0.2, Y).total;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
  SUBCASE("translation equivariance") {
    std::mt19937 rng(5);
    const EmbeddedGraph g = random_tree(rng, 7);
    const Vec2 t{1.7, -0.4};
    std::vector<Point2> tv;
    for (const Point2& p : g.vertices()) tv.push_back(p + t);
    const EmbeddedGraph tg = g.with_vertices(tv);
    QuadratureMeasure mu = discretize_region(Region::disk({0, 0}, 1.0), 0.02);
    QuadratureMeasure tmu = mu;
    for (WeightedPoint& s : tmu.samples) s.p += t;
    OnSigmaField X = OnSigmaField::zero(g);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int v = 0; v < g.vertex_count(); ++v) X.at_vertex[v] = {u(rng), u(rng)};
    const VariationReport a = first_variation(g, mu, 0.2, X);
    const VariationReport b = first_variation(tg, tmu, 0.2, X);
    CHECK(a.total == doctest::Approx(b.total).epsilon(1e-9));
    CHECK(a.integral_term == doctest::Approx(b.integral_term).epsilon(1e-9));
  }
}

TEST_CASE("shape_gradient") {
  SUBCASE("matches the hand-evaluated atomic case") {
    const EmbeddedGraph g({{0, 0}, {1, 0}}, {{0, 1}});
    const auto grad = shape_gradient(g, from_points({{{2, 0}, 1.0}}), 0.3);
    CHECK(grad[1].x == doctest::Approx(-0.7).epsilon(1e-12));
    CHECK(grad[1].y == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("components equal hat-field first variations") {
    std::mt19937 rng(11);
    const EmbeddedGraph g = random_tree(rng, 5);
    const QuadratureMeasure mu = discretize_region(Region::disk({0, 0}, 1.2), 0.05);
    const auto grad = shape_gradient(g, mu, 0.25);
    for (int v = 0; v < g.vertex_count(); ++v) {
      CHECK(grad[v].x ==
            doctest::Approx(first_variation(g, mu, 0.25, OnSigmaField::hat(g, v, {1, 0})).total)
                .epsilon(1e-12));
      CHECK(grad[v].y ==
            doctest::Approx(first_variation(g, mu, 0.25, OnSigmaField::hat(g, v, {0, 1})).total)
                .epsilon(1e-12));
    }
  }
  SUBCASE("matches the finite-difference oracle") {
    std::mt19937 rng(13);
    const EmbeddedGraph g = random_tree(rng, 6);
    const QuadratureMeasure mu = discretize_region(Region::disk({0, 0}, 1.3), 0.01);
    const double step = 1e-5 * g.diameter();
    OnSigmaField X = OnSigmaField::zero(g);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int v = 0; v < g.vertex_count(); ++v) X.at_vertex[v] = {u(rng), u(rng)};
    const FdOracleResult fd = fd_variation_oracle(g, mu, 0.2, X, step);
    const QuadratureMeasure kept = exclude_near_ridge(g, mu, 10.0 * step);
    const double analytic = first_variation(g, kept, 0.2, X).total;
    CHECK(fd.derivative == doctest::Approx(analytic).epsilon(1e-3));
  }
}

TEST_CASE("stationarity verdicts") {
  SUBCASE("stadium is stationary") {
    const Scene s = stadium_domain(0.25, 2.0);
    const QuadratureMeasure mu = discretize_region(s.region, 0.01);
    const VariationReport r = stationarity_residual(s.graph, mu, s.lambda, 5e-3);
    CHECK(r.verdict == Verdict::Stationary);
  }
  SUBCASE("wedge is not stationary") {
    const Scene s = wedge_set(kPi / 3, 1.0, 0.25);
    const QuadratureMeasure mu = discretize_region(s.region, 0.01);
    const VariationReport r = stationarity_residual(s.graph, mu, 0.3, 5e-3);
    CHECK(r.verdict == Verdict::NonStationary);
    CHECK(r.residual_norm > 0.03);
  }
  SUBCASE("atomic measures are inconclusive") {
    const EmbeddedGraph g({{0, 0}, {1, 0}}, {{0, 1}});
    const VariationReport r =
        stationarity_residual(g, from_points({{{2, 0}, 1.0}}), 0.3, 1e-2);
    CHECK(r.verdict == Verdict::Inconclusive);
    CHECK_FALSE(r.warnings.empty());
  }
}

TEST_CASE("slope_probe") {
  SUBCASE("empty measure gives the length rate exactly") {
    const EmbeddedGraph g({{-1, 0}, {1, 0}}, {{0, 1}});
    QuadratureMeasure empty;
    const SlopeProbeResult r =
        slope_probe(g, empty, 0.3, {0.0, 0.0}, {0.0, 1.0}, {0.1, 0.05, 0.025});
    for (const auto& [eps, ratio] : r.ratios)
      CHECK(ratio == doctest::Approx(0.3).epsilon(1e-9));
  }
  SUBCASE("disk/diameter scene approaches lambda from below") {
    // The spike of length eps captures mass ~ eps^(3/2), so the difference
    // quotient is lambda - c*sqrt(eps) and climbs toward lambda.
    const EmbeddedGraph g({{-1, 0}, {1, 0}}, {{0, 1}});
    const QuadratureMeasure mu = discretize_region(Region::disk({0, 0}, 1.0), 0.01);
    const SlopeProbeResult r =
        slope_probe(g, mu, 0.3, {0.0, 0.0}, {0.0, 1.0}, {0.1, 0.05, 0.025, 0.0125});
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& [eps, ratio] : r.ratios) {
      CHECK(ratio > prev);
      CHECK(ratio < 0.3);
      prev = ratio;
    }
    CHECK(r.extrapolated == doctest::Approx(0.3).epsilon(0.05));
  }
  SUBCASE("attach point must lie on the graph") {
    const EmbeddedGraph g({{-1, 0}, {1, 0}}, {{0, 1}});
    QuadratureMeasure empty;
    CHECK_THROWS_AS(slope_probe(g, empty, 0.3, {0.0, 0.5}, {0.0, 1.0}, {0.1}), ArgumentError);
  }
}

TEST_CASE("loop_cut_probe") {
  const QuadratureMeasure mu = discretize_region(Region::disk({0, 0}, 1.0), 0.02);
  SUBCASE("cutting the stationary circle improves F") {
    const EmbeddedGraph g = circle_gon(std::sqrt(0.2), 256);
    const LoopCutResult r = loop_cut_probe(g, mu, 0.3, 0, {0.05});
    CHECK(r.deltas.front().second < 0.0);
  }
  SUBCASE("no cycle -> topology error") {
    const EmbeddedGraph g({{-1, 0}, {1, 0}}, {{0, 1}});
    CHECK_THROWS_AS(loop_cut_probe(g, mu, 0.3, 0, {0.05}), TopologyError);
  }
}

TEST_CASE("fd_variation_oracle basics") {
  const EmbeddedGraph g({{0, 0}, {1, 0}}, {{0, 1}});
  const QuadratureMeasure mu = discretize_region(Region::disk({0.5, 0}, 1.0), 0.02);
  SUBCASE("zero field") {
    CHECK(fd_variation_oracle(g, mu, 0.3, OnSigmaField::zero(g), 1e-5).derivative ==
          doctest::Approx(0.0).epsilon(1e-15));
  }
  SUBCASE("homogeneity") {
    OnSigmaField X = OnSigmaField::zero(g);
    X.at_vertex[1] = {0.3, 0.4};
    OnSigmaField X2 = X;
    X2.at_vertex[1] = 2.0 * X.at_vertex[1];
    const double a = fd_variation_oracle(g, mu, 0.3, X, 1e-6).derivative;
    const double b = fd_variation_oracle(g, mu, 0.3, X2, 2e-6).derivative;
    CHECK(b == doctest::Approx(2.0 * a).epsilon(1e-6));
  }
}

TEST_CASE("determinism across thread counts") {
  const EmbeddedGraph g = circle_gon(0.5, 64);
  const QuadratureMeasure mu = discretize_region(Region::disk({0, 0}, 1.0), 0.01);
  set_thread_count(1);
  const double f1 = functional_value(g, mu, 0.3);
  const auto g1 = shape_gradient(g, mu, 0.3);
  set_thread_count(4);
  const double f4 = functional_value(g, mu, 0.3);
  const auto g4 = shape_gradient(g, mu, 0.3);
  set_thread_count(1);
  CHECK(f1 == f4);  // bit-identical
  for (std::size_t v = 0; v < g1.size(); ++v) {
    CHECK(g1[v].x == g4[v].x);
    CHECK(g1[v].y == g4[v].y);
  }
}
