#include "adf/constructions.hpp"

#include <cmath>
#include <functional>

namespace adf {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int depth = 0) {
  const double c = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fc = f(c);
  const double d = 0.5 * (a + c), e = 0.5 * (c + b);
  const double fd = f(d), fe = f(e);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
  const double left = (c - a) / 6.0 * (fa + 4.0 * fd + fc);
  const double right = (b - c) / 6.0 * (fc + 4.0 * fe + fb);
  const double split = left + right;
  if (depth > 40 || std::abs(split - whole) <= 15.0 * tol) {
    return split + (split - whole) / 15.0;
  }
  return adaptive_simpson(f, a, c, 0.5 * tol, depth + 1) +
         adaptive_simpson(f, c, b, 0.5 * tol, depth + 1);
}

}  // namespace

void validate_scene(const Scene& s) {
  for (int v = 0; v < s.graph.vertex_count(); ++v)
    if (!s.region.contains(s.graph.vertex(v)))
      throw ValidationError("scene '" + s.provenance + "': vertex " + std::to_string(v) +
                            " lies outside the region");
}

Scene stationary_circle(double lambda, int n_arc) {
  if (!(lambda > 0.0 && lambda < 0.5))
    throw ConstructionError(
        "stationary_circle: needs 0 < lambda < 1/2 (lambda = 1/2 degenerates to a point)");
  if (n_arc < 3) throw ArgumentError("stationary_circle: n_arc must be >= 3");
  const double radius = std::sqrt(0.5 - lambda);
  std::vector<Point2> vs;
  std::vector<EdgeRef> es;
  vs.reserve(static_cast<std::size_t>(n_arc));
  for (int i = 0; i < n_arc; ++i) {
    const double a = 2.0 * kPi * i / n_arc;
    vs.push_back({radius * std::cos(a), radius * std::sin(a)});
    es.push_back({i, (i + 1) % n_arc});
  }
  Scene s{EmbeddedGraph(std::move(vs), std::move(es)), Region::disk({0.0, 0.0}, 1.0), lambda,
          "circle"};
  validate_scene(s);
  return s;
}

Scene stadium_domain(double lambda, double L) {
  if (!(lambda > 0.0)) throw ConstructionError("stadium_domain: lambda must be > 0");
  if (!(L > 0.0)) throw ArgumentError("stadium_domain: L must be > 0");
  const double cap = std::sqrt(lambda);
  std::vector<Region> parts;
  parts.push_back(Region::rectangle({0.0, -cap}, {L, cap}));
  parts.push_back(Region::annular_sector({0.0, 0.0}, 0.0, cap, 0.5 * kPi, 1.5 * kPi));
  parts.push_back(Region::annular_sector({L, 0.0}, 0.0, cap, -0.5 * kPi, 0.5 * kPi));
  Scene s{EmbeddedGraph({{0.0, 0.0}, {L, 0.0}}, {{0, 1}}), Region::union_of(std::move(parts)),
          lambda, "stadium"};
  validate_scene(s);
  return s;
}

Scene wedge_set(double phi, double arm_len, double margin) {
  if (!(phi > 0.0 && phi < 0.5 * kPi))
    throw ArgumentError("wedge_set: phi must be in (0, pi/2); phi = pi/2 is a single segment");
  if (!(arm_len > 0.0)) throw ArgumentError("wedge_set: arm_len must be > 0");
  if (margin < 0.0) throw ArgumentError("wedge_set: margin must be >= 0");
  std::vector<Point2> vs{{0.0, 0.0},
                         {arm_len * std::cos(phi), arm_len * std::sin(phi)},
                         {arm_len * std::cos(phi), -arm_len * std::sin(phi)}};
  Scene s{EmbeddedGraph(std::move(vs), {{0, 1}, {0, 2}}),
          Region::disk({0.0, 0.0}, arm_len + margin), 0.0, "wedge"};
  validate_scene(s);
  return s;
}

double rect_capture_integral(double k, double h) {
  const double s = std::sqrt(k * k + h * h);
  return k * s + h * h * std::log((k + s) / h) - k * k;
}

double solve_rect_height(double k, double lambda) {
  if (!(k > 0.0) || !(lambda > 0.0))
    throw ArgumentError("solve_rect_height: k and lambda must be > 0");
  double lo = 0.0, hi = std::max(1.0, k);
  while (rect_capture_integral(k, hi) < lambda) {
    hi *= 2.0;
    if (hi > 1e12) throw SolverError("solve_rect_height: no bracket");
  }
  // rect_capture_integral -> 0 as h -> 0+, and is increasing in h.
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (rect_capture_integral(k, mid) < lambda) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

CornerParams CornerParams::create(double lambda, double R, double alpha, double k) {
  if (!(lambda > 0.0)) throw ArgumentError("corner: lambda must be > 0");
  if (!(R > 0.0)) throw ArgumentError("corner: R must be > 0");
  if (!(alpha > 0.0 && alpha < 0.5 * kPi))
    throw ArgumentError("corner: alpha must be in (0, pi/2)");
  const double kmax = R * (1.0 - std::cos(alpha));
  if (!(k > 0.0 && k < kmax))
    throw ArgumentError("corner: k must be in (0, R(1 - cos alpha))");
  CornerParams p;
  p.lambda = lambda;
  p.R = R;
  p.alpha = alpha;
  p.k = k;
  p.b = std::sqrt(R * R + 2.0 * lambda) - R;
  p.r = std::sqrt(2.0 * lambda);
  p.h = solve_rect_height(k, lambda);
  return p;
}

Scene corner_domain(const CornerParams& p, int n_arc) {
  if (n_arc < 8) throw ArgumentError("corner_domain: n_arc must be >= 8");
  const double R = p.R, alpha = p.alpha;
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const Point2 c1{R * ca, 0.0};          // center of the arc ending at Q
  const Point2 c2{-R * ca, 0.0};         // center of the arc ending at P
  const Point2 corner{0.0, R * sa};      // the corner point O

  const auto f_of = [&](double theta) {
    return std::sqrt(2.0 * R * R + 2.0 * p.lambda - (R * ca / std::cos(theta)) * (R * ca / std::cos(theta)));
  };
  if (std::abs(f_of(alpha) - (R + p.b)) > 1e-9 * R)
    throw ConstructionError("corner_domain: consistency check f(alpha) = R + b failed");

  // Graph: arc from Q = (R cos a - R, 0) up to O, then down to P (mirror).
  const int m = std::max(2, static_cast<int>(std::lround(n_arc * alpha / (2.0 * kPi))));
  const std::vector<Point2> arc_q = arc_polyline(c1, R, kPi, kPi - alpha, m);      // Q -> O
  const std::vector<Point2> arc_p = arc_polyline(c2, R, alpha, 0.0, m);            // O -> P
  std::vector<Point2> vs = arc_q;
  for (std::size_t i = 1; i < arc_p.size(); ++i) vs.push_back(arc_p[i]);
  std::vector<EdgeRef> es;
  for (int i = 0; i + 1 < static_cast<int>(vs.size()); ++i) es.push_back({i, i + 1});

  // Region pieces in polar form. For the arc about c1 the position angle
  // psi runs in [pi - alpha, pi]; the capture angle theta is pi - psi.
  const int ns = 2048;
  std::vector<double> line_u(ns + 1), circle_r(ns + 1, R), outer_f(ns + 1);
  std::vector<double> line_u2(ns + 1), outer_f2(ns + 1);
  for (int i = 0; i <= ns; ++i) {
    const double psi = (kPi - alpha) + alpha * i / ns;   // about c1
    const double theta = kPi - psi;                      // in [0, alpha]
    line_u[static_cast<std::size_t>(i)] = R * ca / std::cos(theta);
    outer_f[static_cast<std::size_t>(i)] = f_of(theta);
    const double psi2 = alpha * i / ns;                  // about c2, theta = psi2
    line_u2[static_cast<std::size_t>(i)] = R * ca / std::cos(psi2);
    outer_f2[static_cast<std::size_t>(i)] = f_of(psi2);
  }
  std::vector<Region> parts;
  // B: between the symmetry line u and the arc about c1.
  parts.push_back(Region::radial_graph_sector(c1, kPi - alpha, kPi, line_u, circle_r));
  // C: between the arc about c1 and the curve rho = f(theta).
  parts.push_back(Region::radial_graph_sector(c1, kPi - alpha, kPi, circle_r, outer_f));
  // A, D: mirror images about u, in polar form about c2.
  parts.push_back(Region::radial_graph_sector(c2, 0.0, alpha, line_u2, circle_r));
  parts.push_back(Region::radial_graph_sector(c2, 0.0, alpha, circle_r, outer_f2));
  // E, G: rectangles of half-width k and height h below the center line at
  // P and Q, matching the capture equation's integral over z in [-k, k].
  const double px = R - R * ca;
  parts.push_back(Region::rectangle({px - p.k, -p.h}, {px + p.k, 0.0}));
  parts.push_back(Region::rectangle({-px - p.k, -p.h}, {-px + p.k, 0.0}));
  // F: sector at the corner bounded by the two arc normals.
  parts.push_back(Region::annular_sector(corner, 0.0, p.r, alpha, kPi - alpha));

  Scene s{EmbeddedGraph(std::move(vs), std::move(es)), Region::union_of(std::move(parts)),
          p.lambda, "corner"};
  validate_scene(s);
  return s;
}

double h_of_phi_closed(double phi) {
  if (!(phi > 0.0 && phi < 0.5 * kPi)) throw ArgumentError("h_of_phi: phi must be in (0, pi/2)");
  const double sec = 1.0 / std::cos(phi);
  return std::log(sec + std::tan(phi)) / std::tan(phi) + sec - 1.0;
}

double h_of_phi(double phi) {
  const double closed = h_of_phi_closed(phi);
  const double quad = adaptive_simpson(
      [phi](double t) {
        const double c = std::cos(t);
        return std::cos(phi - t) / (c * c);
      },
      0.0, phi, 1e-13) / std::sin(phi);
  if (std::abs(quad - closed) > 1e-10 * (1.0 + std::abs(closed)))
    throw SolverError("h_of_phi: quadrature disagrees with the antiderivative");
  return quad;
}

CornerTestResult corner_nonstationary_test(double lambda, double R1, double R2, double phi) {
  if (!(lambda > 0.0 && R1 > 0.0 && R2 > 0.0))
    throw ArgumentError("corner_nonstationary_test: positive inputs required");
  CornerTestResult out;
  out.b1 = std::sqrt(R1 * R1 + 2.0 * lambda) - R1;
  out.b2 = std::sqrt(R2 * R2 + 2.0 * lambda) - R2;
  out.ratio = 4.0 * lambda / (out.b1 * out.b1 + out.b2 * out.b2);
  out.h = h_of_phi(phi);
  out.non_stationary = out.ratio >= out.h;
  return out;
}

GammaReport gamma_threshold(double resolution) {
  if (!(resolution > 0.0)) throw ArgumentError("gamma_threshold: resolution must be > 0");
  // Antiderivative form of g(gamma); a quadrature cross-check lives in the
  // test suite via h_of_phi (g = sin(gamma) * (h(gamma) - 1)).
  const auto g = [](double x) {
    const double sec = 1.0 / std::cos(x);
    return std::cos(x) * std::log(sec + std::tan(x)) + std::sin(x) * (sec - 2.0);
  };
  GammaReport rep;
  rep.min_value = std::numeric_limits<double>::infinity();
  const double hi = 0.5 * kPi - 1e-9;
  double prev_x = 0.0, prev_g = 0.0;  // g(0+) -> 0
  for (double x = resolution; x < hi; x += resolution) {
    const double gx = g(x);
    rep.profile.emplace_back(x, gx);
    if (gx < rep.min_value) { rep.min_value = gx; rep.min_at = x; }
    if (prev_x > 0.0 && ((prev_g < 0.0 && gx > 0.0) || (prev_g > 0.0 && gx < 0.0))) {
      double a = prev_x, b = x;
      for (int it = 0; it < 100 && b - a > 1e-14; ++it) {
        const double mid = 0.5 * (a + b);
        if ((g(a) < 0.0) == (g(mid) < 0.0)) a = mid; else b = mid;
      }
      rep.roots.push_back(0.5 * (a + b));
    }
    prev_x = x;
    prev_g = gx;
  }
  rep.no_interior_root = rep.roots.empty();
  return rep;
}

}  // namespace adf
