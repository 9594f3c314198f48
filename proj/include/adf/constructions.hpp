#pragma once

#include <string>
#include <vector>

#include "adf/geometry.hpp"
#include "adf/measure.hpp"

namespace adf {

// A candidate set together with the ambient region and length weight.
struct Scene {
  EmbeddedGraph graph;
  Region region;
  double lambda = 0.0;
  std::string provenance;
};

// Throws unless every graph vertex lies in the region.
void validate_scene(const Scene& s);

// Circle of radius sqrt(1/2 - lambda) in the unit disk, as an n_arc-gon.
// Stationary for 0 < lambda < 1/2; degenerate at lambda = 1/2.
Scene stationary_circle(double lambda, int n_arc);

// Segment of length L inside the rectangle-with-semicircular-caps region
// of cap radius sqrt(lambda); the segment is stationary there.
Scene stadium_domain(double lambda, double L);

// Two segments from the origin with half-aperture phi about the +x
// bisector, inside a disk; never stationary.
Scene wedge_set(double phi, double arm_len, double margin);

// Parameters of the curved-corner construction (equal arc radii).
struct CornerParams {
  double lambda = 0.0;
  double R = 0.0;      // arc radius
  double alpha = 0.0;  // half-angle at the centers; alpha = pi/2 - phi
  double k = 0.0;      // rectangle edge on the center line
  // Derived:
  double b = 0.0;      // sqrt(R^2 + 2 lambda) - R
  double r = 0.0;      // sqrt(2 lambda), sector radius at the corner
  double h = 0.0;      // rectangle height solving the capture equation

  static CornerParams create(double lambda, double R, double alpha, double k);
};

// Left-hand side of the rectangle capture equation:
//   k sqrt(k^2+h^2) + h^2 ln((k + sqrt(k^2+h^2))/h) - k^2
double rect_capture_integral(double k, double h);

// h > 0 with rect_capture_integral(k, h) = lambda, by bisection to 1e-12.
double solve_rect_height(double k, double lambda);

// The full curved-corner scene: two arcs meeting at the corner, ambient
// region assembled from the seven pieces of the construction.
Scene corner_domain(const CornerParams& p, int n_arc);

// h(phi) = (1/sin phi) * integral_0^phi cos(phi-theta)/cos^2 theta dtheta,
// by adaptive quadrature, cross-checked against the closed form.
double h_of_phi(double phi);
double h_of_phi_closed(double phi);

struct CornerTestResult {
  double ratio = 0.0;  // 4 lambda / (b1^2 + b2^2)
  double h = 0.0;      // h(phi)
  bool non_stationary = false;  // ratio >= h
  double b1 = 0.0, b2 = 0.0;
};

CornerTestResult corner_nonstationary_test(double lambda, double R1, double R2, double phi);

struct GammaReport {
  // g(gamma) = integral_0^gamma cos(gamma-theta)/cos^2 theta dtheta - sin gamma,
  // sampled on (0, pi/2) at the given resolution.
  std::vector<std::pair<double, double>> profile;
  std::vector<double> roots;  // interior sign-change brackets refined by bisection
  bool no_interior_root = false;
  double min_value = 0.0;
  double min_at = 0.0;
};

GammaReport gamma_threshold(double resolution);

}  // namespace adf
