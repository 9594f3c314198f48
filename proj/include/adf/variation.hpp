#pragma once

#include <string>
#include <vector>

#include "adf/geometry.hpp"
#include "adf/measure.hpp"

namespace adf {

// Variation field restricted to the graph: one vector per vertex,
// linear interpolation along edges.
struct OnSigmaField {
  std::vector<Vec2> at_vertex;

  static OnSigmaField zero(const EmbeddedGraph& g) {
    return {std::vector<Vec2>(static_cast<std::size_t>(g.vertex_count()))};
  }
  static OnSigmaField constant(const EmbeddedGraph& g, Vec2 v) {
    return {std::vector<Vec2>(static_cast<std::size_t>(g.vertex_count()), v)};
  }
  // Value e at one vertex, zero elsewhere (hat field).
  static OnSigmaField hat(const EmbeddedGraph& g, int vertex, Vec2 e);

  Vec2 on_edge(const EmbeddedGraph& g, int edge_id, double t) const;
};

// Per-vertex curvature atoms a_v = sum over incident edges of the unit
// tangent from v toward the other endpoint.
std::vector<Vec2> curvature_atoms(const EmbeddedGraph& g);

// <H_Sigma, X>. The length derivative under the flow of X is its negation.
double curvature_pairing(const EmbeddedGraph& g, const OnSigmaField& X);

double average_distance(const EmbeddedGraph& g, const QuadratureMeasure& mu);
double functional_value(const EmbeddedGraph& g, const QuadratureMeasure& mu, double lambda);

enum class Verdict { Stationary, NonStationary, Inconclusive };
std::string to_string(Verdict v);

struct VariationReport {
  double integral_term = 0.0;   // measure term of the first variation
  double curvature_term = 0.0;  // <H_Sigma, X>
  double total = 0.0;           // integral_term - lambda * curvature_term
  std::vector<std::pair<std::string, double>> basis_residuals;
  double residual_norm = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::string> warnings;
};

inline constexpr double kDistFloor = 1e-12;

VariationReport first_variation(const EmbeddedGraph& g, const QuadratureMeasure& mu,
                                double lambda, const OnSigmaField& X,
                                double dist_floor = kDistFloor);

// Derivative of F along every hat basis field: component (v, i) in the
// returned vectors. Steepest descent moves along the negation.
std::vector<Vec2> shape_gradient(const EmbeddedGraph& g, const QuadratureMeasure& mu,
                                 double lambda);

// Hat-basis stationarity test: residual_norm is the sup norm of the
// discrete gradient over the sup-normalized hat fields.
VariationReport stationarity_residual(const EmbeddedGraph& g, const QuadratureMeasure& mu,
                                      double lambda, double tol);
// Same test over a user basis (each field should be sup-normalized).
VariationReport stationarity_residual(const EmbeddedGraph& g, const QuadratureMeasure& mu,
                                      double lambda, const std::vector<OnSigmaField>& basis,
                                      double tol);

struct SlopeProbeResult {
  std::vector<std::pair<double, double>> ratios;  // (eps, (F(Sigma_eps)-F(Sigma))/eps)
  double extrapolated = 0.0;                      // sqrt(eps) model extrapolation to 0
};

// Grows a spike of length eps from `attach` (a point on the graph) along
// `dir` and records the difference quotients of F.
SlopeProbeResult slope_probe(const EmbeddedGraph& g, const QuadratureMeasure& mu,
                             double lambda, Point2 attach, Vec2 dir,
                             const std::vector<double>& eps_list);

struct LoopCutResult {
  std::vector<std::pair<double, double>> deltas;  // (actual diameter, F(cut) - F(Sigma))
};

// Removes a connected sub-arc of diameter ~eps around the given vertex,
// which must lie on a cycle, and records the change of F.
LoopCutResult loop_cut_probe(const EmbeddedGraph& g, const QuadratureMeasure& mu,
                             double lambda, int loop_vertex,
                             const std::vector<double>& eps_list);

// Drops samples whose projection margin is below `margin` (the first
// variation integrand is discontinuous across the ridge set).
QuadratureMeasure exclude_near_ridge(const EmbeddedGraph& g, const QuadratureMeasure& mu,
                                     double margin, double* excluded_mass = nullptr);

struct FdOracleResult {
  double derivative = 0.0;
  double excluded_mass = 0.0;
};

// Central difference of F under vertex displacement by the field, with the
// same fixed quadrature on both sides; near-ridge samples (margin < 10*step)
// are excluded from both evaluations.
FdOracleResult fd_variation_oracle(const EmbeddedGraph& g, const QuadratureMeasure& mu,
                                   double lambda, const OnSigmaField& X, double step);

}  // namespace adf
