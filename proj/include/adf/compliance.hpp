#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "adf/geometry.hpp"
#include "adf/variation.hpp"

namespace adf {

// Uniform node grid over a rectangle: node (i, j) sits at
// lo + (i*h, j*h), 0 <= i < nx, 0 <= j < ny.
struct Grid {
  Point2 lo;
  double h = 0.0;
  int nx = 0, ny = 0;

  int index(int i, int j) const { return j * nx + i; }
  Point2 node(int i, int j) const { return {lo.x + i * h, lo.y + j * h}; }
  Point2 hi() const { return {lo.x + (nx - 1) * h, lo.y + (ny - 1) * h}; }
  int node_count() const { return nx * ny; }
};

// Grid whose spacing h divides both rectangle sides (validated).
Grid grid_over(Point2 lo, Point2 hi, double h);

// Dirichlet mask: true on the outer boundary and on every node within
// h/2 of the graph. Pass nullptr for the empty set.
std::vector<char> rasterize(const EmbeddedGraph* g, const Grid& grid);

struct GridPoissonProblem {
  Grid grid;
  std::vector<double> f;     // source sampled at nodes
  std::vector<char> mask;    // Dirichlet nodes (u = 0)
};

GridPoissonProblem make_poisson_problem(const Grid& grid,
                                        const std::function<double(Point2)>& f,
                                        const EmbeddedGraph* sigma);

struct GridSolution {
  std::vector<double> u;     // per node; 0 exactly on masked nodes
  double residual = 0.0;     // ||f + Lap_h u||_inf over free nodes
  int iterations = 0;
};

// 5-point Laplacian solve (-Lap_h u = f on free nodes) by sparse direct
// factorization; throws unless the residual meets the tolerance.
GridSolution solve_poisson(const GridPoissonProblem& p, double tol = 1e-10);

// h^2 * sum(u*f) + lambda * length(g). Pass g = nullptr for the empty set.
double compliance_value(const GridSolution& sol, const GridPoissonProblem& p,
                        double lambda, const EmbeddedGraph* g);

// |integral(2fu - |grad_h u|^2) - integral(fu)| with the link-based
// gradient energy consistent with the 5-point stencil.
double dual_gap(const GridSolution& sol, const GridPoissonProblem& p);

// (du+/dn)^2 - (du-/dn)^2 at `samples` stations along the edge, from
// one-sided 3-point derivatives offset past the masked strip. With
// n = perp(tangent), the plus side is the one with external normal n,
// i.e. the side n points away from. Throws GeometryError without three
// clear node layers on both sides.
std::vector<std::pair<double, double>> normal_jump(const GridSolution& sol,
                                                   const GridPoissonProblem& p,
                                                   const EmbeddedGraph& g, int edge_id,
                                                   int samples);

// Line quadrature of jump * <X, n> along the support of X minus
// lambda * <H_Sigma, X>.
double shape_derivative(const GridSolution& sol, const GridPoissonProblem& p,
                        const EmbeddedGraph& g, double lambda, const OnSigmaField& X);

struct FdComplianceResult {
  double derivative = 0.0;
  double noise = 0.0;  // rasterization-noise estimate from a half-step probe
};

// Central difference of compliance under vertex displacement by eps*X,
// with full re-rasterization and re-solve; eps must be >= 2h.
FdComplianceResult fd_compliance_oracle(const GridPoissonProblem& p, const EmbeddedGraph& g,
                                        double lambda, const OnSigmaField& X, double eps,
                                        double tol = 1e-10);

}  // namespace adf
