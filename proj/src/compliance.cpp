#include "adf/compliance.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>

#include "adf/errors.hpp"
#include "adf/numerics.hpp"

namespace adf {

namespace {

int side_count(double length, double h, const char* what) {
  const double n = length / h;
  const double r = std::llround(n);
  if (!(r >= 1.0) || std::abs(n - r) > 1e-9 * std::max(1.0, r))
    throw ArgumentError(std::string(what) + ": spacing must divide the rectangle side");
  return static_cast<int>(r) + 1;
}

}  // namespace

Grid grid_over(Point2 lo, Point2 hi, double h) {
  if (!(h > 0.0)) throw ArgumentError("grid_over: spacing must be > 0");
  if (!(hi.x > lo.x && hi.y > lo.y))
    throw ArgumentError("grid_over: rectangle must have positive extent");
  Grid g;
  g.lo = lo;
  g.h = h;
  g.nx = side_count(hi.x - lo.x, h, "grid_over");
  g.ny = side_count(hi.y - lo.y, h, "grid_over");
  return g;
}

std::vector<char> rasterize(const EmbeddedGraph* g, const Grid& grid) {
  if (grid.nx < 3 || grid.ny < 3)
    throw ArgumentError("rasterize: grid needs at least 3 nodes per side");
  std::vector<char> mask(static_cast<std::size_t>(grid.node_count()), 0);
  for (int i = 0; i < grid.nx; ++i) {
    mask[static_cast<std::size_t>(grid.index(i, 0))] = 1;
    mask[static_cast<std::size_t>(grid.index(i, grid.ny - 1))] = 1;
  }
  for (int j = 0; j < grid.ny; ++j) {
    mask[static_cast<std::size_t>(grid.index(0, j))] = 1;
    mask[static_cast<std::size_t>(grid.index(grid.nx - 1, j))] = 1;
  }
  if (!g) return mask;

  const Point2 hi = grid.hi();
  const double eps = 1e-9 * std::max(1.0, grid.h * std::max(grid.nx, grid.ny));
  for (const Point2& v : g->vertices())
    if (v.x < grid.lo.x - eps || v.x > hi.x + eps || v.y < grid.lo.y - eps ||
        v.y > hi.y + eps)
      throw ArgumentError("rasterize: graph extends outside the domain rectangle");

  // Only nodes near the graph's bounding box can be within h/2 of it.
  const BoundingBox bb = g->bounding_box();
  const int i0 = std::max(0, static_cast<int>(std::floor((bb.lo.x - grid.lo.x) / grid.h)) - 1);
  const int i1 = std::min(grid.nx - 1,
                          static_cast<int>(std::ceil((bb.hi.x - grid.lo.x) / grid.h)) + 1);
  const int j0 = std::max(0, static_cast<int>(std::floor((bb.lo.y - grid.lo.y) / grid.h)) - 1);
  const int j1 = std::min(grid.ny - 1,
                          static_cast<int>(std::ceil((bb.hi.y - grid.lo.y) / grid.h)) + 1);
  const double cut = 0.5 * grid.h * (1.0 + 1e-12);
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i)
      if (project_core(grid.node(i, j), *g).distance <= cut)
        mask[static_cast<std::size_t>(grid.index(i, j))] = 1;
  return mask;
}

GridPoissonProblem make_poisson_problem(const Grid& grid,
                                        const std::function<double(Point2)>& f,
                                        const EmbeddedGraph* sigma) {
  GridPoissonProblem p;
  p.grid = grid;
  p.mask = rasterize(sigma, grid);
  p.f.resize(static_cast<std::size_t>(grid.node_count()));
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const double v = f(grid.node(i, j));
      if (!std::isfinite(v)) throw ArgumentError("make_poisson_problem: non-finite source");
      p.f[static_cast<std::size_t>(grid.index(i, j))] = v;
    }
  return p;
}

GridSolution solve_poisson(const GridPoissonProblem& p, double tol) {
  const Grid& gr = p.grid;
  if (static_cast<int>(p.f.size()) != gr.node_count() ||
      static_cast<int>(p.mask.size()) != gr.node_count())
    throw ArgumentError("solve_poisson: array sizes do not match the grid");
  if (!(tol > 0.0)) throw ArgumentError("solve_poisson: tolerance must be > 0");

  // Number the free nodes.
  std::vector<int> free_id(p.mask.size(), -1);
  int nfree = 0;
  for (std::size_t k = 0; k < p.mask.size(); ++k)
    if (!p.mask[k]) free_id[k] = nfree++;

  GridSolution sol;
  sol.u.assign(p.mask.size(), 0.0);
  sol.iterations = 1;
  if (nfree == 0) return sol;

  const double ih2 = 1.0 / (gr.h * gr.h);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(5 * nfree));
  Eigen::VectorXd rhs(nfree);
  for (int j = 0; j < gr.ny; ++j)
    for (int i = 0; i < gr.nx; ++i) {
      const int row = free_id[static_cast<std::size_t>(gr.index(i, j))];
      if (row < 0) continue;
      trip.emplace_back(row, row, 4.0 * ih2);
      const int nb[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
      for (const auto& q : nb) {
        const int col = free_id[static_cast<std::size_t>(gr.index(q[0], q[1]))];
        if (col >= 0) trip.emplace_back(row, col, -ih2);
      }
      rhs[row] = p.f[static_cast<std::size_t>(gr.index(i, j))];
    }
  Eigen::SparseMatrix<double> A(nfree, nfree);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
  if (ldlt.info() != Eigen::Success)
    throw SolverError("solve_poisson: factorization failed");
  const Eigen::VectorXd x = ldlt.solve(rhs);
  if (ldlt.info() != Eigen::Success) throw SolverError("solve_poisson: solve failed");

  for (std::size_t k = 0; k < p.mask.size(); ++k)
    if (free_id[k] >= 0) sol.u[k] = x[free_id[k]];

  double fmax = 0.0;
  for (double v : p.f) fmax = std::max(fmax, std::abs(v));
  double res = 0.0;
  for (int j = 1; j < gr.ny - 1; ++j)
    for (int i = 1; i < gr.nx - 1; ++i) {
      const std::size_t k = static_cast<std::size_t>(gr.index(i, j));
      if (p.mask[k]) continue;
      const double lap = (sol.u[static_cast<std::size_t>(gr.index(i - 1, j))] +
                          sol.u[static_cast<std::size_t>(gr.index(i + 1, j))] +
                          sol.u[static_cast<std::size_t>(gr.index(i, j - 1))] +
                          sol.u[static_cast<std::size_t>(gr.index(i, j + 1))] -
                          4.0 * sol.u[k]) * ih2;
      res = std::max(res, std::abs(p.f[k] + lap));
    }
  sol.residual = res;
  if (res > tol * std::max(1.0, fmax))
    throw SolverError("solve_poisson: residual " + std::to_string(res) +
                      " exceeds the tolerance");
  return sol;
}

double compliance_value(const GridSolution& sol, const GridPoissonProblem& p,
                        double lambda, const EmbeddedGraph* g) {
  if (lambda < 0.0) throw ArgumentError("compliance_value: lambda must be >= 0");
  std::vector<double> terms(sol.u.size());
  for (std::size_t k = 0; k < sol.u.size(); ++k) terms[k] = sol.u[k] * p.f[k];
  const double h2 = p.grid.h * p.grid.h;
  return h2 * pairwise_sum(terms) + (g ? lambda * graph_length(*g) : 0.0);
}

double dual_gap(const GridSolution& sol, const GridPoissonProblem& p) {
  const Grid& gr = p.grid;
  const double h2 = gr.h * gr.h;
  std::vector<double> fu(sol.u.size());
  for (std::size_t k = 0; k < sol.u.size(); ++k) fu[k] = sol.u[k] * p.f[k];
  const double integral_fu = h2 * pairwise_sum(fu);

  std::vector<double> links;
  links.reserve(sol.u.size() * 2);
  for (int j = 0; j < gr.ny; ++j)
    for (int i = 0; i + 1 < gr.nx; ++i) {
      const double d = sol.u[static_cast<std::size_t>(gr.index(i + 1, j))] -
                       sol.u[static_cast<std::size_t>(gr.index(i, j))];
      links.push_back(d * d);
    }
  for (int j = 0; j + 1 < gr.ny; ++j)
    for (int i = 0; i < gr.nx; ++i) {
      const double d = sol.u[static_cast<std::size_t>(gr.index(i, j + 1))] -
                       sol.u[static_cast<std::size_t>(gr.index(i, j))];
      links.push_back(d * d);
    }
  const double energy = pairwise_sum(links);  // h^2 * (d/h)^2 = d^2
  return std::abs((2.0 * integral_fu - energy) - integral_fu);
}

namespace {

// Bilinear interpolation; requires all four stencil corners unmasked.
double sample_u(const GridSolution& sol, const GridPoissonProblem& p, Point2 x) {
  const Grid& gr = p.grid;
  const double fx = (x.x - gr.lo.x) / gr.h;
  const double fy = (x.y - gr.lo.y) / gr.h;
  const int i = static_cast<int>(std::floor(fx));
  const int j = static_cast<int>(std::floor(fy));
  if (i < 0 || j < 0 || i + 1 >= gr.nx || j + 1 >= gr.ny)
    throw GeometryError("normal_jump: sample point outside the grid");
  for (int dj = 0; dj <= 1; ++dj)
    for (int di = 0; di <= 1; ++di)
      if (p.mask[static_cast<std::size_t>(gr.index(i + di, j + dj))])
        throw GeometryError("normal_jump: insufficient clearance around the edge");
  const double tx = fx - i, ty = fy - j;
  const double u00 = sol.u[static_cast<std::size_t>(gr.index(i, j))];
  const double u10 = sol.u[static_cast<std::size_t>(gr.index(i + 1, j))];
  const double u01 = sol.u[static_cast<std::size_t>(gr.index(i, j + 1))];
  const double u11 = sol.u[static_cast<std::size_t>(gr.index(i + 1, j + 1))];
  return (1 - tx) * (1 - ty) * u00 + tx * (1 - ty) * u10 + (1 - tx) * ty * u01 +
         tx * ty * u11;
}

// One-sided derivative at the edge from values at 2h, 3h, 4h along dir
// (quadratic fit through the three offsets, evaluated at 0).
double one_sided_dn(const GridSolution& sol, const GridPoissonProblem& p, Point2 foot,
                    Vec2 dir) {
  const double h = p.grid.h;
  const double u2 = sample_u(sol, p, foot + (2.0 * h) * dir);
  const double u3 = sample_u(sol, p, foot + (3.0 * h) * dir);
  const double u4 = sample_u(sol, p, foot + (4.0 * h) * dir);
  return (-3.5 * u2 + 6.0 * u3 - 2.5 * u4) / h;
}

}  // namespace

std::vector<std::pair<double, double>> normal_jump(const GridSolution& sol,
                                                   const GridPoissonProblem& p,
                                                   const EmbeddedGraph& g, int edge_id,
                                                   int samples) {
  if (edge_id < 0 || edge_id >= static_cast<int>(g.edges().size()))
    throw ArgumentError("normal_jump: edge index out of range");
  if (samples < 1) throw ArgumentError("normal_jump: need at least one station");
  const EdgeRef e = g.edges()[static_cast<std::size_t>(edge_id)];
  const Point2 a = g.vertex(e.a), b = g.vertex(e.b);
  const double len = distance(a, b);
  const Vec2 tau = normalized(b - a);
  const Vec2 n = perp(tau);
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    const double t = (s + 0.5) / samples;
    const Point2 foot = (1.0 - t) * a + t * b;
    // The plus side is the one whose external normal is n, i.e. the side n
    // points away from; its trace is probed along -n.
    const double gp = one_sided_dn(sol, p, foot, -1.0 * n);
    const double gm = one_sided_dn(sol, p, foot, n);
    out.emplace_back(t * len, gp * gp - gm * gm);
  }
  return out;
}

double shape_derivative(const GridSolution& sol, const GridPoissonProblem& p,
                        const EmbeddedGraph& g, double lambda, const OnSigmaField& X) {
  if (static_cast<int>(X.at_vertex.size()) != g.vertex_count())
    throw ArgumentError("shape_derivative: field size mismatch");
  double pde = 0.0;
  const auto& es = g.edges();
  for (std::size_t e = 0; e < es.size(); ++e) {
    const Vec2 xa = X.at_vertex[static_cast<std::size_t>(es[e].a)];
    const Vec2 xb = X.at_vertex[static_cast<std::size_t>(es[e].b)];
    if (norm(xa) == 0.0 && norm(xb) == 0.0) continue;  // outside the support of X
    const Point2 a = g.vertex(es[e].a), b = g.vertex(es[e].b);
    const double len = distance(a, b);
    const Vec2 n = perp(normalized(b - a));
    const int samples = std::max(4, static_cast<int>(std::ceil(len / p.grid.h)));
    const auto jump = normal_jump(sol, p, g, static_cast<int>(e), samples);
    double acc = 0.0;
    for (int s = 0; s < samples; ++s) {
      const double t = (s + 0.5) / samples;
      const Vec2 xs = (1.0 - t) * xa + t * xb;
      acc += jump[static_cast<std::size_t>(s)].second * dot(xs, n);
    }
    pde += acc * (len / samples);
  }
  return pde - lambda * curvature_pairing(g, X);
}

FdComplianceResult fd_compliance_oracle(const GridPoissonProblem& p, const EmbeddedGraph& g,
                                        double lambda, const OnSigmaField& X, double eps,
                                        double tol) {
  if (!(eps >= 2.0 * p.grid.h))
    throw ArgumentError("fd_compliance_oracle: eps must be >= 2h so the mask moves");
  auto value_at = [&](double step) {
    const EmbeddedGraph gs = g.displaced(X.at_vertex, step);
    GridPoissonProblem ps = p;
    ps.mask = rasterize(&gs, p.grid);
    const GridSolution sols = solve_poisson(ps, tol);
    return compliance_value(sols, ps, lambda, &gs);
  };
  FdComplianceResult out;
  out.derivative = (value_at(eps) - value_at(-eps)) / (2.0 * eps);
  const double half = (value_at(0.5 * eps) - value_at(-0.5 * eps)) / eps;
  out.noise = std::abs(out.derivative - half);
  return out;
}

}  // namespace adf
