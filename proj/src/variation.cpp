#include "adf/variation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>

#include "adf/numerics.hpp"

namespace adf {

OnSigmaField OnSigmaField::hat(const EmbeddedGraph& g, int vertex, Vec2 e) {
  if (vertex < 0 || vertex >= g.vertex_count())
    throw ArgumentError("hat: vertex index out of range");
  OnSigmaField X = zero(g);
  X.at_vertex[static_cast<std::size_t>(vertex)] = e;
  return X;
}

Vec2 OnSigmaField::on_edge(const EmbeddedGraph& g, int edge_id, double t) const {
  const EdgeRef e = g.edges()[static_cast<std::size_t>(edge_id)];
  const Vec2 xa = at_vertex[static_cast<std::size_t>(e.a)];
  const Vec2 xb = at_vertex[static_cast<std::size_t>(e.b)];
  return (1.0 - t) * xa + t * xb;
}

std::vector<Vec2> curvature_atoms(const EmbeddedGraph& g) {
  std::vector<Vec2> atoms(static_cast<std::size_t>(g.vertex_count()));
  for (const EdgeRef& e : g.edges()) {
    const Vec2 tau = normalized(g.vertex(e.b) - g.vertex(e.a));
    atoms[static_cast<std::size_t>(e.a)] += tau;
    atoms[static_cast<std::size_t>(e.b)] -= tau;
  }
  return atoms;
}

double curvature_pairing(const EmbeddedGraph& g, const OnSigmaField& X) {
  if (static_cast<int>(X.at_vertex.size()) != g.vertex_count())
    throw ArgumentError("curvature_pairing: field size mismatch");
  const std::vector<Vec2> atoms = curvature_atoms(g);
  std::vector<double> terms(atoms.size());
  for (std::size_t v = 0; v < atoms.size(); ++v) terms[v] = dot(X.at_vertex[v], atoms[v]);
  return pairwise_sum(terms);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Stationary: return "stationary";
    case Verdict::NonStationary: return "non-stationary";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

double average_distance(const EmbeddedGraph& g, const QuadratureMeasure& mu) {
  return blocked_sum(mu.size(), [&](std::size_t i) {
    const WeightedPoint& s = mu.samples[i];
    return s.w * project_core(s.p, g).distance;
  });
}

double functional_value(const EmbeddedGraph& g, const QuadratureMeasure& mu, double lambda) {
  if (lambda < 0.0) throw ArgumentError("functional_value: lambda must be >= 0");
  return average_distance(g, mu) + lambda * graph_length(g);
}

VariationReport first_variation(const EmbeddedGraph& g, const QuadratureMeasure& mu,
                                double lambda, const OnSigmaField& X, double dist_floor) {
  if (lambda < 0.0) throw ArgumentError("first_variation: lambda must be >= 0");
  if (static_cast<int>(X.at_vertex.size()) != g.vertex_count())
    throw ArgumentError("first_variation: field size mismatch");
  VariationReport rep;
  rep.integral_term = blocked_sum(mu.size(), [&](std::size_t i) {
    const WeightedPoint& s = mu.samples[i];
    const ProjectionResult p = project_core(s.p, g);
    if (p.distance < dist_floor) return 0.0;  // direction undefined on Sigma
    return s.w * dot(X.on_edge(g, p.edge_id, p.param), p.direction);
  });
  rep.curvature_term = curvature_pairing(g, X);
  rep.total = rep.integral_term - lambda * rep.curvature_term;
  return rep;
}

std::vector<Vec2> shape_gradient(const EmbeddedGraph& g, const QuadratureMeasure& mu,
                                 double lambda) {
  if (lambda < 0.0) throw ArgumentError("shape_gradient: lambda must be >= 0");
  const std::size_t nv = static_cast<std::size_t>(g.vertex_count());
  const std::size_t nb = block_count(mu.size());
  // Per-block accumulators merged in block order keep the result
  // independent of the thread count.
  std::vector<std::vector<Vec2>> partial(nb, std::vector<Vec2>(nv));
  for_each_block(mu.size(), [&](std::size_t b, std::size_t lo, std::size_t hi) {
    std::vector<Vec2>& acc = partial[b];
    for (std::size_t i = lo; i < hi; ++i) {
      const WeightedPoint& s = mu.samples[i];
      const ProjectionResult p = project_core(s.p, g);
      if (p.distance < kDistFloor) continue;
      const EdgeRef e = g.edges()[static_cast<std::size_t>(p.edge_id)];
      acc[static_cast<std::size_t>(e.a)] += (s.w * (1.0 - p.param)) * p.direction;
      acc[static_cast<std::size_t>(e.b)] += (s.w * p.param) * p.direction;
    }
  });
  std::vector<Vec2> grad(nv);
  for (std::size_t b = 0; b < nb; ++b)
    for (std::size_t v = 0; v < nv; ++v) grad[v] += partial[b][v];
  const std::vector<Vec2> atoms = curvature_atoms(g);
  for (std::size_t v = 0; v < nv; ++v) grad[v] -= lambda * atoms[v];
  return grad;
}

namespace {

VariationReport finish_verdict(VariationReport rep, const QuadratureMeasure& mu, double tol) {
  if (mu.atomic) {
    rep.verdict = Verdict::Inconclusive;
    rep.warnings.push_back(
        "measure has atoms: the stationarity classification hypothesis "
        "(measure vanishes on length-finite sets) is not satisfied");
  } else {
    rep.verdict = rep.residual_norm <= tol ? Verdict::Stationary : Verdict::NonStationary;
  }
  return rep;
}

}  // namespace

VariationReport stationarity_residual(const EmbeddedGraph& g, const QuadratureMeasure& mu,
                                      double lambda, double tol) {
  const std::vector<Vec2> grad = shape_gradient(g, mu, lambda);
  VariationReport rep;
  for (std::size_t v = 0; v < grad.size(); ++v) {
    rep.basis_residuals.emplace_back("v" + std::to_string(v) + ".x", grad[v].x);
    rep.basis_residuals.emplace_back("v" + std::to_string(v) + ".y", grad[v].y);
    rep.residual_norm = std::max({rep.residual_norm, std::abs(grad[v].x), std::abs(grad[v].y)});
  }
  return finish_verdict(std::move(rep), mu, tol);
}

VariationReport stationarity_residual(const EmbeddedGraph& g, const QuadratureMeasure& mu,
                                      double lambda, const std::vector<OnSigmaField>& basis,
                                      double tol) {
  if (basis.empty()) throw ArgumentError("stationarity_residual: empty basis");
  VariationReport rep;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const VariationReport one = first_variation(g, mu, lambda, basis[k]);
    rep.basis_residuals.emplace_back("field" + std::to_string(k), one.total);
    rep.residual_norm = std::max(rep.residual_norm, std::abs(one.total));
  }
  return finish_verdict(std::move(rep), mu, tol);
}

namespace {

// Graph with a point on Sigma promoted to a vertex (splitting its edge if
// needed), plus the index of that vertex.
std::pair<EmbeddedGraph, int> with_vertex_at(const EmbeddedGraph& g, const ProjectionResult& p) {
  const EdgeRef e = g.edges()[static_cast<std::size_t>(p.edge_id)];
  const double snap = std::max(g.eps_len(), 1e-12 * g.diameter());
  if (distance(p.foot, g.vertex(e.a)) <= snap) return {g, e.a};
  if (distance(p.foot, g.vertex(e.b)) <= snap) return {g, e.b};
  std::vector<Point2> vs = g.vertices();
  std::vector<EdgeRef> es = g.edges();
  const int mid = static_cast<int>(vs.size());
  vs.push_back(p.foot);
  es[static_cast<std::size_t>(p.edge_id)] = {e.a, mid};
  es.push_back({mid, e.b});
  return {EmbeddedGraph(std::move(vs), std::move(es), g.eps_len()), mid};
}

}  // namespace

SlopeProbeResult slope_probe(const EmbeddedGraph& g, const QuadratureMeasure& mu,
                             double lambda, Point2 attach, Vec2 dir,
                             const std::vector<double>& eps_list) {
  if (eps_list.empty()) throw ArgumentError("slope_probe: empty eps list");
  if (!(eps_list.back() > 0.0)) throw ArgumentError("slope_probe: eps values must be positive");
  for (std::size_t i = 0; i + 1 < eps_list.size(); ++i)
    if (!(eps_list[i] > eps_list[i + 1]))
      throw ArgumentError("slope_probe: eps values must be decreasing");
  const Vec2 u = normalized(dir);
  if (norm(u) == 0.0) throw ArgumentError("slope_probe: zero direction");

  const double tol = 1e-9 * (1.0 + g.diameter());
  const ProjectionResult at = project_core(attach, g);
  if (at.distance > tol) throw ArgumentError("slope_probe: attach point is not on the graph");

  const double f0 = functional_value(g, mu, lambda);
  SlopeProbeResult out;
  for (double eps : eps_list) {
    const Point2 tip = attach + eps * u;
    // The spike must project back to the attach point on the original graph.
    const ProjectionResult back = project_core(tip, g);
    if (distance(back.foot, at.foot) > tol + 1e-9 * eps)
      throw ArgumentError("slope_probe: spike does not project back to the attach point");
    auto [base, anchor] = with_vertex_at(g, at);
    std::vector<Point2> vs = base.vertices();
    std::vector<EdgeRef> es = base.edges();
    const int tip_id = static_cast<int>(vs.size());
    vs.push_back(tip);
    es.push_back({anchor, tip_id});
    const EmbeddedGraph spiked(std::move(vs), std::move(es), g.eps_len());
    out.ratios.emplace_back(eps, (functional_value(spiked, mu, lambda) - f0) / eps);
  }

  // Extrapolate with the ratio = a + b*sqrt(eps) model observed on
  // uniform measures (the captured mass shrinks like sqrt(eps)).
  if (out.ratios.size() == 1) {
    out.extrapolated = out.ratios[0].second;
  } else {
    double s1 = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
    for (const auto& [e, r] : out.ratios) {
      const double x = std::sqrt(e);
      s1 += 1; sx += x; sxx += x * x; sy += r; sxy += x * r;
    }
    const double det = s1 * sxx - sx * sx;
    out.extrapolated = (sy * sxx - sx * sxy) / det;
  }
  return out;
}

namespace {

std::vector<std::vector<int>> adjacency(const EmbeddedGraph& g) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.vertex_count()));
  for (const EdgeRef& e : g.edges()) {
    adj[static_cast<std::size_t>(e.a)].push_back(e.b);
    adj[static_cast<std::size_t>(e.b)].push_back(e.a);
  }
  return adj;
}

bool consecutive_in(const std::deque<int>& chain, int a, int b) {
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    if ((chain[i] == a && chain[i + 1] == b) || (chain[i] == b && chain[i + 1] == a))
      return true;
  return false;
}

bool on_cycle(const EmbeddedGraph& g, int v) {
  const auto adj = adjacency(g);
  for (int u : adj[static_cast<std::size_t>(v)]) {
    // Reach u from v without the direct edge (one copy of it removed).
    std::vector<char> seen(static_cast<std::size_t>(g.vertex_count()), 0);
    seen[static_cast<std::size_t>(v)] = 1;
    std::queue<int> q;
    bool skipped = false;
    for (int w : adj[static_cast<std::size_t>(v)]) {
      if (w == u && !skipped) { skipped = true; continue; }
      if (!seen[static_cast<std::size_t>(w)]) { seen[static_cast<std::size_t>(w)] = 1; q.push(w); }
    }
    while (!q.empty()) {
      const int w = q.front(); q.pop();
      if (w == u) return true;
      for (int z : adj[static_cast<std::size_t>(w)])
        if (!seen[static_cast<std::size_t>(z)]) { seen[static_cast<std::size_t>(z)] = 1; q.push(z); }
    }
    if (seen[static_cast<std::size_t>(u)]) return true;
  }
  return false;
}

}  // namespace

LoopCutResult loop_cut_probe(const EmbeddedGraph& g, const QuadratureMeasure& mu,
                             double lambda, int loop_vertex,
                             const std::vector<double>& eps_list) {
  if (loop_vertex < 0 || loop_vertex >= g.vertex_count())
    throw ArgumentError("loop_cut_probe: vertex index out of range");
  if (!on_cycle(g, loop_vertex))
    throw TopologyError("loop_cut_probe: vertex does not lie on a cycle");
  const auto adj = adjacency(g);
  const double f0 = functional_value(g, mu, lambda);

  LoopCutResult out;
  for (double eps : eps_list) {
    if (!(eps > 0.0)) throw ArgumentError("loop_cut_probe: eps must be > 0");
    // Grow a chain of degree-2 vertices around loop_vertex until its
    // end-to-end chord reaches eps.
    std::deque<int> chain{loop_vertex};
    bool extend_front = true;
    while (distance(g.vertex(chain.front()), g.vertex(chain.back())) < eps) {
      const int end = extend_front ? chain.front() : chain.back();
      const int prev = chain.size() > 1 ? (extend_front ? chain[1] : chain[chain.size() - 2]) : -1;
      int next = -1;
      if (g.degree(end) == 2)
        for (int w : adj[static_cast<std::size_t>(end)])
          if (w != prev) next = w;
      if (next == -1 ||
          std::find(chain.begin(), chain.end(), next) != chain.end())
        throw TopologyError("loop_cut_probe: cannot grow a removable sub-arc of the requested size");
      if (extend_front) chain.push_front(next); else chain.push_back(next);
      extend_front = !extend_front;
    }
    if (chain.size() < 2)
      throw TopologyError("loop_cut_probe: eps below the local edge length");

    // Remove the chain's edges and interior vertices.
    std::vector<char> drop_vertex(static_cast<std::size_t>(g.vertex_count()), 0);
    for (std::size_t i = 1; i + 1 < chain.size(); ++i)
      drop_vertex[static_cast<std::size_t>(chain[i])] = 1;
    std::vector<char> in_chain(static_cast<std::size_t>(g.vertex_count()), 0);
    for (int v : chain) in_chain[static_cast<std::size_t>(v)] = 1;

    std::vector<int> remap(static_cast<std::size_t>(g.vertex_count()), -1);
    std::vector<Point2> vs;
    for (int v = 0; v < g.vertex_count(); ++v)
      if (!drop_vertex[static_cast<std::size_t>(v)]) {
        remap[static_cast<std::size_t>(v)] = static_cast<int>(vs.size());
        vs.push_back(g.vertex(v));
      }
    std::vector<EdgeRef> es;
    for (const EdgeRef& e : g.edges()) {
      const bool removed = in_chain[static_cast<std::size_t>(e.a)] &&
                           in_chain[static_cast<std::size_t>(e.b)] &&
                           consecutive_in(chain, e.a, e.b);
      if (removed) continue;
      if (drop_vertex[static_cast<std::size_t>(e.a)] || drop_vertex[static_cast<std::size_t>(e.b)])
        continue;
      es.push_back({remap[static_cast<std::size_t>(e.a)], remap[static_cast<std::size_t>(e.b)]});
    }
    EmbeddedGraph cut = [&] {
      try {
        return EmbeddedGraph(std::move(vs), std::move(es), g.eps_len());
      } catch (const ValidationError&) {
        throw TopologyError("loop_cut_probe: removing the sub-arc disconnects the graph");
      }
    }();
    const double diam = distance(g.vertex(chain.front()), g.vertex(chain.back()));
    out.deltas.emplace_back(diam, functional_value(cut, mu, lambda) - f0);
  }
  return out;
}

QuadratureMeasure exclude_near_ridge(const EmbeddedGraph& g, const QuadratureMeasure& mu,
                                     double margin, double* excluded_mass) {
  const double ridge_tol = default_ridge_tol(g);
  QuadratureMeasure kept;
  kept.atomic = mu.atomic;
  double excluded = 0.0;
  std::vector<double> ws;
  for (const WeightedPoint& s : mu.samples) {
    const ProjectionResult p = project(s.p, g, ridge_tol);
    if (p.margin < margin) {
      excluded += s.w;
    } else {
      kept.samples.push_back(s);
      ws.push_back(s.w);
    }
  }
  kept.total_mass = pairwise_sum(ws);
  if (excluded_mass) *excluded_mass = excluded;
  return kept;
}

FdOracleResult fd_variation_oracle(const EmbeddedGraph& g, const QuadratureMeasure& mu,
                                   double lambda, const OnSigmaField& X, double step) {
  if (!(step > 0.0)) throw ArgumentError("fd_variation_oracle: step must be > 0");
  FdOracleResult out;
  const QuadratureMeasure kept = exclude_near_ridge(g, mu, 10.0 * step, &out.excluded_mass);
  const double fp = functional_value(g.displaced(X.at_vertex, step), kept, lambda);
  const double fm = functional_value(g.displaced(X.at_vertex, -step), kept, lambda);
  out.derivative = (fp - fm) / (2.0 * step);
  return out;
}

}  // namespace adf
