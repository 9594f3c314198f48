#include "adf/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "adf/errors.hpp"

namespace adf {

namespace {

struct IncidentEdge {
  int edge_id;
  int other;
};

std::vector<std::vector<IncidentEdge>> incidence(const EmbeddedGraph& g) {
  std::vector<std::vector<IncidentEdge>> inc(static_cast<std::size_t>(g.vertex_count()));
  const auto& es = g.edges();
  for (std::size_t e = 0; e < es.size(); ++e) {
    inc[static_cast<std::size_t>(es[e].a)].push_back({static_cast<int>(e), es[e].b});
    inc[static_cast<std::size_t>(es[e].b)].push_back({static_cast<int>(e), es[e].a});
  }
  return inc;
}

// Polyline of an unvisited chain starting from `start` along `first`;
// follows degree-2 vertices until a non-degree-2 vertex or the start is
// reached again (cycle). Returns the visited vertex sequence.
std::vector<int> walk_chain(const EmbeddedGraph& g,
                            const std::vector<std::vector<IncidentEdge>>& inc,
                            std::vector<char>& edge_done, int start, IncidentEdge first) {
  std::vector<int> seq{start};
  edge_done[static_cast<std::size_t>(first.edge_id)] = 1;
  int prev_edge = first.edge_id;
  int cur = first.other;
  seq.push_back(cur);
  while (cur != start && g.degree(cur) == 2) {
    const auto& cand = inc[static_cast<std::size_t>(cur)];
    const IncidentEdge next = cand[0].edge_id == prev_edge ? cand[1] : cand[0];
    edge_done[static_cast<std::size_t>(next.edge_id)] = 1;
    prev_edge = next.edge_id;
    cur = next.other;
    seq.push_back(cur);
  }
  return seq;
}

double sup_norm(const std::vector<Vec2>& v) {
  double m = 0.0;
  for (const Vec2& g : v) m = std::max({m, std::abs(g.x), std::abs(g.y)});
  return m;
}

}  // namespace

EmbeddedGraph resample(const EmbeddedGraph& g, double target_edge_len) {
  if (!(target_edge_len > g.eps_len()))
    throw ArgumentError("resample: target edge length must exceed eps_len");

  const auto inc = incidence(g);
  std::vector<char> edge_done(g.edges().size(), 0);

  std::vector<Point2> vs;
  std::vector<EdgeRef> es;
  std::set<std::pair<int, int>> edge_set;
  // Vertices preserved exactly: every degree != 2 vertex, plus the anchor
  // of each pure cycle.
  std::vector<int> keep_id(static_cast<std::size_t>(g.vertex_count()), -1);
  auto keep = [&](int v) {
    if (keep_id[static_cast<std::size_t>(v)] < 0) {
      keep_id[static_cast<std::size_t>(v)] = static_cast<int>(vs.size());
      vs.push_back(g.vertex(v));
    }
    return keep_id[static_cast<std::size_t>(v)];
  };
  auto add_edge = [&](int a, int b) {
    es.push_back({a, b});
    edge_set.insert({std::min(a, b), std::max(a, b)});
  };

  auto emit_chain = [&](const std::vector<int>& seq) {
    std::vector<double> arclen{0.0};
    for (std::size_t i = 1; i < seq.size(); ++i)
      arclen.push_back(arclen.back() + distance(g.vertex(seq[i - 1]), g.vertex(seq[i])));
    const double total = arclen.back();
    const bool closed = seq.front() == seq.back();
    int n = std::max(closed ? 3 : 1,
                     static_cast<int>(std::llround(total / target_edge_len)));
    const int a0 = keep(seq.front());
    const int a1 = keep(seq.back());
    if (!closed && n == 1 &&
        edge_set.count({std::min(a0, a1), std::max(a0, a1)}))
      n = 2;  // a parallel chain already produced this direct edge
    int prev = a0;
    std::size_t cursor = 1;
    for (int j = 1; j < n; ++j) {
      const double s = total * static_cast<double>(j) / static_cast<double>(n);
      while (arclen[cursor] < s) ++cursor;
      const double seg = arclen[cursor] - arclen[cursor - 1];
      const double t = seg > 0.0 ? (s - arclen[cursor - 1]) / seg : 0.0;
      const Point2 p = (1.0 - t) * g.vertex(seq[cursor - 1]) + t * g.vertex(seq[cursor]);
      const int id = static_cast<int>(vs.size());
      vs.push_back(p);
      add_edge(prev, id);
      prev = id;
    }
    add_edge(prev, a1);
  };

  // Chains between branch/endpoint anchors.
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (g.degree(v) == 2) continue;
    for (const IncidentEdge& ie : inc[static_cast<std::size_t>(v)])
      if (!edge_done[static_cast<std::size_t>(ie.edge_id)])
        emit_chain(walk_chain(g, inc, edge_done, v, ie));
  }
  // Remaining components are pure cycles; anchor each at its lowest index.
  for (int v = 0; v < g.vertex_count(); ++v)
    for (const IncidentEdge& ie : inc[static_cast<std::size_t>(v)])
      if (!edge_done[static_cast<std::size_t>(ie.edge_id)])
        emit_chain(walk_chain(g, inc, edge_done, v, ie));

  return EmbeddedGraph(std::move(vs), std::move(es), g.eps_len());
}

Trajectory minimize(const EmbeddedGraph& g0, const QuadratureMeasure& mu,
                    double lambda, const DescentConfig& cfg) {
  if (!(cfg.step0 > 0.0)) throw ArgumentError("minimize: step0 must be > 0");
  if (!(cfg.backtrack > 0.0 && cfg.backtrack < 1.0))
    throw ArgumentError("minimize: backtrack factor must be in (0,1)");
  if (cfg.max_iters < 1) throw ArgumentError("minimize: max_iters must be >= 1");
  if (!(cfg.quad_h > 0.0)) throw ArgumentError("minimize: quad_h must be > 0");
  if (cfg.resample_every < 0) throw ArgumentError("minimize: resample_every must be >= 0");
  if (cfg.resample_every > 0 && !(cfg.target_edge_len > 0.0))
    throw ArgumentError("minimize: resampling needs a positive target edge length");
  if (!(cfg.stop_residual > 0.0)) throw ArgumentError("minimize: stop_residual must be > 0");

  Trajectory traj;
  EmbeddedGraph g = g0;
  double f = functional_value(g, mu, lambda);
  std::vector<Vec2> grad = shape_gradient(g, mu, lambda);
  double res = sup_norm(grad);
  traj.iterates.push_back({g, f, res, 0.0});

  double step = cfg.step0;
  const double min_step = cfg.step0 * 1e-12;
  for (int it = 0; it < cfg.max_iters; ++it) {
    if (res <= cfg.stop_residual) {
      traj.converged = true;
      return traj;
    }
    // Backtracking line search along -grad with an Armijo decrease bound.
    double slope = 0.0;
    for (const Vec2& gv : grad) slope += norm2(gv);
    bool accepted = false;
    while (step >= min_step) {
      const EmbeddedGraph trial = [&]() -> EmbeddedGraph {
        try {
          return g.displaced(grad, -step);
        } catch (const Error&) {
          return g;  // degenerate trial (collapsed edge): treat as rejected
        }
      }();
      if (trial.vertex_count() == g.vertex_count()) {
        const double ft = functional_value(trial, mu, lambda);
        if (ft <= f - 1e-4 * step * slope && ft < f) {
          g = trial;
          f = ft;
          accepted = true;
          break;
        }
      }
      step *= cfg.backtrack;
    }
    if (!accepted) {
      traj.diagnostic = "line search failed at the minimum step; gradient residual " +
                        std::to_string(res);
      return traj;
    }

    const double used = step;
    if (cfg.resample_every > 0 && (it + 1) % cfg.resample_every == 0) {
      const EmbeddedGraph rg = resample(g, cfg.target_edge_len);
      const double fr = functional_value(rg, mu, lambda);
      if (fr <= f) {  // keep the trajectory monotone
        g = rg;
        f = fr;
      }
    }
    grad = shape_gradient(g, mu, lambda);
    res = sup_norm(grad);
    traj.iterates.push_back({g, f, res, used});
    // Allow the step to grow again after an accepted move.
    step = std::min(cfg.step0, step / cfg.backtrack);
  }
  traj.converged = res <= cfg.stop_residual;
  if (!traj.converged) traj.diagnostic = "iteration budget exhausted";
  return traj;
}

}  // namespace adf
