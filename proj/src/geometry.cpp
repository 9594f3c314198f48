#include "adf/geometry.hpp"

#include <algorithm>
#include <set>

namespace adf {

namespace {

// Union-find over vertex indices.
struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(static_cast<std::size_t>(n)) {
    for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

struct SegmentHit {
  double dist2;
  double t;
  Point2 foot;
};

SegmentHit closest_on_segment(Point2 x, Point2 a, Point2 b) {
  const Vec2 ab = b - a;
  const double len2 = norm2(ab);
  double t = len2 > 0.0 ? dot(x - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const Point2 foot = a + t * ab;
  return {norm2(foot - x), t, foot};
}

}  // namespace

EmbeddedGraph::EmbeddedGraph(std::vector<Point2> vertices, std::vector<EdgeRef> edges,
                             double eps_len)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), eps_len_(eps_len) {
  const int n = static_cast<int>(vertices_.size());
  if (n < 1) throw ValidationError("graph has no vertices");
  for (const Point2& p : vertices_)
    if (!finite(p)) throw ValidationError("graph vertex with non-finite coordinates");
  if (edges_.empty()) throw ValidationError("graph has no edges");

  degree_.assign(static_cast<std::size_t>(n), 0);
  std::set<std::pair<int, int>> seen;
  DisjointSet ds(n);
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const EdgeRef e = edges_[k];
    if (e.a < 0 || e.a >= n || e.b < 0 || e.b >= n)
      throw ValidationError("edge " + std::to_string(k) + " references an invalid vertex");
    if (e.a == e.b)
      throw ValidationError("edge " + std::to_string(k) + " is a self-loop");
    const auto key = std::minmax(e.a, e.b);
    if (!seen.insert(key).second)
      throw ValidationError("duplicate edge " + std::to_string(k));
    if (distance(vertices_[static_cast<std::size_t>(e.a)], vertices_[static_cast<std::size_t>(e.b)]) < eps_len_)
      throw ValidationError("edge " + std::to_string(k) + " shorter than eps_len");
    ++degree_[static_cast<std::size_t>(e.a)];
    ++degree_[static_cast<std::size_t>(e.b)];
    ds.unite(e.a, e.b);
  }
  const int root = ds.find(0);
  for (int v = 1; v < n; ++v)
    if (ds.find(v) != root) throw ValidationError("graph is not connected");
}

double EmbeddedGraph::edge_length(int e) const {
  const EdgeRef ed = edges_[static_cast<std::size_t>(e)];
  return distance(vertices_[static_cast<std::size_t>(ed.a)], vertices_[static_cast<std::size_t>(ed.b)]);
}

BoundingBox EmbeddedGraph::bounding_box() const {
  BoundingBox bb;
  for (const Point2& p : vertices_) bb.expand(p);
  return bb;
}

double EmbeddedGraph::diameter() const {
  const BoundingBox bb = bounding_box();
  return distance(bb.lo, bb.hi);
}

EmbeddedGraph EmbeddedGraph::with_vertices(std::vector<Point2> vertices) const {
  if (vertices.size() != vertices_.size())
    throw ArgumentError("with_vertices: vertex count mismatch");
  return EmbeddedGraph(std::move(vertices), edges_, eps_len_);
}

EmbeddedGraph EmbeddedGraph::displaced(const std::vector<Vec2>& move, double step) const {
  if (move.size() != vertices_.size())
    throw ArgumentError("displaced: field size mismatch");
  std::vector<Point2> v = vertices_;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += step * move[i];
  return with_vertices(std::move(v));
}

ProjectionResult project_core(Point2 x, const EmbeddedGraph& g) {
  ProjectionResult r;
  double best2 = std::numeric_limits<double>::infinity();
  const auto& vs = g.vertices();
  const auto& es = g.edges();
  for (std::size_t e = 0; e < es.size(); ++e) {
    const SegmentHit hit =
        closest_on_segment(x, vs[static_cast<std::size_t>(es[e].a)], vs[static_cast<std::size_t>(es[e].b)]);
    // Ties broken by smallest (edge_id, param): strict < keeps the earlier edge,
    // and within one edge the closed-form foot is unique.
    if (hit.dist2 < best2) {
      best2 = hit.dist2;
      r.edge_id = static_cast<int>(e);
      r.param = hit.t;
      r.foot = hit.foot;
    }
  }
  r.distance = std::sqrt(best2);
  if (r.distance > 0.0) {
    r.direction = (r.foot - x) * (1.0 / r.distance);
    r.direction_defined = true;
  }
  return r;
}

ProjectionResult project(Point2 x, const EmbeddedGraph& g, double ridge_tol) {
  if (ridge_tol < 0.0) throw ArgumentError("project: ridge_tol must be >= 0");
  ProjectionResult r = project_core(x, g);

  // Second pass: multiplicity (distinct near-minimal feet) and margin
  // (distance to the nearest genuinely different branch).
  const double near = r.distance + ridge_tol * (1.0 + r.distance);
  const double near2 = near * near;
  std::vector<Point2> reps{r.foot};
  double runner_up = std::numeric_limits<double>::infinity();
  const auto& vs = g.vertices();
  const auto& es = g.edges();
  for (std::size_t e = 0; e < es.size(); ++e) {
    const SegmentHit hit =
        closest_on_segment(x, vs[static_cast<std::size_t>(es[e].a)], vs[static_cast<std::size_t>(es[e].b)]);
    if (hit.dist2 <= near2) {
      bool distinct = true;
      for (const Point2& rep : reps)
        if (distance(hit.foot, rep) <= ridge_tol) { distinct = false; break; }
      if (distinct) reps.push_back(hit.foot);
    }
    // Margin considers only feet whose projection direction differs
    // substantially from the best one: alternatives on the same smooth
    // branch (e.g. the far end of an adjacent edge) do not make the
    // distance function non-differentiable.
    if (static_cast<int>(e) != r.edge_id && r.direction_defined && hit.dist2 > 0.0) {
      const double d = std::sqrt(hit.dist2);
      const Vec2 dir = (hit.foot - x) * (1.0 / d);
      if (distance(hit.foot, r.foot) > ridge_tol && dot(dir, r.direction) < 0.95)
        runner_up = std::min(runner_up, d);
    }
  }
  r.multiplicity = static_cast<int>(reps.size());
  r.margin = runner_up - r.distance;
  if (!(r.margin >= 0.0)) r.margin = 0.0;
  return r;
}

double graph_length(const EmbeddedGraph& g) {
  double s = 0.0;
  for (int e = 0; e < g.edge_count(); ++e) s += g.edge_length(e);
  return s;
}

std::vector<Point2> arc_polyline(Point2 center, double radius, double angle_start,
                                 double angle_end, int n) {
  if (radius <= 0.0) throw ArgumentError("arc_polyline: radius must be > 0");
  if (n < 1) throw ArgumentError("arc_polyline: n must be >= 1");
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    // Endpoints exact: evaluate the end angles directly.
    const double a = (i == 0)   ? angle_start
                     : (i == n) ? angle_end
                                : angle_start + (angle_end - angle_start) * i / n;
    pts.push_back(center + radius * Vec2{std::cos(a), std::sin(a)});
  }
  return pts;
}

double default_ridge_tol(const EmbeddedGraph& g) { return 1e-7 * g.diameter(); }

}  // namespace adf
