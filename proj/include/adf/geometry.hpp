#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "adf/errors.hpp"

namespace adf {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double xx, double yy) : x(xx), y(yy) {}

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
};

using Point2 = Vec2;

constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
constexpr double norm2(Vec2 v) { return v.x * v.x + v.y * v.y; }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }
inline Vec2 normalized(Vec2 v) {
  const double n = norm(v);
  return n > 0.0 ? Vec2{v.x / n, v.y / n} : Vec2{0.0, 0.0};
}
// Left-hand normal of v.
constexpr Vec2 perp(Vec2 v) { return {-v.y, v.x}; }
inline bool finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

struct BoundingBox {
  Point2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Point2 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

  void expand(Point2 p) {
    lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y);
  }
  void expand(const BoundingBox& b) { expand(b.lo); expand(b.hi); }
  bool valid() const { return lo.x <= hi.x && lo.y <= hi.y; }
};

struct EdgeRef {
  int a = 0;
  int b = 0;
};

// A connected embedded planar polyline graph: the candidate set.
// Validates its invariants on construction.
class EmbeddedGraph {
 public:
  static constexpr double kDefaultEpsLen = 1e-9;

  EmbeddedGraph(std::vector<Point2> vertices, std::vector<EdgeRef> edges,
                double eps_len = kDefaultEpsLen);

  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::vector<EdgeRef>& edges() const { return edges_; }
  Point2 vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  double edge_length(int e) const;
  int degree(int v) const { return degree_[static_cast<std::size_t>(v)]; }
  double eps_len() const { return eps_len_; }

  BoundingBox bounding_box() const;
  double diameter() const;  // diagonal of the bounding box

  // Same topology, new vertex positions (revalidated).
  EmbeddedGraph with_vertices(std::vector<Point2> vertices) const;
  // Vertices displaced by step * move[i].
  EmbeddedGraph displaced(const std::vector<Vec2>& move, double step) const;

 private:
  std::vector<Point2> vertices_;
  std::vector<EdgeRef> edges_;
  std::vector<int> degree_;
  double eps_len_;
};

struct ProjectionResult {
  int edge_id = -1;
  double param = 0.0;       // position along the edge, in [0,1]
  Point2 foot;              // nearest point on the graph
  double distance = 0.0;
  Vec2 direction;           // (foot - x) / distance
  bool direction_defined = false;
  int multiplicity = 1;     // distinct near-minimal feet (ridge membership when > 1)
  double margin = std::numeric_limits<double>::infinity();  // runner-up distance minus best
};

// Exact nearest point on the graph with ridge diagnostics.
ProjectionResult project(Point2 x, const EmbeddedGraph& g, double ridge_tol);

// Nearest point only (hot path: no multiplicity / margin scan).
ProjectionResult project_core(Point2 x, const EmbeddedGraph& g);

double graph_length(const EmbeddedGraph& g);

// n+1 equally-spaced-in-angle points on the arc; endpoints exact.
std::vector<Point2> arc_polyline(Point2 center, double radius, double angle_start,
                                 double angle_end, int n);

// Default ridge tolerance for a graph: 1e-7 times its diameter.
double default_ridge_tol(const EmbeddedGraph& g);

}  // namespace adf
