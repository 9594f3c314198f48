#pragma once

#include <memory>
#include <vector>

#include "adf/geometry.hpp"

namespace adf {

// A planar region built from primitives and set operations.
// Boundary points count as inside.
class Region {
 public:
  enum class Kind {
    Disk,
    Rectangle,
    Polygon,
    AnnularSector,
    RadialGraphSector,
    Union,
    Difference,
  };

  static Region disk(Point2 center, double radius);
  static Region rectangle(Point2 corner_min, Point2 corner_max);
  static Region polygon(std::vector<Point2> ccw_vertices);
  // Angles are measured from ref_angle; the span [angle_start, angle_end]
  // must be increasing and at most a full turn. r_in may be 0 (disk sector).
  static Region annular_sector(Point2 center, double r_in, double r_out,
                               double angle_start, double angle_end, double ref_angle = 0.0);
  // Polar-graph region about `center`: for angles in [angle_start, angle_end],
  // radius between the sampled inner and outer radius functions (uniform
  // angular samples including both endpoints, linearly interpolated).
  static Region radial_graph_sector(Point2 center, double angle_start, double angle_end,
                                    std::vector<double> inner_radius,
                                    std::vector<double> outer_radius);
  static Region union_of(std::vector<Region> parts);
  static Region difference(Region keep, Region remove);

  Kind kind() const { return kind_; }
  bool contains(Point2 x) const;
  BoundingBox bounding_box() const;

  // Primitive accessors (meaningful per kind; used by rendering and reports).
  Point2 center() const { return center_; }
  double r_in() const { return r_in_; }
  double r_out() const { return r_out_; }
  double angle_start() const { return a0_; }
  double angle_end() const { return a1_; }
  Point2 corner_min() const { return lo_; }
  Point2 corner_max() const { return hi_; }
  const std::vector<Point2>& polygon_vertices() const { return poly_; }
  const std::vector<Region>& children() const { return children_; }

 private:
  Region() = default;

  Kind kind_ = Kind::Disk;
  Point2 center_;
  double r_in_ = 0.0, r_out_ = 0.0;
  double a0_ = 0.0, a1_ = 0.0;
  Point2 lo_, hi_;
  std::vector<Point2> poly_;
  std::vector<double> inner_, outer_;
  std::vector<Region> children_;
};

struct WeightedPoint {
  Point2 p;
  double w = 0.0;
};

// The measure as a finite collection of weighted sample points.
struct QuadratureMeasure {
  std::vector<WeightedPoint> samples;
  double total_mass = 0.0;
  // True when built from explicit atoms rather than a region discretization.
  // Atomic measures violate the hypothesis under which the stationarity
  // classification is justified, so verdicts become inconclusive.
  bool atomic = false;

  std::size_t size() const { return samples.size(); }
};

// Midpoint rule on the axis-aligned grid of cell size h covering the
// region's bounding box; cells whose center is inside get weight h*h.
// Row-major (y outer, x inner) deterministic ordering.
QuadratureMeasure discretize_region(const Region& r, double h);

QuadratureMeasure from_points(const std::vector<WeightedPoint>& pts);

}  // namespace adf
