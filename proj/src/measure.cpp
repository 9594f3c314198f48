#include "adf/measure.hpp"

#include <algorithm>
#include <cmath>

#include "adf/numerics.hpp"

namespace adf {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Angle of x about c, mapped into [base, base + 2*pi).
double angle_from(Point2 c, Point2 x, double base) {
  double a = std::atan2(x.y - c.y, x.x - c.x);
  while (a < base) a += kTwoPi;
  while (a >= base + kTwoPi) a -= kTwoPi;
  return a;
}

bool on_segment(Point2 p, Point2 a, Point2 b, double eps) {
  const Vec2 ab = b - a;
  const Vec2 ap = p - a;
  if (std::abs(cross(ab, ap)) > eps * norm(ab)) return false;
  const double t = dot(ap, ab);
  return t >= -eps && t <= norm2(ab) + eps;
}

}  // namespace

Region Region::disk(Point2 center, double radius) {
  if (!(radius > 0.0)) throw ValidationError("disk: radius must be > 0");
  Region r;
  r.kind_ = Kind::Disk;
  r.center_ = center;
  r.r_out_ = radius;
  return r;
}

Region Region::rectangle(Point2 corner_min, Point2 corner_max) {
  if (!(corner_min.x < corner_max.x && corner_min.y < corner_max.y))
    throw ValidationError("rectangle: corners must span a positive area");
  Region r;
  r.kind_ = Kind::Rectangle;
  r.lo_ = corner_min;
  r.hi_ = corner_max;
  return r;
}

Region Region::polygon(std::vector<Point2> ccw_vertices) {
  const std::size_t n = ccw_vertices.size();
  if (n < 3) throw ValidationError("polygon: needs at least 3 vertices");
  double area2 = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    area2 += cross(ccw_vertices[i], ccw_vertices[(i + 1) % n]);
  if (!(area2 > 0.0)) throw ValidationError("polygon: vertices must be counter-clockwise with positive area");
  Region r;
  r.kind_ = Kind::Polygon;
  r.poly_ = std::move(ccw_vertices);
  return r;
}

Region Region::annular_sector(Point2 center, double r_in, double r_out,
                              double angle_start, double angle_end, double ref_angle) {
  if (!(r_out > 0.0) || r_in < 0.0 || r_in >= r_out)
    throw ValidationError("annular_sector: need 0 <= r_in < r_out");
  const double span = angle_end - angle_start;
  if (!(span > 0.0) || span > kTwoPi + 1e-12)
    throw ValidationError("annular_sector: angle span must be in (0, 2*pi]");
  Region r;
  r.kind_ = Kind::AnnularSector;
  r.center_ = center;
  r.r_in_ = r_in;
  r.r_out_ = r_out;
  r.a0_ = angle_start + ref_angle;
  r.a1_ = angle_end + ref_angle;
  return r;
}

Region Region::radial_graph_sector(Point2 center, double angle_start, double angle_end,
                                   std::vector<double> inner_radius,
                                   std::vector<double> outer_radius) {
  if (!(angle_end > angle_start) || angle_end - angle_start > kTwoPi + 1e-12)
    throw ValidationError("radial_graph_sector: bad angle range");
  if (inner_radius.size() < 2 || inner_radius.size() != outer_radius.size())
    throw ValidationError("radial_graph_sector: need matching sample lists of size >= 2");
  for (std::size_t i = 0; i < inner_radius.size(); ++i)
    if (inner_radius[i] < 0.0 || outer_radius[i] < inner_radius[i])
      throw ValidationError("radial_graph_sector: need 0 <= inner <= outer at every sample");
  Region r;
  r.kind_ = Kind::RadialGraphSector;
  r.center_ = center;
  r.a0_ = angle_start;
  r.a1_ = angle_end;
  r.inner_ = std::move(inner_radius);
  r.outer_ = std::move(outer_radius);
  return r;
}

Region Region::union_of(std::vector<Region> parts) {
  if (parts.empty()) throw ValidationError("union: no parts");
  Region r;
  r.kind_ = Kind::Union;
  r.children_ = std::move(parts);
  return r;
}

Region Region::difference(Region keep, Region remove) {
  Region r;
  r.kind_ = Kind::Difference;
  r.children_.push_back(std::move(keep));
  r.children_.push_back(std::move(remove));
  return r;
}

bool Region::contains(Point2 x) const {
  switch (kind_) {
    case Kind::Disk:
      return distance(x, center_) <= r_out_;
    case Kind::Rectangle:
      return x.x >= lo_.x && x.x <= hi_.x && x.y >= lo_.y && x.y <= hi_.y;
    case Kind::Polygon: {
      const std::size_t n = poly_.size();
      BoundingBox bb;
      for (const Point2& p : poly_) bb.expand(p);
      const double eps = 1e-12 * std::max(1.0, distance(bb.lo, bb.hi));
      for (std::size_t i = 0; i < n; ++i)
        if (on_segment(x, poly_[i], poly_[(i + 1) % n], eps)) return true;
      // Crossing-number test.
      bool inside = false;
      for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2 a = poly_[j], b = poly_[i];
        if ((b.y > x.y) != (a.y > x.y)) {
          const double xi = b.x + (x.y - b.y) * (a.x - b.x) / (a.y - b.y);
          if (x.x < xi) inside = !inside;
        }
      }
      return inside;
    }
    case Kind::AnnularSector: {
      // Tiny relative slack so points constructed to sit exactly on the
      // boundary still count as inside after roundoff.
      const double eps = 1e-12 * std::max(1.0, r_out_);
      const double d = distance(x, center_);
      if (d < r_in_ - eps || d > r_out_ + eps) return false;
      if (d <= eps) return r_in_ <= eps;
      return angle_from(center_, x, a0_) <= a1_;
    }
    case Kind::RadialGraphSector: {
      const double a = angle_from(center_, x, a0_);
      if (a > a1_) return false;
      const double d = distance(x, center_);
      const double u = (a - a0_) / (a1_ - a0_) * static_cast<double>(inner_.size() - 1);
      const std::size_t i = std::min(static_cast<std::size_t>(u), inner_.size() - 2);
      const double t = u - static_cast<double>(i);
      const double rin = inner_[i] + t * (inner_[i + 1] - inner_[i]);
      const double rout = outer_[i] + t * (outer_[i + 1] - outer_[i]);
      const double eps = 1e-12 * std::max(1.0, rout);
      return d >= rin - eps && d <= rout + eps;
    }
    case Kind::Union:
      for (const Region& c : children_)
        if (c.contains(x)) return true;
      return false;
    case Kind::Difference:
      return children_[0].contains(x) && !children_[1].contains(x);
  }
  return false;
}

BoundingBox Region::bounding_box() const {
  BoundingBox bb;
  switch (kind_) {
    case Kind::Disk:
    case Kind::AnnularSector:
      bb.expand(center_ - Vec2{r_out_, r_out_});
      bb.expand(center_ + Vec2{r_out_, r_out_});
      break;
    case Kind::Rectangle:
      bb.expand(lo_);
      bb.expand(hi_);
      break;
    case Kind::Polygon:
      for (const Point2& p : poly_) bb.expand(p);
      break;
    case Kind::RadialGraphSector: {
      const double rmax = *std::max_element(outer_.begin(), outer_.end());
      bb.expand(center_ - Vec2{rmax, rmax});
      bb.expand(center_ + Vec2{rmax, rmax});
      break;
    }
    case Kind::Union:
      for (const Region& c : children_) bb.expand(c.bounding_box());
      break;
    case Kind::Difference:
      bb = children_[0].bounding_box();
      break;
  }
  return bb;
}

QuadratureMeasure discretize_region(const Region& r, double h) {
  if (!(h > 0.0)) throw ArgumentError("discretize_region: h must be > 0");
  const BoundingBox bb = r.bounding_box();
  if (!bb.valid()) throw DegenerateMeasureError("discretize_region: empty bounding box");
  const int nx = std::max(1, static_cast<int>(std::ceil((bb.hi.x - bb.lo.x) / h - 1e-12)));
  const int ny = std::max(1, static_cast<int>(std::ceil((bb.hi.y - bb.lo.y) / h - 1e-12)));
  QuadratureMeasure mu;
  const double w = h * h;
  for (int j = 0; j < ny; ++j) {
    const double y = bb.lo.y + (j + 0.5) * h;
    for (int i = 0; i < nx; ++i) {
      const Point2 c{bb.lo.x + (i + 0.5) * h, y};
      if (r.contains(c)) mu.samples.push_back({c, w});
    }
  }
  if (mu.samples.empty())
    throw DegenerateMeasureError("discretize_region: no cell center inside the region");
  mu.total_mass = w * static_cast<double>(mu.samples.size());
  mu.atomic = false;
  return mu;
}

QuadratureMeasure from_points(const std::vector<WeightedPoint>& pts) {
  if (pts.empty()) throw DegenerateMeasureError("from_points: empty atom list");
  QuadratureMeasure mu;
  std::vector<double> ws;
  ws.reserve(pts.size());
  for (const WeightedPoint& a : pts) {
    if (!(a.w > 0.0)) throw ArgumentError("from_points: weights must be > 0");
    if (!finite(a.p)) throw ArgumentError("from_points: non-finite atom");
    mu.samples.push_back(a);
    ws.push_back(a.w);
  }
  mu.total_mass = pairwise_sum(ws);
  mu.atomic = true;
  return mu;
}

}  // namespace adf
