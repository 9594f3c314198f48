#include "adf/cli.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "adf/compliance.hpp"
#include "adf/numerics.hpp"
#include "adf/optimize.hpp"
#include "adf/variation.hpp"

namespace adf {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& text, std::size_t byte, const std::string& what) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') { ++line; col = 1; } else ++col;
  }
  throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                   ": " + what);
}

void expect_object(const json& o, const std::string& path) {
  if (!o.is_object()) throw ValidationError(path + ": expected an object");
}

void expect_keys(const json& o, const std::string& path, std::set<std::string> allowed) {
  expect_object(o, path);
  for (const auto& [k, v] : o.items())
    if (!allowed.count(k))
      throw ValidationError(path + ": unknown field '" + k + "'");
}

double get_number(const json& o, const std::string& path, const std::string& key) {
  if (!o.contains(key)) throw ValidationError(path + "." + key + ": missing");
  if (!o[key].is_number()) throw ValidationError(path + "." + key + ": expected a number");
  return o[key].get<double>();
}

double get_number_or(const json& o, const std::string& path, const std::string& key,
                     double fallback) {
  return o.contains(key) ? get_number(o, path, key) : fallback;
}

int get_int_or(const json& o, const std::string& path, const std::string& key, int fallback) {
  if (!o.contains(key)) return fallback;
  if (!o[key].is_number_integer())
    throw ValidationError(path + "." + key + ": expected an integer");
  return o[key].get<int>();
}

Point2 get_point(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ValidationError(path + ": expected [x, y]");
  return {v[0].get<double>(), v[1].get<double>()};
}

std::vector<Point2> get_points(const json& v, const std::string& path) {
  if (!v.is_array()) throw ValidationError(path + ": expected a list of points");
  std::vector<Point2> pts;
  for (std::size_t i = 0; i < v.size(); ++i)
    pts.push_back(get_point(v[i], path + "[" + std::to_string(i) + "]"));
  return pts;
}

Region parse_region(const json& o, const std::string& path) {
  expect_object(o, path);
  if (!o.contains("type") || !o["type"].is_string())
    throw ValidationError(path + ".type: missing region type");
  const std::string type = o["type"].get<std::string>();
  if (type == "disk") {
    expect_keys(o, path, {"type", "center", "radius"});
    return Region::disk(get_point(o.value("center", json::array({0.0, 0.0})), path + ".center"),
                        get_number(o, path, "radius"));
  }
  if (type == "rectangle") {
    expect_keys(o, path, {"type", "min", "max"});
    if (!o.contains("min") || !o.contains("max"))
      throw ValidationError(path + ": rectangle needs 'min' and 'max'");
    return Region::rectangle(get_point(o["min"], path + ".min"),
                             get_point(o["max"], path + ".max"));
  }
  if (type == "polygon") {
    expect_keys(o, path, {"type", "vertices"});
    if (!o.contains("vertices")) throw ValidationError(path + ".vertices: missing");
    return Region::polygon(get_points(o["vertices"], path + ".vertices"));
  }
  if (type == "annular_sector") {
    expect_keys(o, path, {"type", "center", "r_in", "r_out", "angle_start", "angle_end"});
    return Region::annular_sector(
        get_point(o.value("center", json::array({0.0, 0.0})), path + ".center"),
        get_number_or(o, path, "r_in", 0.0), get_number(o, path, "r_out"),
        get_number(o, path, "angle_start"), get_number(o, path, "angle_end"));
  }
  if (type == "union") {
    expect_keys(o, path, {"type", "parts"});
    if (!o.contains("parts") || !o["parts"].is_array())
      throw ValidationError(path + ".parts: expected a list of regions");
    std::vector<Region> parts;
    for (std::size_t i = 0; i < o["parts"].size(); ++i)
      parts.push_back(parse_region(o["parts"][i], path + ".parts[" + std::to_string(i) + "]"));
    return Region::union_of(std::move(parts));
  }
  if (type == "difference") {
    expect_keys(o, path, {"type", "keep", "remove"});
    if (!o.contains("keep") || !o.contains("remove"))
      throw ValidationError(path + ": difference needs 'keep' and 'remove'");
    return Region::difference(parse_region(o["keep"], path + ".keep"),
                              parse_region(o["remove"], path + ".remove"));
  }
  throw ValidationError(path + ".type: unknown region type '" + type + "'");
}

EmbeddedGraph parse_graph(const json& o, const std::string& path) {
  expect_keys(o, path, {"vertices", "edges", "eps_len"});
  if (!o.contains("vertices") || !o.contains("edges"))
    throw ValidationError(path + ": graph needs 'vertices' and 'edges'");
  const std::vector<Point2> vs = get_points(o["vertices"], path + ".vertices");
  if (!o["edges"].is_array()) throw ValidationError(path + ".edges: expected a list");
  std::vector<EdgeRef> es;
  for (std::size_t i = 0; i < o["edges"].size(); ++i) {
    const json& e = o["edges"][i];
    const std::string epath = path + ".edges[" + std::to_string(i) + "]";
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      throw ValidationError(epath + ": expected [a, b] vertex indices");
    es.push_back({e[0].get<int>(), e[1].get<int>()});
  }
  return EmbeddedGraph(vs, es, get_number_or(o, path, "eps_len", EmbeddedGraph::kDefaultEpsLen));
}

Scene parse_construction(const json& o, std::optional<CornerParams>& corner) {
  const std::string path = "scene.construction";
  expect_object(o, path);
  if (!o.contains("name") || !o["name"].is_string())
    throw ValidationError(path + ".name: missing construction name");
  const std::string name = o["name"].get<std::string>();
  if (name == "circle") {
    expect_keys(o, path, {"name", "lambda", "n_arc"});
    return stationary_circle(get_number(o, path, "lambda"),
                             get_int_or(o, path, "n_arc", 256));
  }
  if (name == "stadium") {
    expect_keys(o, path, {"name", "lambda", "length"});
    return stadium_domain(get_number(o, path, "lambda"),
                          get_number_or(o, path, "length", 1.0));
  }
  if (name == "wedge") {
    expect_keys(o, path, {"name", "lambda", "phi", "arm_len", "margin"});
    Scene s = wedge_set(get_number(o, path, "phi"),
                        get_number_or(o, path, "arm_len", 1.0),
                        get_number_or(o, path, "margin", 0.25));
    s.lambda = get_number(o, path, "lambda");
    return s;
  }
  if (name == "corner") {
    expect_keys(o, path, {"name", "lambda", "R", "alpha", "k", "n_arc"});
    const double lambda = get_number(o, path, "lambda");
    const double R = get_number(o, path, "R");
    const double alpha = get_number(o, path, "alpha");
    const double k = get_number_or(o, path, "k", 0.5 * R * (1.0 - std::cos(alpha)));
    const CornerParams cp = CornerParams::create(lambda, R, alpha, k);
    corner = cp;
    return corner_domain(cp, get_int_or(o, path, "n_arc", 512));
  }
  throw ValidationError(path + ".name: unknown construction '" + name + "'");
}

MeasureSpec parse_measure(const json& o) {
  const std::string path = "scene.measure";
  expect_object(o, path);
  MeasureSpec m;
  if (!o.contains("type") || !o["type"].is_string())
    throw ValidationError(path + ".type: missing measure type");
  const std::string type = o["type"].get<std::string>();
  if (type == "uniform") {
    expect_keys(o, path, {"type", "h"});
    m.kind = MeasureSpec::Kind::Uniform;
    m.h = get_number(o, path, "h");
    if (!(m.h > 0.0)) throw ValidationError(path + ".h: must be > 0");
  } else if (type == "atoms") {
    expect_keys(o, path, {"type", "points"});
    if (!o.contains("points") || !o["points"].is_array())
      throw ValidationError(path + ".points: expected [[x, y, w], ...]");
    m.kind = MeasureSpec::Kind::Atoms;
    for (std::size_t i = 0; i < o["points"].size(); ++i) {
      const json& a = o["points"][i];
      const std::string apath = path + ".points[" + std::to_string(i) + "]";
      if (!a.is_array() || a.size() != 3)
        throw ValidationError(apath + ": expected [x, y, w]");
      m.atoms.push_back({{a[0].get<double>(), a[1].get<double>()}, a[2].get<double>()});
    }
  } else {
    throw ValidationError(path + ".type: unknown measure type '" + type + "'");
  }
  return m;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

SceneDocument parse_scene_document(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail(text, e.byte, e.what());
  }
  expect_keys(root, "scene",
              {"construction", "graph", "region", "lambda", "measure", "tolerances",
               "probe", "loop_vertex"});

  const bool has_construction = root.contains("construction");
  const bool has_explicit = root.contains("graph") || root.contains("region");
  if (has_construction == has_explicit)
    throw ValidationError(
        "scene: provide either 'construction' or an explicit 'graph' + 'region'");
  std::optional<CornerParams> corner;
  Scene scene = [&]() -> Scene {
    if (has_construction) {
      Scene s = parse_construction(root["construction"], corner);
      if (root.contains("lambda")) s.lambda = get_number(root, "scene", "lambda");
      return s;
    }
    if (!root.contains("graph") || !root.contains("region"))
      throw ValidationError("scene: explicit scenes need both 'graph' and 'region'");
    EmbeddedGraph g = parse_graph(root["graph"], "scene.graph");
    Region r = parse_region(root["region"], "scene.region");
    return Scene{std::move(g), std::move(r), get_number(root, "scene", "lambda"),
                 "explicit scene file"};
  }();
  SceneDocument doc{std::move(scene)};
  doc.corner = corner;
  if (root.contains("measure")) doc.measure = parse_measure(root["measure"]);
  if (root.contains("tolerances")) {
    expect_keys(root["tolerances"], "scene.tolerances", {"stationarity"});
    doc.stationarity_tol =
        get_number_or(root["tolerances"], "scene.tolerances", "stationarity", 1e-2);
  }
  if (root.contains("probe")) {
    const json& p = root["probe"];
    expect_keys(p, "scene.probe", {"attach", "dir", "eps"});
    if (p.contains("attach")) doc.probe_attach = get_point(p["attach"], "scene.probe.attach");
    if (p.contains("dir")) doc.probe_dir = get_point(p["dir"], "scene.probe.dir");
    if (p.contains("eps")) {
      if (!p["eps"].is_array()) throw ValidationError("scene.probe.eps: expected a list");
      for (const auto& e : p["eps"]) doc.probe_eps.push_back(e.get<double>());
    }
  }
  doc.loop_vertex = get_int_or(root, "scene", "loop_vertex", 0);
  validate_scene(doc.scene);
  return doc;
}

Scene parse_scene(const std::string& text) { return parse_scene_document(text).scene; }

QuadratureMeasure realize_measure(const SceneDocument& doc, double quad_h_override) {
  if (doc.measure.kind == MeasureSpec::Kind::Atoms) return from_points(doc.measure.atoms);
  const double h = quad_h_override > 0.0 ? quad_h_override : doc.measure.h;
  return discretize_region(doc.scene.region, h);
}

json RunReport::to_json() const {
  json out;
  out["inputs"] = inputs;
  out["results"] = results;
  out["refinement"] = refinement;
  out["warnings"] = warnings;
  return out;
}

std::string RunReport::to_csv() const {
  std::ostringstream os;
  const std::vector<json> rows = refinement.empty() ? std::vector<json>{results} : refinement;
  if (rows.empty() || !rows.front().is_object()) return "";
  std::vector<std::string> cols;
  for (const auto& [k, v] : rows.front().items())
    if (v.is_number() || v.is_string() || v.is_boolean()) cols.push_back(k);
  for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c];
  os << "\n";
  for (const json& row : rows) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      os << (c ? "," : "");
      if (!row.contains(cols[c])) continue;
      const json& v = row[cols[c]];
      if (v.is_number()) os << fmt(v.get<double>());
      else if (v.is_boolean()) os << (v.get<bool>() ? "true" : "false");
      else os << v.get<std::string>();
    }
    os << "\n";
  }
  return os.str();
}

namespace {

// ---- SVG rendering -------------------------------------------------------

struct SvgWriter {
  std::ostringstream body;
  double sw;  // base stroke width in scene units

  std::string pt(Point2 p) const { return fmt(p.x) + "," + fmt(-p.y); }

  void polyline(const std::vector<Point2>& pts, const std::string& stroke, double width,
                bool closed, const std::string& dash = "") {
    if (pts.size() < 2) return;
    body << "<" << (closed ? "polygon" : "polyline") << " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) body << (i ? " " : "") << pt(pts[i]);
    body << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << fmt(width)
         << "\"";
    if (!dash.empty()) body << " stroke-dasharray=\"" << dash << "\"";
    body << "/>\n";
  }
  void line(Point2 a, Point2 b, const std::string& stroke, double width) {
    body << "<line x1=\"" << fmt(a.x) << "\" y1=\"" << fmt(-a.y) << "\" x2=\"" << fmt(b.x)
         << "\" y2=\"" << fmt(-b.y) << "\" stroke=\"" << stroke << "\" stroke-width=\""
         << fmt(width) << "\"/>\n";
  }
  void dot(Point2 p, double r, const std::string& fill) {
    body << "<circle cx=\"" << fmt(p.x) << "\" cy=\"" << fmt(-p.y) << "\" r=\"" << fmt(r)
         << "\" fill=\"" << fill << "\"/>\n";
  }
  void arrow(Point2 from, Vec2 v, const std::string& stroke, double width) {
    const Point2 to = from + v;
    line(from, to, stroke, width);
    const Vec2 u = normalized(v);
    const double head = 0.25 * norm(v);
    line(to, to - head * u + (0.5 * head) * perp(u), stroke, width);
    line(to, to - head * u - (0.5 * head) * perp(u), stroke, width);
  }
};

void outline_region(SvgWriter& w, const Region& r, bool removed = false) {
  const std::string color = removed ? "#bbbbbb" : "#444444";
  const std::string dash = removed ? "4,3" : "";
  switch (r.kind()) {
    case Region::Kind::Disk: {
      std::vector<Point2> pts = arc_polyline(r.center(), r.r_out(), 0.0, 6.283185307179586, 128);
      pts.pop_back();
      w.polyline(pts, color, w.sw, true, dash);
      break;
    }
    case Region::Kind::Rectangle: {
      const Point2 a = r.corner_min(), b = r.corner_max();
      w.polyline({{a.x, a.y}, {b.x, a.y}, {b.x, b.y}, {a.x, b.y}}, color, w.sw, true, dash);
      break;
    }
    case Region::Kind::Polygon:
      w.polyline(r.polygon_vertices(), color, w.sw, true, dash);
      break;
    case Region::Kind::AnnularSector: {
      std::vector<Point2> pts =
          arc_polyline(r.center(), r.r_out(), r.angle_start(), r.angle_end(), 96);
      if (r.r_in() > 0.0) {
        const auto inner =
            arc_polyline(r.center(), r.r_in(), r.angle_end(), r.angle_start(), 96);
        pts.insert(pts.end(), inner.begin(), inner.end());
      } else {
        pts.push_back(r.center());
      }
      w.polyline(pts, color, w.sw, true, dash);
      break;
    }
    case Region::Kind::RadialGraphSector: {
      // Outline by sampling the bounding annular wedge.
      const BoundingBox bb = r.bounding_box();
      w.polyline({{bb.lo.x, bb.lo.y}, {bb.hi.x, bb.lo.y}, {bb.hi.x, bb.hi.y}, {bb.lo.x, bb.hi.y}},
                 color, 0.5 * w.sw, true, "2,2");
      break;
    }
    case Region::Kind::Union:
      for (const Region& c : r.children()) outline_region(w, c, removed);
      break;
    case Region::Kind::Difference:
      outline_region(w, r.children()[0], removed);
      outline_region(w, r.children()[1], true);
      break;
  }
}

}  // namespace

std::string render_svg(const Scene& scene, const Overlays& ov) {
  BoundingBox bb = scene.region.bounding_box();
  bb.expand(scene.graph.bounding_box());
  const double span = std::max(bb.hi.x - bb.lo.x, bb.hi.y - bb.lo.y);
  const double pad = 0.05 * span;

  SvgWriter w;
  w.sw = 0.004 * span;
  outline_region(w, scene.region);
  for (const EdgeRef& e : scene.graph.edges())
    w.line(scene.graph.vertex(e.a), scene.graph.vertex(e.b), "#0044cc", 2.0 * w.sw);

  if (ov.projection_quiver || ov.ridge_samples) {
    const double tol = default_ridge_tol(scene.graph);
    int k = 0;
    for (double y = bb.lo.y; y <= bb.hi.y; y += ov.sample_h)
      for (double x = bb.lo.x; x <= bb.hi.x; x += ov.sample_h) {
        const Point2 p{x, y};
        if (!scene.region.contains(p)) continue;
        const ProjectionResult pr = project(p, scene.graph, tol);
        if (ov.ridge_samples && pr.multiplicity > 1) w.dot(p, 1.5 * w.sw, "#cc2200");
        if (ov.projection_quiver && (k++ % 4 == 0) && pr.direction_defined)
          w.line(p, pr.foot, "#88aa88", 0.5 * w.sw);
      }
  }
  if (ov.gradient_arrows) {
    // Arrow scale from a coarse quadrature of the scene itself.
    const QuadratureMeasure mu = discretize_region(scene.region, std::max(ov.sample_h, 0.01));
    const std::vector<Vec2> grad = shape_gradient(scene.graph, mu, ov.lambda);
    double gmax = 0.0;
    for (const Vec2& g : grad) gmax = std::max(gmax, norm(g));
    if (gmax > 0.0)
      for (int v = 0; v < scene.graph.vertex_count(); ++v)
        if (norm(grad[static_cast<std::size_t>(v)]) > 1e-12)
          w.arrow(scene.graph.vertex(v),
                  (0.08 * span / gmax) * grad[static_cast<std::size_t>(v)], "#aa00aa", w.sw);
  }
  if (ov.curvature_arrows) {
    const std::vector<Vec2> atoms = curvature_atoms(scene.graph);
    for (int v = 0; v < scene.graph.vertex_count(); ++v) {
      const Vec2 a = atoms[static_cast<std::size_t>(v)];
      if (norm(a) > 1e-9)
        w.arrow(scene.graph.vertex(v), (-0.06 * span) * normalized(a), "#cc6600", w.sw);
    }
  }

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt(bb.lo.x - pad) << " "
      << fmt(-(bb.hi.y + pad)) << " " << fmt(bb.hi.x - bb.lo.x + 2 * pad) << " "
      << fmt(bb.hi.y - bb.lo.y + 2 * pad) << "\">\n"
      << w.body.str() << "</svg>\n";
  return out.str();
}

namespace {

double mean_vertex_radius(const EmbeddedGraph& g) {
  Point2 c{0.0, 0.0};
  for (const Point2& v : g.vertices()) c += v;
  c = (1.0 / g.vertex_count()) * c;
  double s = 0.0;
  for (const Point2& v : g.vertices()) s += distance(v, c);
  return s / g.vertex_count();
}

json variation_terms(const VariationReport& r) {
  return json{{"integral_term", r.integral_term},
              {"curvature_term", r.curvature_term},
              {"total", r.total}};
}

Grid scene_grid(const Scene& s, double h) {
  if (s.region.kind() != Region::Kind::Rectangle)
    throw ArgumentError("compliance verbs need a rectangle region");
  return grid_over(s.region.corner_min(), s.region.corner_max(), h);
}

}  // namespace

RunReport run_command(const std::string& verb, const SceneDocument& doc,
                      const RunOptions& options) {
  set_thread_count(options.threads);
  SceneDocument d = doc;
  if (options.lambda) d.scene.lambda = *options.lambda;
  const double tol = options.tol ? *options.tol : d.stationarity_tol;
  const double lambda = d.scene.lambda;
  const EmbeddedGraph& g = d.scene.graph;

  RunReport rep;
  rep.inputs = {{"verb", verb},
                {"lambda", lambda},
                {"provenance", d.scene.provenance},
                {"vertices", g.vertex_count()},
                {"edges", g.edge_count()},
                {"threads", options.threads}};

  if (verb == "eval") {
    const QuadratureMeasure mu = realize_measure(d, options.quad_h.value_or(0.0));
    const double avg = average_distance(g, mu);
    const double len = graph_length(g);
    rep.results = {{"average_distance", avg},
                   {"length", len},
                   {"functional", avg + lambda * len},
                   {"mass", mu.total_mass},
                   {"samples", mu.size()}};
    return rep;
  }
  if (verb == "variation") {
    const QuadratureMeasure mu = realize_measure(d, options.quad_h.value_or(0.0));
    const VariationReport rx = first_variation(g, mu, lambda, OnSigmaField::constant(g, {1, 0}));
    const VariationReport ry = first_variation(g, mu, lambda, OnSigmaField::constant(g, {0, 1}));
    const VariationReport st = stationarity_residual(g, mu, lambda, tol);
    rep.results = {{"dF_x", variation_terms(rx)},
                   {"dF_y", variation_terms(ry)},
                   {"residual_norm", st.residual_norm},
                   {"verdict", to_string(st.verdict)}};
    rep.warnings = st.warnings;
    return rep;
  }
  if (verb == "check") {
    const QuadratureMeasure mu = realize_measure(d, options.quad_h.value_or(0.0));
    const VariationReport st = stationarity_residual(g, mu, lambda, tol);
    rep.results = {{"residual_norm", st.residual_norm},
                   {"tolerance", tol},
                   {"verdict", to_string(st.verdict)}};
    rep.warnings = st.warnings;
    return rep;
  }
  if (verb == "optimize") {
    const double quad_h = options.quad_h.value_or(d.measure.h);
    const QuadratureMeasure mu = realize_measure(d, quad_h);
    DescentConfig cfg;
    cfg.step0 = 0.05 * g.diameter();
    cfg.quad_h = quad_h;
    cfg.stop_residual = tol;
    const Trajectory tr = minimize(g, mu, lambda, cfg);
    for (std::size_t i = 0; i < tr.iterates.size(); ++i)
      rep.refinement.push_back({{"iter", i},
                                {"functional", tr.iterates[i].f},
                                {"residual", tr.iterates[i].residual_norm},
                                {"step", tr.iterates[i].step}});
    const Iterate& last = tr.iterates.back();
    rep.results = {{"functional_initial", tr.iterates.front().f},
                   {"functional_final", last.f},
                   {"residual", last.residual_norm},
                   {"iterations", tr.iterates.size() - 1},
                   {"converged", tr.converged},
                   {"mean_vertex_radius", mean_vertex_radius(last.graph)}};
    if (!tr.diagnostic.empty()) rep.warnings.push_back(tr.diagnostic);
    return rep;
  }
  if (verb == "slope") {
    if (!d.probe_attach || !d.probe_dir)
      throw ArgumentError("slope: the scene needs probe.attach and probe.dir");
    std::vector<double> eps = d.probe_eps;
    if (eps.empty()) eps = {0.04, 0.02, 0.01, 0.005};
    const QuadratureMeasure mu = realize_measure(d, options.quad_h.value_or(0.0));
    const SlopeProbeResult r = slope_probe(g, mu, lambda, *d.probe_attach, *d.probe_dir, eps);
    for (const auto& [e, ratio] : r.ratios)
      rep.refinement.push_back({{"eps", e}, {"ratio", ratio}});
    rep.results = {{"extrapolated", r.extrapolated}, {"lambda", lambda}};
    return rep;
  }
  if (verb == "loopcut") {
    std::vector<double> eps = d.probe_eps;
    if (eps.empty()) eps = {0.2, 0.1, 0.05};
    const QuadratureMeasure mu = realize_measure(d, options.quad_h.value_or(0.0));
    const LoopCutResult r = loop_cut_probe(g, mu, lambda, d.loop_vertex, eps);
    for (const auto& [e, delta] : r.deltas)
      rep.refinement.push_back({{"eps", e}, {"delta", delta}, {"rate", delta / e}});
    rep.results = {{"rate_finest", r.deltas.back().second / r.deltas.back().first},
                   {"minus_lambda", -lambda}};
    return rep;
  }
  if (verb == "corner-math") {
    if (!d.corner) throw ArgumentError("corner-math: the scene must use the corner construction");
    const CornerParams& c = *d.corner;
    const double phi = 1.5707963267948966 - c.alpha;
    const CornerTestResult t = corner_nonstationary_test(c.lambda, c.R, c.R, phi);
    rep.results = {{"b", c.b},
                   {"r", c.r},
                   {"rect_height", c.h},
                   {"phi", phi},
                   {"h_of_phi", h_of_phi(phi)},
                   {"ratio", t.ratio},
                   {"non_stationary", t.non_stationary}};
    return rep;
  }
  if (verb == "compliance-solve") {
    const Grid grid = scene_grid(d.scene, options.quad_h.value_or(1.0 / 128.0));
    const double solver_tol = options.tol ? *options.tol : 1e-10;
    const GridPoissonProblem p =
        make_poisson_problem(grid, [](Point2) { return 1.0; }, &g);
    const GridSolution sol = solve_poisson(p, solver_tol);
    const double umax = *std::max_element(sol.u.begin(), sol.u.end());
    rep.results = {{"compliance", compliance_value(sol, p, lambda, &g)},
                   {"dual_gap", dual_gap(sol, p)},
                   {"max_u", umax},
                   {"solver_residual", sol.residual},
                   {"grid_h", grid.h}};
    return rep;
  }
  if (verb == "compliance-derivative") {
    const Grid grid = scene_grid(d.scene, options.quad_h.value_or(1.0 / 128.0));
    const double solver_tol = options.tol ? *options.tol : 1e-10;
    const GridPoissonProblem p =
        make_poisson_problem(grid, [](Point2) { return 1.0; }, &g);
    const GridSolution sol = solve_poisson(p, solver_tol);
    const OnSigmaField X = OnSigmaField::constant(g, {0.0, 1.0});
    const double jd = shape_derivative(sol, p, g, lambda, X);
    const FdComplianceResult fd =
        fd_compliance_oracle(p, g, lambda, X, 2.0 * grid.h, solver_tol);
    rep.results = {{"jump_derivative", jd},
                   {"fd_derivative", fd.derivative},
                   {"fd_noise", fd.noise},
                   {"abs_difference", std::abs(jd - fd.derivative)},
                   {"grid_h", grid.h}};
    return rep;
  }
  throw ArgumentError("unknown verb '" + verb + "'");
}

}  // namespace adf
