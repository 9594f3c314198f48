#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adf/constructions.hpp"
#include "adf/measure.hpp"

namespace adf {

// How the measure of a scene file is realized.
struct MeasureSpec {
  enum class Kind { Uniform, Atoms };
  Kind kind = Kind::Uniform;
  double h = 0.02;                    // uniform grid pitch
  std::vector<WeightedPoint> atoms;   // explicit atoms
};

// A fully parsed scene file.
struct SceneDocument {
  Scene scene;
  MeasureSpec measure;
  double stationarity_tol = 1e-2;
  // Optional probe settings for the slope / loopcut verbs.
  std::optional<Point2> probe_attach;
  std::optional<Vec2> probe_dir;
  std::vector<double> probe_eps;
  int loop_vertex = 0;
  // Present when the scene came from the "corner" construction.
  std::optional<CornerParams> corner;
};

// Parses and validates a scene document; unknown fields are rejected
// with their field path.
SceneDocument parse_scene_document(const std::string& text);
Scene parse_scene(const std::string& text);

QuadratureMeasure realize_measure(const SceneDocument& doc, double quad_h_override = 0.0);

struct RunReport {
  nlohmann::json inputs;
  nlohmann::json results;
  std::vector<nlohmann::json> refinement;
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
  // Flat table: refinement rows when present, otherwise one results row.
  std::string to_csv() const;
};

struct Overlays {
  bool projection_quiver = false;
  bool ridge_samples = false;
  bool gradient_arrows = false;
  bool curvature_arrows = false;   // -H_Sigma atoms at the vertices
  double lambda = 0.0;             // used by gradient arrows
  double sample_h = 0.05;          // quiver / ridge sampling pitch
};

std::string render_svg(const Scene& scene, const Overlays& overlays);

struct RunOptions {
  std::optional<double> lambda;   // overrides the scene value
  std::optional<double> quad_h;   // overrides the measure pitch
  std::optional<double> tol;      // overrides the stationarity tolerance
  int threads = 1;
};

// Executes one verb against a parsed scene and returns the report.
// Verbs: eval, variation, check, optimize, slope, loopcut, corner-math,
// compliance-solve, compliance-derivative.
RunReport run_command(const std::string& verb, const SceneDocument& doc,
                      const RunOptions& options);

}  // namespace adf
