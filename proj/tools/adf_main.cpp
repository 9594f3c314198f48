#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "adf/cli.hpp"
#include "adf/errors.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw adf::ArgumentError("cannot open scene file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw adf::ArgumentError("cannot write '" + path + "'");
  out << body;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"average-distance functional laboratory"};
  std::string verb, scene_path, out_path, csv_path, svg_path;
  double lambda = -1.0, quad_h = 0.0, tol = 0.0;
  int threads = 1;

  app.add_option("verb", verb,
                 "eval | variation | check | optimize | slope | loopcut | "
                 "corner-math | compliance-solve | compliance-derivative")
      ->required();
  app.add_option("--scene", scene_path, "scene file (JSON)")->required();
  app.add_option("--lambda", lambda, "override the scene's length weight");
  app.add_option("--quad-h", quad_h, "override the quadrature / grid pitch");
  app.add_option("--tol", tol, "override the tolerance");
  app.add_option("--out", out_path, "write the JSON report here");
  app.add_option("--csv", csv_path, "write the flat CSV table here");
  app.add_option("--svg", svg_path, "write a figure here");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  try {
    const adf::SceneDocument doc = adf::parse_scene_document(read_file(scene_path));
    adf::RunOptions opt;
    if (lambda >= 0.0) opt.lambda = lambda;
    if (quad_h > 0.0) opt.quad_h = quad_h;
    if (tol > 0.0) opt.tol = tol;
    opt.threads = threads;

    const adf::RunReport rep = adf::run_command(verb, doc, opt);
    const std::string body = rep.to_json().dump(2) + "\n";
    std::cout << body;
    if (!out_path.empty()) write_file(out_path, body);
    if (!csv_path.empty()) write_file(csv_path, rep.to_csv());
    if (!svg_path.empty()) {
      adf::Overlays ov;
      ov.ridge_samples = true;
      ov.gradient_arrows = true;
      ov.curvature_arrows = true;
      ov.lambda = opt.lambda.value_or(doc.scene.lambda);
      ov.sample_h = 0.02 * std::max(1e-9, doc.scene.graph.diameter());
      write_file(svg_path, adf::render_svg(doc.scene, ov));
    }
    return 0;
  } catch (const adf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
