#pragma once

#include <string>
#include <vector>

#include "adf/geometry.hpp"
#include "adf/measure.hpp"
#include "adf/variation.hpp"

namespace adf {

struct DescentConfig {
  double step0 = 0.1;            // initial line-search step
  double backtrack = 0.5;        // step shrink factor, in (0,1)
  int max_iters = 200;
  double quad_h = 0.02;          // quadrature pitch used by callers to build mu
  int resample_every = 0;        // 0 disables periodic resampling
  double target_edge_len = 0.0;  // required when resample_every > 0
  double stop_residual = 1e-6;   // sup-norm gradient stopping threshold
};

struct Iterate {
  EmbeddedGraph graph;
  double f = 0.0;
  double residual_norm = 0.0;
  double step = 0.0;  // step accepted to reach this iterate (0 for the seed)
};

struct Trajectory {
  std::vector<Iterate> iterates;  // F values nonincreasing
  bool converged = false;
  std::string diagnostic;
};

// Steepest descent on vertex positions along -shape_gradient with a
// backtracking line search; every accepted step decreases F. Topology
// (edge connectivity) is preserved throughout.
Trajectory minimize(const EmbeddedGraph& g0, const QuadratureMeasure& mu,
                    double lambda, const DescentConfig& cfg);

// Re-divides every degree-2 chain into edges of approximately the target
// length. Endpoints and branch vertices (degree != 2) are preserved
// exactly; a pure cycle is anchored at its lowest-index vertex.
EmbeddedGraph resample(const EmbeddedGraph& g, double target_edge_len);

}  // namespace adf
