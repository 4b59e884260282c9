#pragma once

#include "knotfit/geom/point_set.hpp"
#include "knotfit/io/report.hpp"

namespace knotfit {

struct RunOutput {
  Report report;
  LossTrace trace;
  Eigen::MatrixXd curve;  // fitted curve samples, raw data coordinates
  PointSet data;          // raw input points
};

// End-to-end driver: load or generate -> parametrize -> optional rough
// bracketing -> train the stack -> select the knot count -> optional knot
// coalescing -> evaluate the Hausdorff error in raw coordinates -> emit
// artifacts when an output directory is configured.
//
// Coordinates are normalized isotropically for training and mapped back for
// reporting; parameters and knots always live in [0,1].
RunOutput run_fit(const RunConfig& cfg);

}  // namespace knotfit
