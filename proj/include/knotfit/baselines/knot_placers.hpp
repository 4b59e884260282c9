#pragma once

#include <Eigen/Core>

#include "knotfit/geom/knot_vector.hpp"

namespace knotfit {

// Interior knots at i/(m+1), i = 1..m.
KnotVector uniform_knots(int num_interior, int degree);

// Knot placement by parameter averaging for approximation: with
// d = (N+1)/(n-p+1), interior knot j interpolates between the parameters
// flanking position j*d. Needs N+1 > num_controls > degree.
KnotVector nktp_knots(const Eigen::VectorXd& params, int num_controls,
                      int degree);

}  // namespace knotfit
