#pragma once

#include <Eigen/Core>

#include "knotfit/geom/bspline.hpp"

namespace knotfit {

// Ridge weight actually added to the normal equations: lambda is relative to
// the mean diagonal of A^T A, so lambda = 0 recovers the plain pseudo-inverse.
double effective_ridge(const DesignMatrix& a, double lambda);

// Minimizer of |P - A C|_F^2 + mu |C|_F^2 with mu = effective_ridge(a, lambda).
// lambda = 0 uses a rank-revealing QR and throws NumericError on a
// rank-deficient system; lambda > 0 solves the regularized normal equations.
ControlNet solve_controls(const DesignMatrix& a, const Eigen::MatrixXd& points,
                          double lambda);

inline ControlNet solve_controls(const DesignMatrix& a, const PointSet& ps,
                                 double lambda) {
  return solve_controls(a, ps.points, lambda);
}

}  // namespace knotfit
