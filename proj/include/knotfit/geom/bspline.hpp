#pragma once

#include <Eigen/Core>

#include "knotfit/geom/knot_vector.hpp"
#include "knotfit/geom/point_set.hpp"

namespace knotfit {

using DesignMatrix = Eigen::MatrixXd;  // (N+1) x (n+1), entries N_j^p(s_i)
using ControlNet = Eigen::MatrixXd;    // (n+1) x d

// Index i of the span with knot[i] <= t < knot[i+1]; t = 1 maps to the last
// non-degenerate span. Throws std::domain_error for t outside [0,1].
int find_span(const KnotVector& kv, double t);

// All n+1 basis values at t (Cox-de Boor, 0/0 := 0). Non-negative, at most
// p+1 nonzeros, sums to 1.
Eigen::VectorXd eval_basis(const KnotVector& kv, double t);

// Row i equals eval_basis(kv, ps.params[i]).
DesignMatrix build_design_matrix(const KnotVector& kv, const PointSet& ps);
DesignMatrix build_design_matrix(const KnotVector& kv,
                                 const Eigen::VectorXd& params);

// C(t) = sum_j C_j N_j^p(t)
Eigen::VectorXd eval_curve(const KnotVector& kv, const ControlNet& controls,
                           double t);

// Rows are curve points at `count` uniform parameters in [0,1].
Eigen::MatrixXd sample_curve(const KnotVector& kv, const ControlNet& controls,
                             int count);

// Rows are curve points at the given parameters.
Eigen::MatrixXd eval_curve_at(const KnotVector& kv, const ControlNet& controls,
                              const Eigen::VectorXd& params);

}  // namespace knotfit
