#pragma once

#include <Eigen/Core>
#include <vector>

#include "knotfit/ad/tape.hpp"
#include "knotfit/geom/knot_vector.hpp"

namespace knotfit {

// Knot vector whose interior entries live on a tape, together with a concrete
// snapshot used for span lookup and downstream bookkeeping.
struct TapeKnots {
  KnotVector value;
  ad::Var interior;  // length-m column vector; invalid when m == 0
};

// Recovers interior knots from a positive difference vector: entries are
// clamped to twice the spacing floor, renormalized to sum 1, and partial-
// summed (the last partial sum lands on the right endpoint and is dropped).
// The clamp+renormalize projection is recorded on the tape, so it is the
// identity (and gradient-transparent) whenever the floor is inactive.
TapeKnots knots_from_differences(ad::Tape& tape, ad::Var du, int degree);

// Design matrix rows eval_basis(knots, params[i]) recorded on the tape so the
// adjoint reaches the interior knots. The second overload takes parameters as
// scalar nodes, for networks that produce the parametrization as well.
ad::Var tape_design_matrix(ad::Tape& tape, const TapeKnots& knots,
                           const Eigen::VectorXd& params);
ad::Var tape_design_matrix(ad::Tape& tape, const TapeKnots& knots,
                           const std::vector<ad::Var>& params);

}  // namespace knotfit
