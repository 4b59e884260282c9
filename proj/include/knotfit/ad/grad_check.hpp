#pragma once

#include <Eigen/Core>
#include <functional>

#include "knotfit/ad/tape.hpp"

namespace knotfit::ad {

// A scalar-valued tape program. It must create its leaves in a fixed order,
// consuming exactly x.size() elements (column-major within each leaf).
using TapeFn = std::function<Var(Tape&, const Eigen::VectorXd&)>;

// Compares the backward gradient of f at x0 with central finite differences.
// Returns the worst relative error over all leaf elements, falling back to
// absolute error where the analytic gradient is below 1e-8.
double grad_check(const TapeFn& f, const Eigen::VectorXd& x0, double step);

}  // namespace knotfit::ad
