#pragma once

#include <Eigen/Core>

namespace knotfit {

// Hausdorff distance between two point sets (rows are points): the max of
// both directed sup-inf distances, by exhaustive pairwise scan.
double hausdorff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace knotfit
