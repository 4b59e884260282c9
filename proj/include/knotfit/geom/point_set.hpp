#pragma once

#include <Eigen/Core>

namespace knotfit {

// Data points with their parameter values: params strictly increasing with
// the endpoints pinned to 0 and 1, one parameter per point.
struct PointSet {
  Eigen::MatrixXd points;  // (N+1) x d
  Eigen::VectorXd params;  // length N+1

  PointSet(Eigen::MatrixXd pts, Eigen::VectorXd s);

  // Chord-length parametrization of the rows of `pts`.
  static PointSet with_chord_params(Eigen::MatrixXd pts);

  int count() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }
};

// s_0 = 0, s_N = 1, increments proportional to Euclidean distances between
// consecutive points. Consecutive duplicates must be collapsed beforehand.
Eigen::VectorXd chord_length_params(const Eigen::MatrixXd& points);

}  // namespace knotfit
