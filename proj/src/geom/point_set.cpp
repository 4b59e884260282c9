#include "knotfit/geom/point_set.hpp"

#include <string>
#include <utility>

#include "knotfit/errors.hpp"

namespace knotfit {

PointSet::PointSet(Eigen::MatrixXd pts, Eigen::VectorXd s)
    : points(std::move(pts)), params(std::move(s)) {
  if (points.rows() < 2) throw ConfigError("point set needs at least 2 points");
  if (points.cols() < 1) throw ConfigError("points must have dimension >= 1");
  if (params.size() != points.rows())
    throw ConfigError("points and params must have equal length");
  if (!points.allFinite() || !params.allFinite())
    throw ConfigError("points and params must be finite");
  if (params(0) != 0.0 || params(params.size() - 1) != 1.0)
    throw ConfigError("parameter endpoints must be 0 and 1");
  for (Eigen::Index i = 1; i < params.size(); ++i)
    if (!(params(i) > params(i - 1)))
      throw ConfigError("parameters must be strictly increasing");
}

PointSet PointSet::with_chord_params(Eigen::MatrixXd pts) {
  Eigen::VectorXd s = chord_length_params(pts);
  return PointSet(std::move(pts), std::move(s));
}

Eigen::VectorXd chord_length_params(const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  if (n < 2) throw ConfigError("chord-length parametrization needs >= 2 points");

  Eigen::VectorXd s(n);
  s(0) = 0.0;
  for (Eigen::Index i = 1; i < n; ++i) {
    const double len = (points.row(i) - points.row(i - 1)).norm();
    if (len == 0.0)
      throw ConfigError(
          "duplicate consecutive points; collapse them before parametrizing");
    s(i) = s(i - 1) + len;
  }
  const double total = s(n - 1);
  if (total == 0.0) throw ConfigError("all points identical; degenerate data");
  s /= total;
  s(n - 1) = 1.0;  // pin the endpoint against roundoff
  return s;
}

}  // namespace knotfit
