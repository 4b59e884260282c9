#include "knotfit/geom/hausdorff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace knotfit {

namespace {

double directed(const Eigen::MatrixXd& from, const Eigen::MatrixXd& to) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < from.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < to.rows(); ++j)
      best = std::min(best, (from.row(i) - to.row(j)).squaredNorm());
    worst = std::max(worst, best);
  }
  return std::sqrt(worst);
}

}  // namespace

double hausdorff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() == 0 || b.rows() == 0)
    throw std::domain_error("hausdorff of an empty point set");
  if (a.cols() != b.cols())
    throw std::domain_error("hausdorff of sets with different dimensions");
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace knotfit
