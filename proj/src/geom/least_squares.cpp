#include "knotfit/geom/least_squares.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "knotfit/errors.hpp"

namespace knotfit {

double effective_ridge(const DesignMatrix& a, double lambda) {
  if (lambda == 0.0) return 0.0;
  const double mean_diag = a.colwise().squaredNorm().mean();
  return lambda * mean_diag;
}

ControlNet solve_controls(const DesignMatrix& a, const Eigen::MatrixXd& points,
                          double lambda) {
  if (a.rows() < a.cols())
    throw ConfigError("design matrix needs at least as many rows as columns");
  if (a.rows() != points.rows())
    throw ConfigError("design matrix rows must match point count");
  if (lambda < 0.0) throw ConfigError("ridge weight must be >= 0");

  if (lambda == 0.0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < a.cols())
      throw NumericError(
          "rank-deficient design matrix with ridge 0; use lambda > 0");
    return qr.solve(points);
  }

  const double mu = effective_ridge(a, lambda);
  Eigen::MatrixXd h = a.transpose() * a;
  h.diagonal().array() += mu;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
  if (ldlt.info() != Eigen::Success)
    throw NumericError("normal-equations factorization failed");
  return ldlt.solve(a.transpose() * points);
}

}  // namespace knotfit
