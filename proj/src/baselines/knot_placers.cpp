#include "knotfit/baselines/knot_placers.hpp"

#include <cmath>
#include <vector>

#include "knotfit/errors.hpp"

namespace knotfit {

KnotVector uniform_knots(int num_interior, int degree) {
  if (num_interior < 0) throw ConfigError("interior-knot count must be >= 0");
  std::vector<double> interior;
  interior.reserve(static_cast<std::size_t>(num_interior));
  for (int i = 1; i <= num_interior; ++i)
    interior.push_back(static_cast<double>(i) / (num_interior + 1));
  return KnotVector(degree, std::move(interior));
}

KnotVector nktp_knots(const Eigen::VectorXd& params, int num_controls,
                      int degree) {
  const int num_points = static_cast<int>(params.size());
  if (!(num_points > num_controls && num_controls > degree))
    throw ConfigError("knot placement needs points > controls > degree");

  const int n = num_controls - 1;
  const int p = degree;
  const double d = static_cast<double>(num_points) / (n - p + 1);
  std::vector<double> interior;
  interior.reserve(static_cast<std::size_t>(n - p));
  for (int j = 1; j <= n - p; ++j) {
    const int i = static_cast<int>(std::floor(j * d));
    const double alpha = j * d - i;
    interior.push_back((1.0 - alpha) * params(i - 1) + alpha * params(i));
  }
  return KnotVector(degree, std::move(interior));
}

}  // namespace knotfit
