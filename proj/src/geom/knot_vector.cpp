#include "knotfit/geom/knot_vector.hpp"

#include <cmath>
#include <string>

#include "knotfit/errors.hpp"

namespace knotfit {

double interior_spacing_floor(int num_interior) {
  return 1e-4 / (num_interior + 1);
}

KnotVector::KnotVector(int degree, std::vector<double> interior)
    : degree_(degree) {
  if (degree < 0) throw ConfigError("knot vector degree must be >= 0");
  const int m = static_cast<int>(interior.size());
  const double floor = interior_spacing_floor(m);

  double prev = 0.0;
  int run = 1;
  for (int j = 0; j < m; ++j) {
    const double u = interior[static_cast<std::size_t>(j)];
    if (!(u > 0.0 && u < 1.0))
      throw ConfigError("interior knot " + std::to_string(u) +
                        " outside (0,1)");
    if (u < prev) throw ConfigError("interior knots must be non-decreasing");
    if (j > 0) {
      if (u == prev) {
        if (++run > degree)
          throw ConfigError("interior knot multiplicity exceeds degree");
      } else {
        run = 1;
        if (u - prev < floor)
          throw ConfigError("interior knot spacing below floor");
      }
    }
    prev = u;
  }

  knots_.reserve(static_cast<std::size_t>(m + 2 * (degree + 1)));
  knots_.assign(static_cast<std::size_t>(degree + 1), 0.0);
  knots_.insert(knots_.end(), interior.begin(), interior.end());
  knots_.insert(knots_.end(), static_cast<std::size_t>(degree + 1), 1.0);
}

}  // namespace knotfit
