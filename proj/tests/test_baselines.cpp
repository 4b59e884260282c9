#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "knotfit/baselines/knot_placers.hpp"
#include "knotfit/errors.hpp"
#include "knotfit/rng.hpp"

using namespace knotfit;

TEST_CASE("uniform_knots") {
  const KnotVector kv = uniform_knots(3, 3);
  CHECK(kv.num_interior() == 3);
  CHECK(kv.interior()[0] == doctest::Approx(0.25));
  CHECK(kv.interior()[1] == doctest::Approx(0.5));
  CHECK(kv.interior()[2] == doctest::Approx(0.75));

  // no interior knots: plain Bezier knot vector
  const KnotVector bez = uniform_knots(0, 3);
  CHECK(bez.num_interior() == 0);
  CHECK(bez.num_basis() == 4);

  // differences are uniform
  const KnotVector kv7 = uniform_knots(7, 3);
  const auto interior = kv7.interior();
  for (std::size_t i = 1; i < interior.size(); ++i)
    CHECK(interior[i] - interior[i - 1] == doctest::Approx(0.125));
}

TEST_CASE("nktp_knots uniform parameters give uniform spacing") {
  const Eigen::VectorXd params = Eigen::VectorXd::LinSpaced(41, 0.0, 1.0);
  const KnotVector kv = nktp_knots(params, 9, 3);  // n+1 = 9 -> 5 interior
  CHECK(kv.num_interior() == 5);
  const auto interior = kv.interior();
  const double gap = interior[1] - interior[0];
  for (std::size_t i = 1; i < interior.size(); ++i)
    CHECK(interior[i] - interior[i - 1] == doctest::Approx(gap).epsilon(1e-12));
}

TEST_CASE("nktp_knots matches a direct transcription of the averaging rule") {
  Rng rng(17);
  Eigen::VectorXd params(25);
  params(0) = 0.0;
  for (int i = 1; i < 25; ++i)
    params(i) = params(i - 1) + rng.uniform(0.2, 1.0);
  params /= params(24);
  params(24) = 1.0;

  const int degree = 3;
  const int num_controls = 8;  // n - p = 4 interior knots
  const KnotVector kv = nktp_knots(params, num_controls, degree);
  REQUIRE(kv.num_interior() == 4);

  // independent re-implementation
  const int n = num_controls - 1;
  const double d = 25.0 / (n - degree + 1);
  for (int j = 1; j <= n - degree; ++j) {
    const int i = static_cast<int>(std::floor(j * d));
    const double alpha = j * d - i;
    const double expected = (1.0 - alpha) * params(i - 1) + alpha * params(i);
    CHECK(kv.interior()[static_cast<std::size_t>(j - 1)] ==
          doctest::Approx(expected).epsilon(1e-15));
  }
}

TEST_CASE("nktp_knots stays strictly inside and valid on random parameters") {
  Rng rng(23);
  for (int rep = 0; rep < 50; ++rep) {
    const int count = 15 + static_cast<int>(rng.unit() * 30);
    Eigen::VectorXd params(count);
    params(0) = 0.0;
    for (int i = 1; i < count; ++i)
      params(i) = params(i - 1) + rng.uniform(0.1, 1.0);
    params /= params(count - 1);
    params(count - 1) = 1.0;

    const int num_controls = 5 + static_cast<int>(rng.unit() * 5);
    if (count <= num_controls) continue;
    const KnotVector kv = nktp_knots(params, num_controls, 3);
    const auto interior = kv.interior();
    double prev = 0.0;
    for (double u : interior) {
      CHECK(u > 0.0);
      CHECK(u < 1.0);
      CHECK(u >= prev);
      prev = u;
    }
  }
}

TEST_CASE("nktp_knots rejects inconsistent counts") {
  const Eigen::VectorXd params = Eigen::VectorXd::LinSpaced(6, 0.0, 1.0);
  CHECK_THROWS_AS(nktp_knots(params, 6, 3), ConfigError);   // points == controls
  CHECK_THROWS_AS(nktp_knots(params, 3, 3), ConfigError);   // controls == degree
}
