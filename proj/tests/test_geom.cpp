#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "knotfit/errors.hpp"
#include "knotfit/geom/bspline.hpp"
#include "knotfit/geom/hausdorff.hpp"
#include "knotfit/geom/knot_vector.hpp"
#include "knotfit/geom/least_squares.hpp"
#include "knotfit/geom/point_set.hpp"
#include "knotfit/rng.hpp"

using namespace knotfit;

namespace {

// ---- independent oracles ----

// textbook recursive definition with the 0/0 := 0 convention
double naive_basis(const KnotVector& kv, int i, int p, double t) {
  if (p == 0) {
    if (kv.knot(i) <= t && t < kv.knot(i + 1)) return 1.0;
    // right-closed on the final non-degenerate span
    if (t == 1.0 && kv.knot(i) < kv.knot(i + 1) && kv.knot(i + 1) == 1.0)
      return 1.0;
    return 0.0;
  }
  const double d1 = kv.knot(i + p) - kv.knot(i);
  const double d2 = kv.knot(i + p + 1) - kv.knot(i + 1);
  const double a = d1 == 0.0 ? 0.0 : (t - kv.knot(i)) / d1 * naive_basis(kv, i, p - 1, t);
  const double b = d2 == 0.0
                       ? 0.0
                       : (kv.knot(i + p + 1) - t) / d2 *
                             naive_basis(kv, i + 1, p - 1, t);
  return a + b;
}

// de Casteljau evaluation of a Bezier curve (clamped spline, no interior
// knots) for cross-checking eval_basis / eval_curve
Eigen::VectorXd de_casteljau(const Eigen::MatrixXd& controls, double t) {
  Eigen::MatrixXd pts = controls;
  for (Eigen::Index level = pts.rows() - 1; level > 0; --level)
    for (Eigen::Index i = 0; i < level; ++i)
      pts.row(i) = (1.0 - t) * pts.row(i) + t * pts.row(i + 1);
  return pts.row(0);
}

int linear_scan_span(const KnotVector& kv, double t) {
  const int n = kv.num_basis() - 1;
  if (t >= 1.0) return n;
  for (int i = kv.degree(); i <= n; ++i)
    if (kv.knot(i) <= t && t < kv.knot(i + 1)) return i;
  return -1;
}

KnotVector random_knot_vector(Rng& rng, int degree, int num_interior) {
  // gaps bounded well away from zero keep the spacing floor inactive
  Eigen::VectorXd gaps(num_interior + 1);
  for (int i = 0; i <= num_interior; ++i) gaps(i) = rng.uniform(0.2, 1.0);
  gaps /= gaps.sum();
  std::vector<double> interior;
  double acc = 0.0;
  for (int i = 0; i < num_interior; ++i) {
    acc += gaps(i);
    interior.push_back(acc);
  }
  return KnotVector(degree, std::move(interior));
}

Eigen::MatrixXd random_matrix(Rng& rng, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = rng.uniform(-1.0, 1.0);
  return m;
}

}  // namespace

TEST_CASE("knot vector construction and invariants") {
  const KnotVector kv(3, {0.5});
  CHECK(kv.num_knots() == 9);
  CHECK(kv.num_basis() == 5);
  CHECK(kv.num_interior() == 1);
  CHECK(kv.knot(0) == 0.0);
  CHECK(kv.knot(3) == 0.0);
  CHECK(kv.knot(4) == 0.5);
  CHECK(kv.knot(8) == 1.0);

  CHECK_THROWS_AS(KnotVector(3, {0.0}), ConfigError);
  CHECK_THROWS_AS(KnotVector(3, {1.0}), ConfigError);
  CHECK_THROWS_AS(KnotVector(3, {0.6, 0.4}), ConfigError);
  // multiplicity up to the degree is allowed, above it is not
  CHECK_NOTHROW(KnotVector(3, {0.5, 0.5, 0.5}));
  CHECK_THROWS_AS(KnotVector(3, {0.5, 0.5, 0.5, 0.5}), ConfigError);
  // spacing below the floor is rejected
  CHECK_THROWS_AS(KnotVector(3, {0.5, 0.5 + 1e-9}), ConfigError);
}

TEST_CASE("find_span") {
  const KnotVector kv(3, {0.5});
  // only candidate span for t = 0.25 is [0, 0.5)
  CHECK(find_span(kv, 0.25) == 3);
  CHECK(kv.knot(find_span(kv, 0.25)) == 0.0);
  CHECK(kv.knot(find_span(kv, 0.25) + 1) == 0.5);

  // t = 1 maps to the last non-degenerate span
  const int last = find_span(kv, 1.0);
  CHECK(kv.knot(last) < kv.knot(last + 1));
  CHECK(kv.knot(last + 1) == 1.0);

  const KnotVector kv4(3, {0.2, 0.4, 0.6, 0.8});
  CHECK(find_span(kv4, 0.5) == linear_scan_span(kv4, 0.5));
  CHECK(kv4.knot(find_span(kv4, 0.5)) == 0.4);
  CHECK(kv4.knot(find_span(kv4, 0.5) + 1) == 0.6);

  Rng rng(7);
  for (int rep = 0; rep < 200; ++rep) {
    const KnotVector k = random_knot_vector(rng, 3, 1 + rep % 8);
    const double t = rng.unit();
    CHECK(find_span(k, t) == linear_scan_span(k, t));
  }
  CHECK(find_span(kv, 1.0) == linear_scan_span(kv, 1.0));

  CHECK_THROWS_AS(find_span(kv, -0.1), std::domain_error);
  CHECK_THROWS_AS(find_span(kv, 1.1), std::domain_error);
}

TEST_CASE("eval_basis degree 0") {
  const KnotVector kv(0, {0.5});
  const Eigen::VectorXd b = eval_basis(kv, 0.25);
  CHECK(b.size() == 2);
  CHECK(b(0) == 1.0);
  CHECK(b(1) == 0.0);
}

TEST_CASE("eval_basis cubic Bezier matches Bernstein / de Casteljau") {
  const KnotVector kv(3, {});
  const Eigen::VectorXd b = eval_basis(kv, 0.5);
  // binomial Bernstein values at t = 1/2
  CHECK(b(0) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(b(1) == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(b(2) == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(b(3) == doctest::Approx(0.125).epsilon(1e-14));

  Rng rng(11);
  const Eigen::MatrixXd controls = random_matrix(rng, 4, 2);
  for (double t : {0.0, 0.1, 0.3, 0.5, 0.77, 1.0}) {
    const Eigen::VectorXd curve = eval_curve(kv, controls, t);
    const Eigen::VectorXd oracle = de_casteljau(controls, t);
    CHECK((curve - oracle).norm() < 1e-12);
  }
}

TEST_CASE("eval_basis equals the recursive definition") {
  Rng rng(13);
  for (int rep = 0; rep < 50; ++rep) {
    const int p = 1 + rep % 3;
    const KnotVector kv = random_knot_vector(rng, p, rep % 6);
    const double t = rng.unit();
    const Eigen::VectorXd b = eval_basis(kv, t);
    for (int i = 0; i < kv.num_basis(); ++i)
      CHECK(b(i) == doctest::Approx(naive_basis(kv, i, p, t)).epsilon(1e-12));
  }
}

TEST_CASE("partition of unity, non-negativity, local support") {
  Rng rng(17);
  for (int rep = 0; rep < 1000; ++rep) {
    const KnotVector kv = random_knot_vector(rng, 3, rep % 9);
    const double t = rep % 10 == 0 ? (rep % 20 == 0 ? 0.0 : 1.0) : rng.unit();
    const Eigen::VectorXd b = eval_basis(kv, t);
    CHECK(std::abs(b.sum() - 1.0) < 1e-12);
    int nonzeros = 0;
    for (int i = 0; i < b.size(); ++i) {
      CHECK(b(i) >= 0.0);
      if (b(i) != 0.0) {
        ++nonzeros;
        // local support: N_i vanishes outside [u_i, u_{i+p+1}]
        const bool inside =
            kv.knot(i) <= t && t <= kv.knot(i + kv.degree() + 1);
        CHECK(inside);
      }
    }
    CHECK(nonzeros <= kv.degree() + 1);
  }
}

TEST_CASE("build_design_matrix") {
  // clamped endpoint rows of a Bezier
  {
    Eigen::MatrixXd pts(2, 2);
    pts << 0.0, 0.0, 1.0, 1.0;
    const PointSet ps = PointSet::with_chord_params(pts);
    const DesignMatrix a = build_design_matrix(KnotVector(3, {}), ps);
    CHECK(a.rows() == 2);
    CHECK(a.cols() == 4);
    CHECK(a(0, 0) == 1.0);
    CHECK(a.row(0).tail(3).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a(1, 3) == 1.0);
    CHECK(a.row(1).head(3).cwiseAbs().maxCoeff() == 0.0);
  }

  // per-entry oracle on a 5x4 system
  {
    Eigen::VectorXd params = Eigen::VectorXd::LinSpaced(5, 0.0, 1.0);
    const KnotVector kv(3, {});
    const DesignMatrix a = build_design_matrix(kv, params);
    CHECK(a.rows() == 5);
    CHECK(a.cols() == 4);
    for (int i = 0; i < 5; ++i) {
      const Eigen::VectorXd row = eval_basis(kv, params(i));
      CHECK((a.row(i).transpose() - row).cwiseAbs().maxCoeff() == 0.0);
      CHECK(std::abs(a.row(i).sum() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("solve_controls") {
  Rng rng(23);

  // exact representability: data sampled from a spline is reproduced
  {
    const KnotVector kv(3, {0.3, 0.7});
    const Eigen::MatrixXd truth = random_matrix(rng, kv.num_basis(), 2);
    Eigen::VectorXd params = Eigen::VectorXd::LinSpaced(40, 0.0, 1.0);
    const DesignMatrix a = build_design_matrix(kv, params);
    const Eigen::MatrixXd pts = a * truth;
    const ControlNet c = solve_controls(a, pts, 0.0);
    CHECK((a * c - pts).norm() < 1e-10);
  }

  // square invertible system is interpolation
  {
    Eigen::VectorXd params(4);
    params << 0.0, 0.35, 0.65, 1.0;
    const KnotVector kv(3, {});
    const DesignMatrix a = build_design_matrix(kv, params);
    const Eigen::MatrixXd pts = random_matrix(rng, 4, 3);
    const ControlNet c = solve_controls(a, pts, 0.0);
    CHECK((a * c - pts).norm() < 1e-9);
    CHECK((c - a.inverse() * pts).norm() < 1e-9);
  }

  // random overdetermined ridge system vs the explicit normal-equations
  // oracle (A^T A + mu I)^-1 A^T P
  {
    const double lambda = 1e-8;
    const Eigen::MatrixXd a = random_matrix(rng, 20, 6);
    const Eigen::MatrixXd p = random_matrix(rng, 20, 2);
    const ControlNet c = solve_controls(a, p, lambda);
    const double mu = effective_ridge(a, lambda);
    Eigen::MatrixXd h = a.transpose() * a;
    h.diagonal().array() += mu;
    const Eigen::MatrixXd oracle = h.inverse() * (a.transpose() * p);
    CHECK((c - oracle).norm() / oracle.norm() < 1e-8);

    // stationarity of the regularized problem
    const double resid = (a.transpose() * (p - a * c) - mu * c).norm();
    CHECK(resid <= 1e-8 * (a.transpose() * p).norm());

    // and of the plain least-squares problem
    const ControlNet c0 = solve_controls(a, p, 0.0);
    CHECK((a.transpose() * (p - a * c0)).norm() <=
          1e-8 * (a.transpose() * p).norm());
  }

  // rank-deficient with lambda = 0 advises ridge
  {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(6, 3);
    a.col(0).setOnes();
    a.col(1).setOnes();
    a.col(2) = random_matrix(rng, 6, 1);
    const Eigen::MatrixXd p = random_matrix(rng, 6, 1);
    CHECK_THROWS_AS(solve_controls(a, p, 0.0), NumericError);
    CHECK_NOTHROW(solve_controls(a, p, 1e-8));
  }

  // ridge limit: larger lambda shrinks the solution monotonically
  {
    const Eigen::MatrixXd a = random_matrix(rng, 15, 4);
    const Eigen::MatrixXd p = random_matrix(rng, 15, 2);
    const double n0 = solve_controls(a, p, 0.0).norm();
    const double n1 = solve_controls(a, p, 1.0).norm();
    const double n2 = solve_controls(a, p, 1e6).norm();
    CHECK(n1 < n0);
    CHECK(n2 < n1);
    CHECK(n2 < 1e-4 * n0);
  }
}

TEST_CASE("eval_curve endpoints and constant curves") {
  Rng rng(29);
  const KnotVector kv(3, {0.25, 0.5, 0.75});
  const Eigen::MatrixXd controls = random_matrix(rng, kv.num_basis(), 3);
  CHECK((eval_curve(kv, controls, 0.0).transpose() - controls.row(0)).norm() ==
        0.0);
  CHECK((eval_curve(kv, controls, 1.0).transpose() -
         controls.row(controls.rows() - 1))
            .norm() == 0.0);

  const Eigen::MatrixXd flat =
      Eigen::MatrixXd::Ones(kv.num_basis(), 2) * 0.37;
  for (double t : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    const Eigen::VectorXd pt = eval_curve(kv, flat, t);
    CHECK(std::abs(pt(0) - 0.37) < 1e-15);
    CHECK(std::abs(pt(1) - 0.37) < 1e-15);
  }
}

TEST_CASE("chord_length_params") {
  // collinear equispaced points give uniform parameters
  {
    Eigen::MatrixXd pts(5, 2);
    for (int i = 0; i < 5; ++i) pts.row(i) << i * 2.0, i * 2.0;
    const Eigen::VectorXd s = chord_length_params(pts);
    for (int i = 0; i < 5; ++i) CHECK(s(i) == doctest::Approx(i / 4.0));
  }

  // segment lengths 1 and 3
  {
    Eigen::MatrixXd pts(3, 2);
    pts << 0.0, 0.0, 1.0, 0.0, 4.0, 0.0;
    const Eigen::VectorXd s = chord_length_params(pts);
    CHECK(s(0) == 0.0);
    CHECK(s(1) == doctest::Approx(0.25));
    CHECK(s(2) == 1.0);
  }

  // random polyline increments match the pairwise-distance oracle
  {
    Rng rng(31);
    const Eigen::MatrixXd pts = random_matrix(rng, 20, 3);
    const Eigen::VectorXd s = chord_length_params(pts);
    double total = 0.0;
    for (int i = 1; i < 20; ++i)
      total += (pts.row(i) - pts.row(i - 1)).norm();
    for (int i = 1; i < 20; ++i) {
      const double inc = (pts.row(i) - pts.row(i - 1)).norm() / total;
      CHECK(s(i) - s(i - 1) == doctest::Approx(inc).epsilon(1e-12));
    }
  }

  CHECK_THROWS_AS(chord_length_params(Eigen::MatrixXd::Zero(3, 2)),
                  ConfigError);
}

TEST_CASE("hausdorff") {
  Eigen::MatrixXd a(1, 2), b(1, 2);
  a << 0.0, 0.0;
  b << 3.0, 4.0;
  CHECK(hausdorff(a, a) == 0.0);
  CHECK(hausdorff(a, b) == doctest::Approx(5.0));

  Rng rng(37);
  const Eigen::MatrixXd x = random_matrix(rng, 50, 2);
  const Eigen::MatrixXd y = random_matrix(rng, 50, 2);

  // brute-force double-loop oracle
  auto directed = [](const Eigen::MatrixXd& from, const Eigen::MatrixXd& to) {
    double worst = 0.0;
    for (int i = 0; i < from.rows(); ++i) {
      double best = 1e300;
      for (int j = 0; j < to.rows(); ++j)
        best = std::min(best, (from.row(i) - to.row(j)).norm());
      worst = std::max(worst, best);
    }
    return worst;
  };
  CHECK(hausdorff(x, y) == std::max(directed(x, y), directed(y, x)));
  CHECK(hausdorff(x, y) == hausdorff(y, x));

  CHECK_THROWS_AS(hausdorff(Eigen::MatrixXd(0, 2), b), std::domain_error);
}

TEST_CASE("point set validation") {
  Eigen::MatrixXd pts(3, 2);
  pts << 0.0, 0.0, 1.0, 0.5, 2.0, 0.0;
  Eigen::VectorXd good(3), bad(3);
  good << 0.0, 0.5, 1.0;
  bad << 0.0, 0.6, 0.6;
  CHECK_NOTHROW(PointSet(pts, good));
  CHECK_THROWS_AS(PointSet(pts, bad), ConfigError);
  CHECK_THROWS_AS(PointSet(pts.topRows(1), good.head(1)), ConfigError);
}
