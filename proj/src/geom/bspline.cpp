#include "knotfit/geom/bspline.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "knotfit/errors.hpp"

namespace knotfit {

int find_span(const KnotVector& kv, double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::domain_error("parameter " + std::to_string(t) +
                            " outside [0,1]");
  const int p = kv.degree();
  const int n = kv.num_basis() - 1;
  if (t >= 1.0) return n;  // last non-degenerate span, never a zero-length one

  // binary search over spans [p, n]
  int lo = p;
  int hi = n + 1;
  int mid = (lo + hi) / 2;
  while (t < kv.knot(mid) || t >= kv.knot(mid + 1)) {
    if (t < kv.knot(mid))
      hi = mid;
    else
      lo = mid;
    mid = (lo + hi) / 2;
  }
  return mid;
}

namespace {

// Nonzero basis values N_{span-p..span} at t, triangular recursion over the
// local knot window. Denominators are positive for non-degenerate spans; the
// guard implements the 0/0 := 0 convention for repeated knots.
void basis_local(const KnotVector& kv, int span, double t, double* out) {
  const int p = kv.degree();
  std::vector<double> left(static_cast<std::size_t>(p + 1));
  std::vector<double> right(static_cast<std::size_t>(p + 1));
  out[0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[static_cast<std::size_t>(j)] = t - kv.knot(span + 1 - j);
    right[static_cast<std::size_t>(j)] = kv.knot(span + j) - t;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double den = right[static_cast<std::size_t>(r + 1)] +
                         left[static_cast<std::size_t>(j - r)];
      const double temp = den != 0.0 ? out[r] / den : 0.0;
      out[r] = saved + right[static_cast<std::size_t>(r + 1)] * temp;
      saved = left[static_cast<std::size_t>(j - r)] * temp;
    }
    out[j] = saved;
  }
}

}  // namespace

Eigen::VectorXd eval_basis(const KnotVector& kv, double t) {
  const int p = kv.degree();
  const int span = find_span(kv, t);
  Eigen::VectorXd dense = Eigen::VectorXd::Zero(kv.num_basis());
  std::vector<double> local(static_cast<std::size_t>(p + 1));
  basis_local(kv, span, t, local.data());
  for (int r = 0; r <= p; ++r)
    dense(span - p + r) = local[static_cast<std::size_t>(r)];
  return dense;
}

DesignMatrix build_design_matrix(const KnotVector& kv,
                                 const Eigen::VectorXd& params) {
  const int p = kv.degree();
  DesignMatrix a = DesignMatrix::Zero(params.size(), kv.num_basis());
  std::vector<double> local(static_cast<std::size_t>(p + 1));
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    const int span = find_span(kv, params(i));
    basis_local(kv, span, params(i), local.data());
    for (int r = 0; r <= p; ++r)
      a(i, span - p + r) = local[static_cast<std::size_t>(r)];
  }
  return a;
}

DesignMatrix build_design_matrix(const KnotVector& kv, const PointSet& ps) {
  return build_design_matrix(kv, ps.params);
}

Eigen::VectorXd eval_curve(const KnotVector& kv, const ControlNet& controls,
                           double t) {
  if (controls.rows() != kv.num_basis())
    throw ConfigError("control count does not match basis count");
  return controls.transpose() * eval_basis(kv, t);
}

Eigen::MatrixXd sample_curve(const KnotVector& kv, const ControlNet& controls,
                             int count) {
  if (count < 2) throw ConfigError("need at least 2 curve samples");
  Eigen::MatrixXd out(count, controls.cols());
  for (int i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / (count - 1);
    out.row(i) = eval_curve(kv, controls, t).transpose();
  }
  return out;
}

Eigen::MatrixXd eval_curve_at(const KnotVector& kv, const ControlNet& controls,
                              const Eigen::VectorXd& params) {
  if (controls.rows() != kv.num_basis())
    throw ConfigError("control count does not match basis count");
  return build_design_matrix(kv, params) * controls;
}

}  // namespace knotfit
