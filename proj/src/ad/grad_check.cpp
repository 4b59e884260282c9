#include "knotfit/ad/grad_check.hpp"

#include <cmath>
#include <stdexcept>

namespace knotfit::ad {

namespace {

double eval_at(const TapeFn& f, const Eigen::VectorXd& x) {
  Tape tape;
  Var root = f(tape, x);
  return tape.value_scalar(root);
}

}  // namespace

double grad_check(const TapeFn& f, const Eigen::VectorXd& x0, double step) {
  Tape tape;
  Var root = f(tape, x0);
  tape.backward(root);

  Eigen::VectorXd analytic(x0.size());
  Eigen::Index at = 0;
  for (Var leaf : tape.leaves()) {
    const Eigen::MatrixXd g = tape.grad(leaf);
    const Eigen::Index len = g.size();
    if (at + len > x0.size())
      throw std::invalid_argument("tape function consumed more than x0");
    analytic.segment(at, len) =
        Eigen::Map<const Eigen::VectorXd>(g.data(), len);
    at += len;
  }
  if (at != x0.size())
    throw std::invalid_argument("tape function consumed less than x0");

  double worst = 0.0;
  for (Eigen::Index k = 0; k < x0.size(); ++k) {
    Eigen::VectorXd xp = x0, xm = x0;
    xp(k) += step;
    xm(k) -= step;
    const double numeric = (eval_at(f, xp) - eval_at(f, xm)) / (2.0 * step);
    const double a = analytic(k);
    const double err =
        std::abs(a) < 1e-8 ? std::abs(a - numeric)
                           : std::abs(a - numeric) / std::abs(a);
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace knotfit::ad
