#include "knotfit/train/adam.hpp"

#include <cmath>
#include <string>

#include "knotfit/errors.hpp"

namespace knotfit {

void TrainConfig::validate() const {
  if (learning_rate <= 0.0) throw ConfigError("learning rate must be > 0");
  if (beta1 <= 0.0 || beta1 >= 1.0 || beta2 <= 0.0 || beta2 >= 1.0)
    throw ConfigError("Adam betas must lie in (0,1)");
  if (epsilon <= 0.0) throw ConfigError("Adam epsilon must be > 0");
  if (max_iters < 1 || rough_iters < 1)
    throw ConfigError("iteration budgets must be >= 1");
  if (lambda < 0.0) throw ConfigError("ridge weight must be >= 0");
  if (select_slack < 0.0) throw ConfigError("selection slack must be >= 0");
  if (merge_tol <= 0.0) throw ConfigError("merge tolerance must be > 0");
  if (stop_window < 1) throw ConfigError("stop window must be >= 1");
}

void adam_step(std::vector<Eigen::MatrixXd*>& params,
               const std::vector<Eigen::MatrixXd>& grads, AdamState& state,
               const TrainConfig& cfg) {
  if (params.size() != grads.size())
    throw ConfigError("parameter/gradient list size mismatch");
  if (state.m.empty()) {
    state.m.reserve(params.size());
    state.v.reserve(params.size());
    for (const Eigen::MatrixXd* p : params) {
      state.m.emplace_back(Eigen::ArrayXXd::Zero(p->rows(), p->cols()));
      state.v.emplace_back(Eigen::ArrayXXd::Zero(p->rows(), p->cols()));
    }
  }
  if (state.m.size() != params.size())
    throw ConfigError("Adam state does not match parameter list");

  ++state.step;
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Eigen::ArrayXXd g = grads[i].array();
    if (!g.isFinite().all())
      throw NumericError("non-finite gradient in tensor " +
                         std::to_string(i));
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g.square();
    params[i]->array() -= cfg.learning_rate * (state.m[i] / c1) /
                          ((state.v[i] / c2).sqrt() + cfg.epsilon);
  }
}

}  // namespace knotfit
