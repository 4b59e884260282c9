#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace knotfit {

struct TrainConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int max_iters = 2000;
  int rough_iters = 500;
  std::uint64_t seed = 0;
  double lambda = 1e-8;        // ridge, relative to mean diag of A^T A
  double select_slack = 0.05;  // delta of the knot-count selection rule
  double merge_tol = 0.01;     // knot coalescing tolerance
  // stop when the total loss improves by less than this relative amount
  // over stop_window iterations; knot migration moves the loss on a scale of
  // a few hundred iterations, shorter windows stop mid-plateau
  double stop_rel_improvement = 1e-9;
  int stop_window = 250;

  void validate() const;
};

// First/second moment estimates for a list of tensors plus the shared step
// counter. Slots are initialized lazily to zeros of the parameter shapes.
struct AdamState {
  std::vector<Eigen::ArrayXXd> m, v;
  long step = 0;
};

// One bias-corrected Adam update applied elementwise to every tensor.
// Gradients must be finite; the offending tensor is named otherwise.
void adam_step(std::vector<Eigen::MatrixXd*>& params,
               const std::vector<Eigen::MatrixXd>& grads, AdamState& state,
               const TrainConfig& cfg);

}  // namespace knotfit
