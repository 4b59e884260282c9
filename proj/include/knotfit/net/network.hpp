#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "knotfit/ad/tape.hpp"
#include "knotfit/geom/bspline_tape.hpp"
#include "knotfit/geom/point_set.hpp"
#include "knotfit/net/subnet.hpp"

namespace knotfit {

// Stack of subnetworks covering interior-knot counts from max_interior down
// to min_interior in steps of `decrement`. Subnetwork 1 keeps the dimension
// of the initial difference vector; each later subnetwork shrinks it by the
// decrement, so the k-th output encodes max_interior - (k-1)*decrement knots.
struct NetworkConfig {
  int max_interior = 9;
  int min_interior = 5;
  int decrement = 1;
  int degree = 3;
  int hidden = 0;  // 0 -> auto_hidden_width(input_dim)
  bool use_paramnet = false;

  void validate() const;
  int num_subnets() const {
    return (max_interior - min_interior) / decrement + 1;
  }
  // interior-knot count of subnetwork k (0-based)
  int interior_at(int k) const { return max_interior - k * decrement; }
  int input_dim(int k) const {
    return (k == 0 ? max_interior : interior_at(k - 1)) + 1;
  }
  int output_dim(int k) const { return interior_at(k) + 1; }
  int hidden_at(int k) const {
    return hidden > 0 ? hidden : auto_hidden_width(input_dim(k));
  }
};

// m interior knots are encoded by m+1 positive increments summing to 1; the
// partial sums land the final increment exactly on the right endpoint.
Eigen::VectorXd uniform_differences(int num_interior);
Eigen::VectorXd differences_from_interior(const std::vector<double>& interior);
void validate_difference_vector(const Eigen::VectorXd& du);

// Seeded initialization of the whole stack (subnetwork k uses seed + k).
std::vector<SubnetParams> init_network(const NetworkConfig& config,
                                       std::uint64_t seed);

// Shape check of a parameter stack against a config; throws ConfigError on a
// chain mismatch so misconfiguration fails before any training.
void validate_network(const NetworkConfig& config,
                      const std::vector<SubnetParams>& subnets);

// Parameter values produced by the parametrization subnetwork: the softmax
// output is partial-summed and pinned to s_0 = 0, s_N = 1, giving a strictly
// increasing parameter sequence shared by every design matrix in the stack.
struct ParamNetResult {
  std::vector<ad::Var> scalars;  // length N+1
  Eigen::VectorXd values;
};
ParamNetResult paramnet_forward(ad::Tape& tape, const SubnetVars& vars,
                                const Eigen::VectorXd& ds0);

struct StackResult {
  std::vector<ad::Var> subnet_loss;  // scalar nodes, mean squared residual
  ad::Var total_loss;
  std::vector<double> loss_values;
  std::vector<KnotVector> knots;
  std::vector<Eigen::MatrixXd> controls;
};

// One forward pass of the whole stack: chain the subnetworks from du0,
// recover knots, assemble design matrices, solve for controls, and sum the
// per-subnetwork fitting losses. Losses are normalized by the point count.
StackResult stack_forward(ad::Tape& tape, const std::vector<SubnetVars>& vars,
                          const NetworkConfig& config,
                          const Eigen::VectorXd& du0, const PointSet& ps,
                          double lambda,
                          const ParamNetResult* param_override = nullptr);

}  // namespace knotfit
