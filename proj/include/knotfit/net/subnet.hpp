#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "knotfit/ad/tape.hpp"

namespace knotfit {

// Weights and biases of one feedforward subnetwork with two hidden layers:
// input -> hidden1 -> hidden2 -> output. The output is always pushed through
// a softmax, which keeps any vector it emits positive and summing to 1.
struct SubnetParams {
  Eigen::MatrixXd w1, w2, w3;
  Eigen::MatrixXd b1, b2, b3;  // column vectors

  int input_dim() const { return static_cast<int>(w1.cols()); }
  int hidden_dim() const { return static_cast<int>(w1.rows()); }
  int output_dim() const { return static_cast<int>(w3.rows()); }
  std::size_t num_params() const {
    return static_cast<std::size_t>(w1.size() + w2.size() + w3.size() +
                                    b1.size() + b2.size() + b3.size());
  }
};

// Hidden width used when a config does not pin one.
int auto_hidden_width(int input_dim);

// Weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero.
// Identical seeds give bit-identical parameters.
SubnetParams init_subnet(int input_dim, int output_dim, int hidden,
                         std::uint64_t seed);

// Tape leaves for one subnetwork, in the fixed order w1,b1,w2,b2,w3,b3.
struct SubnetVars {
  ad::Var w1, b1, w2, b2, w3, b3;
};
SubnetVars subnet_leaves(ad::Tape& tape, const SubnetParams& params);

// softmax(W3 . relu(W2 . relu(W1 x + b1) + b2) + b3)
ad::Var subnet_forward(ad::Tape& tape, const SubnetVars& vars, ad::Var input);

}  // namespace knotfit
