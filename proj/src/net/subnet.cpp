#include "knotfit/net/subnet.hpp"

#include <algorithm>
#include <cmath>

#include "knotfit/errors.hpp"
#include "knotfit/rng.hpp"

namespace knotfit {

int auto_hidden_width(int input_dim) { return std::max(32, 4 * input_dim); }

namespace {

Eigen::MatrixXd uniform_matrix(int rows, int cols, double bound, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = rng.uniform(-bound, bound);
  return m;
}

}  // namespace

SubnetParams init_subnet(int input_dim, int output_dim, int hidden,
                         std::uint64_t seed) {
  if (input_dim < 1 || output_dim < 1 || hidden < 1)
    throw ConfigError("subnetwork dimensions must be >= 1");
  Rng rng(seed);
  SubnetParams p;
  p.w1 = uniform_matrix(hidden, input_dim, 1.0 / std::sqrt(input_dim), rng);
  p.w2 = uniform_matrix(hidden, hidden, 1.0 / std::sqrt(hidden), rng);
  p.w3 = uniform_matrix(output_dim, hidden, 1.0 / std::sqrt(hidden), rng);
  p.b1 = Eigen::MatrixXd::Zero(hidden, 1);
  p.b2 = Eigen::MatrixXd::Zero(hidden, 1);
  p.b3 = Eigen::MatrixXd::Zero(output_dim, 1);
  return p;
}

SubnetVars subnet_leaves(ad::Tape& tape, const SubnetParams& params) {
  SubnetVars v;
  v.w1 = tape.leaf(params.w1);
  v.b1 = tape.leaf(params.b1);
  v.w2 = tape.leaf(params.w2);
  v.b2 = tape.leaf(params.b2);
  v.w3 = tape.leaf(params.w3);
  v.b3 = tape.leaf(params.b3);
  return v;
}

ad::Var subnet_forward(ad::Tape& tape, const SubnetVars& vars, ad::Var input) {
  const ad::Var h1 =
      tape.relu(tape.add(tape.matmul(vars.w1, input), vars.b1));
  const ad::Var h2 = tape.relu(tape.add(tape.matmul(vars.w2, h1), vars.b2));
  return tape.softmax(tape.add(tape.matmul(vars.w3, h2), vars.b3));
}

}  // namespace knotfit
