#include "knotfit/net/network.hpp"

#include <cmath>
#include <string>

#include "knotfit/errors.hpp"

namespace knotfit {

void NetworkConfig::validate() const {
  if (min_interior < 1)
    throw ConfigError("minimum interior-knot count must be >= 1");
  if (max_interior < min_interior)
    throw ConfigError("knot-count range is empty");
  if (decrement < 1) throw ConfigError("dimension decrement must be >= 1");
  if ((max_interior - min_interior) % decrement != 0)
    throw ConfigError("knot-count range must be divisible by the decrement");
  if (degree < 1) throw ConfigError("degree must be >= 1");
  if (hidden < 0) throw ConfigError("hidden width must be >= 0");
}

Eigen::VectorXd uniform_differences(int num_interior) {
  if (num_interior < 0) throw ConfigError("interior-knot count must be >= 0");
  return Eigen::VectorXd::Constant(num_interior + 1,
                                   1.0 / (num_interior + 1));
}

Eigen::VectorXd differences_from_interior(
    const std::vector<double>& interior) {
  const int m = static_cast<int>(interior.size());
  Eigen::VectorXd du(m + 1);
  double prev = 0.0;
  for (int i = 0; i < m; ++i) {
    du(i) = interior[static_cast<std::size_t>(i)] - prev;
    prev = interior[static_cast<std::size_t>(i)];
  }
  du(m) = 1.0 - prev;
  validate_difference_vector(du);
  return du;
}

void validate_difference_vector(const Eigen::VectorXd& du) {
  if (du.size() < 1) throw ConfigError("difference vector is empty");
  for (Eigen::Index i = 0; i < du.size(); ++i)
    if (!(du(i) > 0.0))
      throw ConfigError("difference vector entries must be positive");
  if (std::abs(du.sum() - 1.0) > 1e-12)
    throw ConfigError("difference vector must sum to 1");
}

std::vector<SubnetParams> init_network(const NetworkConfig& config,
                                       std::uint64_t seed) {
  config.validate();
  std::vector<SubnetParams> subnets;
  subnets.reserve(static_cast<std::size_t>(config.num_subnets()));
  for (int k = 0; k < config.num_subnets(); ++k)
    subnets.push_back(init_subnet(config.input_dim(k), config.output_dim(k),
                                  config.hidden_at(k),
                                  seed + static_cast<std::uint64_t>(k)));
  return subnets;
}

void validate_network(const NetworkConfig& config,
                      const std::vector<SubnetParams>& subnets) {
  config.validate();
  if (static_cast<int>(subnets.size()) != config.num_subnets())
    throw ConfigError("expected " + std::to_string(config.num_subnets()) +
                      " subnetworks, got " + std::to_string(subnets.size()));
  for (int k = 0; k < config.num_subnets(); ++k) {
    const SubnetParams& s = subnets[static_cast<std::size_t>(k)];
    if (s.input_dim() != config.input_dim(k) ||
        s.output_dim() != config.output_dim(k))
      throw ConfigError("subnetwork " + std::to_string(k + 1) + " maps " +
                        std::to_string(s.input_dim()) + "->" +
                        std::to_string(s.output_dim()) + ", config needs " +
                        std::to_string(config.input_dim(k)) + "->" +
                        std::to_string(config.output_dim(k)));
    if (s.w2.rows() != s.w2.cols() || s.w1.rows() != s.w2.rows() ||
        s.w3.cols() != s.w2.rows() || s.b1.size() != s.w1.rows() ||
        s.b2.size() != s.w2.rows() || s.b3.size() != s.w3.rows())
      throw ConfigError("subnetwork " + std::to_string(k + 1) +
                        " has inconsistent layer shapes");
  }
}

ParamNetResult paramnet_forward(ad::Tape& tape, const SubnetVars& vars,
                                const Eigen::VectorXd& ds0) {
  validate_difference_vector(ds0);
  const int n = static_cast<int>(ds0.size());  // number of increments
  const ad::Var out = subnet_forward(tape, vars, tape.constant(ds0));
  if (tape.rows(out) != n)
    throw ConfigError("parametrization subnetwork must preserve dimension");
  const ad::Var partial = tape.cumsum(out);

  ParamNetResult res;
  res.scalars.reserve(static_cast<std::size_t>(n + 1));
  res.values.resize(n + 1);
  res.scalars.push_back(tape.constant(0.0));
  res.values(0) = 0.0;
  for (int i = 0; i < n - 1; ++i) {
    res.scalars.push_back(tape.index(partial, i));
    res.values(i + 1) = tape.value_scalar(res.scalars.back());
  }
  res.scalars.push_back(tape.constant(1.0));
  res.values(n) = 1.0;
  return res;
}

StackResult stack_forward(ad::Tape& tape, const std::vector<SubnetVars>& vars,
                          const NetworkConfig& config,
                          const Eigen::VectorXd& du0, const PointSet& ps,
                          double lambda, const ParamNetResult* param_override) {
  config.validate();
  const int n = config.num_subnets();
  if (static_cast<int>(vars.size()) != n)
    throw ConfigError("subnetwork count does not match config");
  if (static_cast<int>(du0.size()) != config.input_dim(0))
    throw ConfigError("initial difference vector has length " +
                      std::to_string(du0.size()) + ", subnetwork 1 expects " +
                      std::to_string(config.input_dim(0)));
  validate_difference_vector(du0);
  for (int k = 0; k < n; ++k) {
    const SubnetVars& v = vars[static_cast<std::size_t>(k)];
    if (tape.cols(v.w1) != config.input_dim(k) ||
        tape.rows(v.w3) != config.output_dim(k))
      throw ConfigError("subnetwork " + std::to_string(k + 1) + " maps " +
                        std::to_string(tape.cols(v.w1)) + "->" +
                        std::to_string(tape.rows(v.w3)) +
                        ", config needs " +
                        std::to_string(config.input_dim(k)) + "->" +
                        std::to_string(config.output_dim(k)));
  }

  if (param_override &&
      static_cast<int>(param_override->scalars.size()) != ps.count())
    throw ConfigError("parameter override length does not match point count");

  const ad::Var points = tape.constant(ps.points);
  const double norm = 1.0 / ps.count();

  StackResult res;
  res.subnet_loss.reserve(static_cast<std::size_t>(n));
  res.loss_values.reserve(static_cast<std::size_t>(n));
  res.knots.reserve(static_cast<std::size_t>(n));
  res.controls.reserve(static_cast<std::size_t>(n));

  ad::Var du = tape.constant(du0);
  ad::Var total;
  for (int k = 0; k < n; ++k) {
    du = subnet_forward(tape, vars[static_cast<std::size_t>(k)], du);
    if (tape.rows(du) != config.output_dim(k))
      throw ConfigError("subnetwork " + std::to_string(k + 1) +
                        " output dimension mismatch");
    TapeKnots tk = knots_from_differences(tape, du, config.degree);
    const ad::Var a = param_override
                          ? tape_design_matrix(tape, tk, param_override->scalars)
                          : tape_design_matrix(tape, tk, ps.params);
    const ad::Var c = tape.ls_solve(a, points, lambda);
    const ad::Var residual = tape.sub(tape.matmul(a, c), points);
    const ad::Var loss =
        tape.scale(tape.reduce_sum(tape.square(residual)), norm);

    res.subnet_loss.push_back(loss);
    res.loss_values.push_back(tape.value_scalar(loss));
    res.knots.push_back(std::move(tk.value));
    res.controls.push_back(tape.value(c));
    total = total.valid() ? tape.add(total, loss) : loss;
  }
  res.total_loss = total;
  return res;
}

}  // namespace knotfit
