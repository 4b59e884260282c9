#include "knotfit/train/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>

#include "knotfit/errors.hpp"
#include "knotfit/geom/bspline.hpp"
#include "knotfit/geom/hausdorff.hpp"
#include "knotfit/geom/least_squares.hpp"

namespace knotfit {

std::vector<double> LossTrace::final_losses() const {
  std::vector<double> out;
  out.reserve(per_subnet.size());
  for (const std::vector<double>& column : per_subnet) out.push_back(column.back());
  return out;
}

namespace {

std::string format_knots(const KnotVector& kv) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < kv.interior().size(); ++i)
    os << (i ? ", " : "") << kv.interior()[i];
  os << "]";
  return os.str();
}

void collect_tensors(SubnetParams& s, std::vector<Eigen::MatrixXd*>& out) {
  out.push_back(&s.w1);
  out.push_back(&s.b1);
  out.push_back(&s.w2);
  out.push_back(&s.b2);
  out.push_back(&s.w3);
  out.push_back(&s.b3);
}

void collect_grads(const ad::Tape& tape, const SubnetVars& v,
                   std::vector<Eigen::MatrixXd>& out) {
  out.push_back(tape.grad(v.w1));
  out.push_back(tape.grad(v.b1));
  out.push_back(tape.grad(v.w2));
  out.push_back(tape.grad(v.b2));
  out.push_back(tape.grad(v.w3));
  out.push_back(tape.grad(v.b3));
}

// Exactly representable data trains to the numerical-zero floor, where
// losses differ by orders of magnitude while being equally converged. The
// ratio rule is meaningless there, so losses are clamped to a floor relative
// to the data variance before counts are compared.
double converged_floor(const PointSet& ps) {
  const Eigen::RowVectorXd mean = ps.points.colwise().mean();
  const double var = (ps.points.rowwise() - mean).squaredNorm() / ps.count();
  return 1e-9 * std::max(var, 1e-30);
}

std::vector<double> clamp_to_floor(const std::vector<double>& losses,
                                   double floor) {
  std::vector<double> out = losses;
  for (double& l : out) l = std::max(l, floor);
  return out;
}

}  // namespace

TrainOutcome train(const NetworkConfig& net, const PointSet& ps,
                   const TrainConfig& cfg) {
  cfg.validate();
  net.validate();

  const int n = net.num_subnets();
  std::vector<SubnetParams> subnets = init_network(net, cfg.seed);
  validate_network(net, subnets);

  std::optional<SubnetParams> paramnet;
  Eigen::VectorXd ds0;
  if (net.use_paramnet) {
    const int incr = ps.count() - 1;
    ds0.resize(incr);
    for (int i = 0; i < incr; ++i) ds0(i) = ps.params(i + 1) - ps.params(i);
    const int hidden = net.hidden > 0 ? net.hidden : auto_hidden_width(incr);
    paramnet = init_subnet(incr, incr, hidden,
                           cfg.seed + static_cast<std::uint64_t>(n));
  }

  std::vector<Eigen::MatrixXd*> tensors;
  for (SubnetParams& s : subnets) collect_tensors(s, tensors);
  if (paramnet) collect_tensors(*paramnet, tensors);

  const Eigen::VectorXd du0 = uniform_differences(net.max_interior);

  TrainOutcome out;
  out.trace.counts.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    out.trace.counts[static_cast<std::size_t>(k)] = net.interior_at(k);
  out.trace.per_subnet.assign(static_cast<std::size_t>(n), {});

  AdamState adam;
  ad::Tape tape;
  std::vector<SubnetVars> vars;
  std::vector<Eigen::MatrixXd> grads;

  for (int it = 0; it < cfg.max_iters; ++it) {
    tape.reset();
    vars.clear();
    for (const SubnetParams& s : subnets)
      vars.push_back(subnet_leaves(tape, s));
    std::optional<SubnetVars> pvars;
    std::optional<ParamNetResult> pres;
    if (paramnet) {
      pvars = subnet_leaves(tape, *paramnet);
      pres = paramnet_forward(tape, *pvars, ds0);
    }

    StackResult res = stack_forward(tape, vars, net, du0, ps, cfg.lambda,
                                    pres ? &*pres : nullptr);

    const double total = tape.value_scalar(res.total_loss);
    if (!std::isfinite(total)) {
      for (int k = 0; k < n; ++k)
        if (!std::isfinite(res.loss_values[static_cast<std::size_t>(k)]))
          throw NumericError(
              "non-finite loss at iteration " + std::to_string(it) +
              " for the subnetwork with " + std::to_string(net.interior_at(k)) +
              " interior knots " +
              format_knots(res.knots[static_cast<std::size_t>(k)]));
      throw NumericError("non-finite total loss at iteration " +
                         std::to_string(it));
    }

    for (int k = 0; k < n; ++k)
      out.trace.per_subnet[static_cast<std::size_t>(k)].push_back(
          res.loss_values[static_cast<std::size_t>(k)]);
    out.trace.total.push_back(total);
    out.knots = std::move(res.knots);
    out.controls = std::move(res.controls);
    out.final_losses = std::move(res.loss_values);
    out.iterations = it + 1;

    tape.backward(res.total_loss);
    grads.clear();
    for (const SubnetVars& v : vars) collect_grads(tape, v, grads);
    if (pvars) collect_grads(tape, *pvars, grads);
    for (std::size_t g = 0; g < grads.size(); ++g) {
      if (grads[g].allFinite()) continue;
      const std::size_t sub = g / 6;
      throw NumericError(
          "non-finite gradient at iteration " + std::to_string(it) +
          (sub < subnets.size()
               ? " in subnetwork " + std::to_string(sub + 1)
               : " in the parametrization subnetwork"));
    }
    adam_step(tensors, grads, adam, cfg);

    if (it >= cfg.stop_window) {
      const double prev =
          out.trace.total[static_cast<std::size_t>(it - cfg.stop_window)];
      if (prev - total < cfg.stop_rel_improvement * std::abs(prev)) break;
    }
  }
  return out;
}

int select_knot_count(const std::vector<int>& counts,
                      const std::vector<double>& losses, double slack) {
  if (counts.empty() || counts.size() != losses.size())
    throw ConfigError("selection needs matching non-empty counts and losses");
  for (double l : losses)
    if (!std::isfinite(l)) throw ConfigError("selection needs finite losses");

  std::vector<std::size_t> order(counts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return counts[a] < counts[b]; });

  const double best = *std::min_element(losses.begin(), losses.end());
  for (std::size_t i : order)
    if (losses[i] <= (1.0 + slack) * best) return counts[i];
  return counts[order.back()];  // unreachable: the argmin always qualifies
}

std::pair<int, int> refine_bracket(const std::vector<int>& counts,
                                   const std::vector<double>& losses,
                                   double slack) {
  if (counts.size() < 2 || counts.size() != losses.size())
    throw ConfigError("bracketing needs at least two counts");

  std::vector<std::size_t> order(counts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return counts[a] < counts[b]; });
  const int step = counts[order[1]] - counts[order[0]];
  if (step < 1) throw ConfigError("bracketing needs distinct counts");

  const int accepted = select_knot_count(counts, losses, slack);
  if (accepted == counts[order.front()])
    return {counts[order[0]], counts[order[1]]};
  return {accepted - step, accepted};
}

std::pair<int, int> rough_train(const NetworkConfig& wide, const PointSet& ps,
                                const TrainConfig& cfg) {
  wide.validate();
  if (wide.num_subnets() < 2)
    throw ConfigError("rough training needs a range spanning >= 2 counts");
  TrainConfig rough_cfg = cfg;
  rough_cfg.max_iters = cfg.rough_iters;
  const TrainOutcome out = train(wide, ps, rough_cfg);
  return refine_bracket(out.trace.counts,
                        clamp_to_floor(out.final_losses, converged_floor(ps)),
                        cfg.select_slack);
}

namespace {

struct MergedRun {
  std::size_t first = 0;   // index into the coalesced interior sequence
  std::size_t mult = 0;
};

KnotVector coalesce_impl(const KnotVector& kv, double merge_tol,
                         std::vector<MergedRun>* runs) {
  if (merge_tol <= 0.0) throw ConfigError("merge tolerance must be > 0");
  const std::span<const double> interior = kv.interior();
  std::vector<double> merged;
  merged.reserve(interior.size());

  std::size_t i = 0;
  while (i < interior.size()) {
    std::size_t j = i + 1;
    double sum = interior[i];
    while (j < interior.size() && interior[j] - interior[j - 1] < merge_tol) {
      sum += interior[j];
      ++j;
    }
    const std::size_t run = j - i;
    if (run == 1) {
      merged.push_back(interior[i]);
    } else {
      const double mean = sum / static_cast<double>(run);
      const std::size_t mult =
          std::min(run, static_cast<std::size_t>(kv.degree()));
      if (runs) runs->push_back({merged.size(), mult});
      merged.insert(merged.end(), mult, mean);
    }
    i = j;
  }
  return KnotVector(kv.degree(), std::move(merged));
}

double refit_sse(int degree, const std::vector<double>& interior,
                 const PointSet& ps, double lambda) {
  const KnotVector kv(degree, interior);
  const DesignMatrix a = build_design_matrix(kv, ps);
  const ControlNet c = solve_controls(a, ps.points, lambda);
  return (ps.points - a * c).squaredNorm();
}

}  // namespace

KnotVector coalesce_knots(const KnotVector& kv, double merge_tol) {
  return coalesce_impl(kv, merge_tol, nullptr);
}

KnotVector coalesce_knots(const KnotVector& kv, double merge_tol,
                          const PointSet& ps, double lambda) {
  std::vector<MergedRun> runs;
  const KnotVector merged = coalesce_impl(kv, merge_tol, &runs);
  if (runs.empty()) return merged;

  std::vector<double> interior(merged.interior().begin(),
                               merged.interior().end());
  const double guard = 2.0 * interior_spacing_floor(
                                 static_cast<int>(interior.size()));
  for (const MergedRun& run : runs) {
    const double lo =
        (run.first == 0 ? 0.0 : interior[run.first - 1]) + guard;
    const double hi = (run.first + run.mult == interior.size()
                           ? 1.0
                           : interior[run.first + run.mult]) -
                      guard;
    if (!(hi > lo)) continue;

    auto eval = [&](double u) {
      std::vector<double> trial = interior;
      for (std::size_t k = 0; k < run.mult; ++k) trial[run.first + k] = u;
      return refit_sse(kv.degree(), trial, ps, lambda);
    };

    // golden-section search on the refit residual
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = std::max(lo, interior[run.first] - 0.05);
    double b = std::min(hi, interior[run.first] + 0.05);
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = eval(x1);
    double f2 = eval(x2);
    for (int it = 0; it < 40 && b - a > 1e-10; ++it) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = eval(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = eval(x2);
      }
    }
    const double best = f1 < f2 ? x1 : x2;
    if (eval(best) <= eval(interior[run.first]))
      for (std::size_t k = 0; k < run.mult; ++k)
        interior[run.first + k] = best;
  }
  return KnotVector(kv.degree(), std::move(interior));
}

FitResult fit(const NetworkConfig& net, const PointSet& ps,
              const TrainConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  TrainOutcome out = train(net, ps, cfg);

  const int selected = select_knot_count(
      out.trace.counts, clamp_to_floor(out.final_losses, converged_floor(ps)),
      cfg.select_slack);
  std::size_t idx = 0;
  for (std::size_t k = 0; k < out.trace.counts.size(); ++k)
    if (out.trace.counts[k] == selected) idx = k;

  // report per-count arrays in ascending count order
  std::vector<std::size_t> order(out.trace.counts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out.trace.counts[a] < out.trace.counts[b];
  });

  FitResult r{
      .selected_count = selected,
      .knots = out.knots[idx],
      .controls = out.controls[idx],
      .counts = {},
      .final_losses = {},
      .final_losses_frob = {},
      .hausdorff_error = 0.0,
      .wall_seconds = 0.0,
      .seed = cfg.seed,
      .net_config = net,
      .train_config = cfg,
      .trace = std::move(out.trace),
      .iterations = out.iterations,
  };
  for (std::size_t k : order) {
    r.counts.push_back(r.trace.counts[k]);
    const double loss = out.final_losses[k];
    r.final_losses.push_back(loss);
    r.final_losses_frob.push_back(loss * ps.count());
  }
  r.hausdorff_error =
      hausdorff(ps.points, eval_curve_at(r.knots, r.controls, ps.params));
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return r;
}

}  // namespace knotfit
