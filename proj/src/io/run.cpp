#include "knotfit/io/run.hpp"

#include <chrono>
#include <utility>

#include "knotfit/errors.hpp"
#include "knotfit/geom/bspline.hpp"
#include "knotfit/geom/hausdorff.hpp"
#include "knotfit/geom/least_squares.hpp"
#include "knotfit/io/dataset.hpp"
#include "knotfit/version.hpp"

namespace knotfit {

namespace {

int default_count(const std::string& name) {
  return name == kSpaceCurve ? 501 : 1001;
}

TrainConfig train_config_of(const RunConfig& cfg) {
  TrainConfig tc;
  tc.learning_rate = cfg.learning_rate;
  tc.max_iters = cfg.max_iters;
  tc.rough_iters = cfg.rough_iters;
  tc.seed = cfg.seed;
  tc.lambda = cfg.lambda;
  tc.select_slack = cfg.select_slack;
  tc.merge_tol = cfg.merge_tol;
  return tc;
}

}  // namespace

RunOutput run_fit(const RunConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();

  PointSet raw =
      is_builtin_dataset(cfg.input)
          ? gen_builtin(cfg.input,
                        cfg.gen_count > 0 ? cfg.gen_count
                                          : default_count(cfg.input),
                        cfg.gen_noise, cfg.gen_seed)
          : load_points(cfg.input, cfg.format, cfg.params_col);

  // isotropic normalization of the coordinates; parameters stay unchanged
  const Eigen::RowVectorXd corner = raw.points.colwise().minCoeff();
  const double diag =
      (raw.points.colwise().maxCoeff() - corner).norm();
  if (diag == 0.0) throw ConfigError("degenerate data: all points identical");
  PointSet normalized((raw.points.rowwise() - corner) / diag,
                      raw.params);

  const TrainConfig tc = train_config_of(cfg);

  int lo = cfg.count_lo;
  int hi = cfg.count_hi;
  if (cfg.rough) {
    NetworkConfig wide;
    wide.max_interior = cfg.count_hi;
    wide.min_interior = cfg.count_lo;
    wide.decrement = cfg.rough_decrement;
    wide.degree = cfg.degree;
    wide.use_paramnet = cfg.parametrization == "network";
    std::tie(lo, hi) = rough_train(wide, normalized, tc);
  }

  NetworkConfig net;
  net.max_interior = hi;
  net.min_interior = lo;
  net.decrement = cfg.solve_decrement;
  net.degree = cfg.degree;
  net.use_paramnet = cfg.parametrization == "network";

  FitResult fr = fit(net, normalized, tc);

  KnotVector final_knots = fr.knots;
  Eigen::MatrixXd controls = fr.controls;
  if (cfg.merge) {
    KnotVector merged =
        coalesce_knots(final_knots, cfg.merge_tol, normalized, cfg.lambda);
    if (merged.num_interior() != final_knots.num_interior()) {
      const DesignMatrix a = build_design_matrix(merged, normalized);
      controls = solve_controls(a, normalized.points, cfg.lambda);
      final_knots = std::move(merged);
    }
  }

  // back to raw coordinates
  Eigen::MatrixXd controls_raw = (controls * diag).rowwise() + corner;
  Eigen::MatrixXd curve = sample_curve(final_knots, controls_raw, 2000);

  Report report;
  report.version = kVersion;
  report.config = cfg;
  report.degree = cfg.degree;
  report.selected_count = final_knots.num_interior();
  report.knots.assign(final_knots.knots().begin(), final_knots.knots().end());
  report.counts = fr.counts;
  report.final_losses = fr.final_losses;
  report.final_losses_frob = fr.final_losses_frob;
  report.hausdorff_error = hausdorff(
      raw.points, eval_curve_at(final_knots, controls_raw, raw.params));
  report.control_points = std::move(controls_raw);
  report.iterations = fr.iterations;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  RunOutput out{std::move(report), std::move(fr.trace), std::move(curve),
                std::move(raw)};
  if (!cfg.outdir.empty())
    emit_artifacts(out.report, out.trace, out.curve, out.data.points,
                   cfg.outdir);
  return out;
}

}  // namespace knotfit
