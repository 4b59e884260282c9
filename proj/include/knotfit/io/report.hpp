#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "knotfit/train/trainer.hpp"

namespace knotfit {

// Everything the `fit` pipeline needs; flags of the CLI mirror these fields
// one-to-one. The echo embedded in a Report is sufficient to re-run it.
struct RunConfig {
  std::string input;           // path or builtin dataset name
  std::string format = "auto";  // csv | json | auto (by extension)
  int params_col = -1;          // column holding parameters, -1 = none
  int gen_count = 0;            // builtin sample count, 0 = dataset default
  double gen_noise = 0.0;
  std::uint64_t gen_seed = 0;
  int degree = 3;
  int count_lo = 5;
  int count_hi = 9;
  bool rough = false;        // treat lo:hi as the wide range, bracket first
  int rough_decrement = 5;
  int rough_iters = 500;
  int solve_decrement = 1;
  int max_iters = 2000;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  double select_slack = 0.05;
  double lambda = 1e-8;
  std::string parametrization = "chord";  // chord | network
  bool merge = false;
  double merge_tol = 0.01;
  std::string outdir;

  void validate() const;
};

struct Report {
  std::string version;
  RunConfig config;
  int degree = 3;
  int selected_count = 0;
  std::vector<double> knots;  // full clamped sequence of the selected fit
  Eigen::MatrixXd control_points;          // raw data coordinates
  std::vector<int> counts;                 // ascending
  std::vector<double> final_losses;        // normalized, training coordinates
  std::vector<double> final_losses_frob;   // squared Frobenius norms
  double hausdorff_error = 0.0;            // raw data coordinates
  double wall_seconds = 0.0;
  int iterations = 0;
};

nlohmann::json to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Report& report);
Report report_from_json(const nlohmann::json& j);

// Writes report.json, loss_trace.csv, curve.csv and the two SVG plots into
// outdir (created if missing). Each file is written to a temporary name and
// renamed, and is byte-deterministic given an identical report.
void emit_artifacts(const Report& report, const LossTrace& trace,
                    const Eigen::MatrixXd& curve,
                    const Eigen::MatrixXd& data_points,
                    const std::string& outdir);

}  // namespace knotfit
