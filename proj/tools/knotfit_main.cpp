// Command-line front end: `fit` runs the full pipeline, `gen` emits a builtin
// dataset, `baseline` fits fixed knot placements for comparison tables.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "knotfit/baselines/knot_placers.hpp"
#include "knotfit/errors.hpp"
#include "knotfit/geom/bspline.hpp"
#include "knotfit/geom/hausdorff.hpp"
#include "knotfit/geom/least_squares.hpp"
#include "knotfit/io/dataset.hpp"
#include "knotfit/io/run.hpp"
#include "knotfit/version.hpp"

namespace {

using namespace knotfit;

void parse_range(const std::string& text, int& lo, int& hi) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos)
    throw ConfigError("knot-count range must look like lo:hi");
  try {
    lo = std::stoi(text.substr(0, colon));
    hi = std::stoi(text.substr(colon + 1));
  } catch (const std::exception&) {
    throw ConfigError("knot-count range must look like lo:hi");
  }
}

int run_fit_command(RunConfig cfg, const std::string& range) {
  parse_range(range, cfg.count_lo, cfg.count_hi);
  const RunOutput out = run_fit(cfg);
  std::cout << to_json(out.report).dump(2) << "\n";
  return 0;
}

int run_gen_command(const std::string& name, int count, double noise,
                    std::uint64_t seed, const std::string& path) {
  const PointSet ps = gen_builtin(name, count, noise, seed);
  write_points_csv(ps, path);
  std::cout << "wrote " << ps.count() << " points to " << path << "\n";
  return 0;
}

int run_baseline_command(const std::string& input, const std::string& format,
                         int params_col, int count, const std::string& method,
                         int degree, double lambda, int gen_count,
                         double gen_noise, std::uint64_t gen_seed) {
  const PointSet ps =
      is_builtin_dataset(input)
          ? gen_builtin(input,
                        gen_count > 0 ? gen_count
                                      : (input == kSpaceCurve ? 501 : 1001),
                        gen_noise, gen_seed)
          : load_points(input, format, params_col);

  KnotVector kv = method == "uniform"
                      ? uniform_knots(count, degree)
                      : nktp_knots(ps.params, count + degree + 1, degree);
  const DesignMatrix a = build_design_matrix(kv, ps);
  const ControlNet c = solve_controls(a, ps.points, lambda);
  const double err = hausdorff(ps.points, sample_curve(kv, c, 2000));

  nlohmann::json j{{"method", method},
                   {"count", count},
                   {"degree", degree},
                   {"hausdorff_error", err},
                   {"knots", std::vector<double>(kv.knots().begin(),
                                                 kv.knots().end())}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free-knot B-spline approximation via stacked subnetworks"};
  app.set_version_flag("--version", std::string(knotfit::kVersion));
  app.require_subcommand(1);

  // fit
  RunConfig cfg;
  std::string range = "5:9";
  CLI::App* fit = app.add_subcommand("fit", "run the full fitting pipeline");
  fit->add_option("--input", cfg.input,
                  "dataset path, or builtin name (peak_function, space_curve)")
      ->required();
  fit->add_option("--format", cfg.format, "csv | json | auto");
  fit->add_option("--params-col", cfg.params_col,
                  "column index holding parameter values");
  fit->add_option("--gen-count", cfg.gen_count, "builtin sample count");
  fit->add_option("--gen-noise", cfg.gen_noise, "builtin noise amplitude");
  fit->add_option("--gen-seed", cfg.gen_seed, "builtin noise seed");
  fit->add_option("--degree", cfg.degree, "B-spline degree");
  fit->add_option("--counts", range, "interior knot-count range lo:hi");
  fit->add_flag("--rough", cfg.rough,
                "bracket the range with a coarse pass first");
  fit->add_option("--rough-decrement", cfg.rough_decrement,
                  "count decrement of the coarse pass");
  fit->add_option("--rough-iters", cfg.rough_iters,
                  "iteration budget of the coarse pass");
  fit->add_option("--solve-decrement", cfg.solve_decrement,
                  "count decrement of the solving pass");
  fit->add_option("--iters", cfg.max_iters, "iteration budget");
  fit->add_option("--lr", cfg.learning_rate, "Adam learning rate");
  fit->add_option("--seed", cfg.seed, "training seed");
  fit->add_option("--slack", cfg.select_slack,
                  "knot-count selection slack delta");
  fit->add_option("--lambda", cfg.lambda, "relative ridge weight");
  fit->add_option("--parametrization", cfg.parametrization,
                  "chord | network");
  fit->add_flag("--merge", cfg.merge, "coalesce near-coincident knots");
  fit->add_option("--merge-tol", cfg.merge_tol, "coalescing tolerance");
  fit->add_option("--out", cfg.outdir, "artifact output directory");

  // gen
  std::string gen_name = "peak_function";
  int gen_count = 1001;
  double gen_noise = 0.0;
  std::uint64_t gen_seed = 0;
  std::string gen_out = "points.csv";
  CLI::App* gen = app.add_subcommand("gen", "emit a builtin dataset as CSV");
  gen->add_option("--name", gen_name, "peak_function | space_curve");
  gen->add_option("--count", gen_count, "sample count");
  gen->add_option("--noise", gen_noise, "noise amplitude");
  gen->add_option("--seed", gen_seed, "noise seed");
  gen->add_option("--out", gen_out, "output file")->required();

  // baseline
  std::string b_input, b_format = "auto", b_method = "uniform";
  int b_params_col = -1, b_count = 5, b_degree = 3, b_gen_count = 0;
  double b_lambda = 1e-8, b_gen_noise = 0.0;
  std::uint64_t b_gen_seed = 0;
  CLI::App* baseline =
      app.add_subcommand("baseline", "fit with a fixed knot placement");
  baseline->add_option("--input", b_input, "dataset path or builtin name")
      ->required();
  baseline->add_option("--format", b_format, "csv | json | auto");
  baseline->add_option("--params-col", b_params_col, "parameter column");
  baseline->add_option("--count", b_count, "interior knot count");
  baseline->add_option("--method", b_method, "uniform | nktp");
  baseline->add_option("--degree", b_degree, "B-spline degree");
  baseline->add_option("--lambda", b_lambda, "relative ridge weight");
  baseline->add_option("--gen-count", b_gen_count, "builtin sample count");
  baseline->add_option("--gen-noise", b_gen_noise, "builtin noise amplitude");
  baseline->add_option("--gen-seed", b_gen_seed, "builtin noise seed");

  try {
    app.parse(argc, argv);
    if (fit->parsed()) return run_fit_command(cfg, range);
    if (gen->parsed())
      return run_gen_command(gen_name, gen_count, gen_noise, gen_seed,
                             gen_out);
    if (baseline->parsed()) {
      if (b_method != "uniform" && b_method != "nktp")
        throw ConfigError("baseline method must be uniform or nktp");
      return run_baseline_command(b_input, b_format, b_params_col, b_count,
                                  b_method, b_degree, b_lambda, b_gen_count,
                                  b_gen_noise, b_gen_seed);
    }
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
