#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "knotfit/errors.hpp"
#include "knotfit/io/dataset.hpp"
#include "knotfit/io/report.hpp"
#include "knotfit/io/run.hpp"

using namespace knotfit;

namespace {

std::filesystem::path test_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "knotfit_io_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// minimal well-formedness check: every opened tag is closed in order
bool xml_balanced(const std::string& text) {
  std::vector<std::string> stack;
  std::size_t at = 0;
  while ((at = text.find('<', at)) != std::string::npos) {
    const std::size_t end = text.find('>', at);
    if (end == std::string::npos) return false;
    std::string tag = text.substr(at + 1, end - at - 1);
    at = end + 1;
    if (tag.empty()) return false;
    if (tag[0] == '?' || tag[0] == '!') continue;
    if (tag.back() == '/') continue;  // self-closing
    if (tag[0] == '/') {
      const std::string name = tag.substr(1);
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
      continue;
    }
    const std::size_t space = tag.find_first_of(" \t\n");
    stack.push_back(space == std::string::npos ? tag : tag.substr(0, space));
  }
  return stack.empty();
}

RunConfig tiny_config() {
  RunConfig cfg;
  cfg.input = kPeakFunction;
  cfg.gen_count = 60;
  cfg.gen_noise = 0.0;
  cfg.count_lo = 2;
  cfg.count_hi = 3;
  cfg.max_iters = 120;
  cfg.learning_rate = 5e-3;
  cfg.seed = 9;
  return cfg;
}

}  // namespace

TEST_CASE("gen_builtin peak_function") {
  const PointSet a = gen_builtin(kPeakFunction, 1001, 0.05, 7);
  const PointSet b = gen_builtin(kPeakFunction, 1001, 0.05, 7);
  CHECK(a.points == b.points);  // seed determinism
  CHECK(a.count() == 1001);
  CHECK(a.dim() == 2);

  // noiseless midpoint value: sin(0) + 2 exp(0) = 2
  const PointSet clean = gen_builtin(kPeakFunction, 1001, 0.0, 7);
  CHECK(clean.points(500, 0) == 0.5);
  CHECK(clean.points(500, 1) == 2.0);

  // noise is bounded by the amplitude
  CHECK((a.points.col(1) - clean.points.col(1)).cwiseAbs().maxCoeff() <= 0.05);

  const PointSet c = gen_builtin(kPeakFunction, 1001, 0.05, 8);
  CHECK(a.points != c.points);

  CHECK_THROWS_AS(gen_builtin("nope", 100, 0.0, 1), ConfigError);
  CHECK_THROWS_AS(gen_builtin(kPeakFunction, 1, 0.0, 1), ConfigError);
}

TEST_CASE("gen_builtin space_curve") {
  const PointSet ps = gen_builtin(kSpaceCurve, 501, 0.0, 0);
  CHECK(ps.count() == 501);
  CHECK(ps.dim() == 3);

  // direct formula evaluation at t = 0
  const double x0 = 100.0 / std::exp(5.0) + 25.0 * std::pow(-1.0, 5) / 4.0;
  CHECK(ps.points(0, 0) == doctest::Approx(x0).epsilon(1e-15));
  CHECK(ps.points(0, 1) == -5.0);
  CHECK(ps.points(0, 2) == 0.0);

  // midpoint: the exponential spike peaks at t = 1/2
  CHECK(ps.points(250, 0) == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("load_points csv") {
  const auto dir = test_dir();
  const auto path = dir / "pts.csv";

  {
    std::ofstream out(path);
    out << "x,y\n0,0\n1,1\n1,1\n4,1\n";
  }
  const PointSet ps = load_points(path.string(), "auto");
  CHECK(ps.count() == 3);  // header skipped, duplicate collapsed
  CHECK(ps.dim() == 2);
  CHECK(ps.params(0) == 0.0);
  CHECK(ps.params(2) == 1.0);

  {
    std::ofstream out(path);
    out << "0,0\n1,1,2\n";
  }
  CHECK_THROWS_AS(load_points(path.string(), "csv"), ConfigError);

  {
    std::ofstream out(path);
    out << "0.5,0.5\n";
  }
  CHECK_THROWS_AS(load_points(path.string(), "csv"), ConfigError);

  CHECK_THROWS_AS(load_points((dir / "missing.csv").string(), "csv"), IoError);

  // flagged parameter column
  {
    std::ofstream out(path);
    out << "s,x,y\n10,0,0\n11,1,0\n14,2,0\n18,3,0\n";
  }
  const PointSet flagged = load_points(path.string(), "csv", 0);
  CHECK(flagged.dim() == 2);
  CHECK(flagged.params(0) == 0.0);
  CHECK(flagged.params(1) == doctest::Approx(0.125));
  CHECK(flagged.params(3) == 1.0);
}

TEST_CASE("load_points json") {
  const auto dir = test_dir();
  const auto path = dir / "pts.json";
  {
    std::ofstream out(path);
    out << R"({"points": [[0,0],[1,0],[3,0]], "params": [0, 0.5, 1]})";
  }
  const PointSet ps = load_points(path.string(), "auto");
  CHECK(ps.count() == 3);
  CHECK(ps.params(1) == 0.5);

  {
    std::ofstream out(path);
    out << R"([[0,0],[1,1],[2,0]])";
  }
  const PointSet bare = load_points(path.string(), "json");
  CHECK(bare.count() == 3);

  {
    std::ofstream out(path);
    out << "{not json";
  }
  CHECK_THROWS_AS(load_points(path.string(), "json"), ConfigError);
}

TEST_CASE("report json round trip") {
  Report r;
  r.version = "0.1.0";
  r.config = tiny_config();
  r.degree = 3;
  r.selected_count = 2;
  r.knots = {0, 0, 0, 0, 0.4, 0.6, 1, 1, 1, 1};
  r.control_points = Eigen::MatrixXd::Random(6, 2);
  r.counts = {2, 3};
  r.final_losses = {1e-4, 9e-5};
  r.final_losses_frob = {6e-3, 5.4e-3};
  r.hausdorff_error = 0.012;
  r.wall_seconds = 1.5;
  r.iterations = 120;

  const nlohmann::json j = to_json(r);
  const Report back = report_from_json(j);
  CHECK(to_json(back) == j);
  CHECK(to_json(back).dump() == j.dump());
}

TEST_CASE("run_fit end to end, deterministic and reproducible from echo") {
  const RunConfig cfg = tiny_config();
  RunOutput a = run_fit(cfg);
  RunOutput b = run_fit(cfg);

  CHECK(a.report.selected_count >= 2);
  CHECK(a.report.selected_count <= 3);
  CHECK(a.report.counts == std::vector<int>{2, 3});
  CHECK(a.report.hausdorff_error >= 0.0);
  CHECK(static_cast<int>(a.report.knots.size()) ==
        a.report.selected_count + 8);

  // identical modulo wall-clock time
  nlohmann::json ja = to_json(a.report);
  nlohmann::json jb = to_json(b.report);
  ja["wall_seconds"] = 0.0;
  jb["wall_seconds"] = 0.0;
  CHECK(ja.dump() == jb.dump());

  // the config echo is sufficient to reproduce the report
  const RunConfig echoed = run_config_from_json(to_json(a.report)["config"]);
  RunOutput c = run_fit(echoed);
  nlohmann::json jc = to_json(c.report);
  jc["wall_seconds"] = 0.0;
  CHECK(jc.dump() == ja.dump());
}

TEST_CASE("emit_artifacts files") {
  const auto dir = test_dir() / "artifacts";
  std::filesystem::remove_all(dir);

  RunConfig cfg = tiny_config();
  cfg.outdir = dir.string();
  const RunOutput out = run_fit(cfg);

  for (const char* name : {"report.json", "loss_trace.csv", "curve.csv",
                           "loss_curves.svg", "fit.svg"})
    CHECK(std::filesystem::exists(dir / name));

  // loss table: iter + one column per count + total
  {
    std::ifstream in(dir / "loss_trace.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "iter,k2,k3,total");
    std::string first;
    std::getline(in, first);
    int commas = 0;
    for (char ch : first) commas += ch == ',';
    CHECK(commas == 3);
  }

  // curve table: 2000 samples
  {
    std::ifstream in(dir / "curve.csv");
    std::string line;
    int rows = -1;  // header
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 2000);
  }

  // re-emission is byte-identical
  const std::string report1 = slurp(dir / "report.json");
  const std::string loss1 = slurp(dir / "loss_trace.csv");
  const std::string curve1 = slurp(dir / "curve.csv");
  const std::string svg1 = slurp(dir / "loss_curves.svg");
  const std::string fit1 = slurp(dir / "fit.svg");
  emit_artifacts(out.report, out.trace, out.curve, out.data.points,
                 dir.string());
  CHECK(slurp(dir / "report.json") == report1);
  CHECK(slurp(dir / "loss_trace.csv") == loss1);
  CHECK(slurp(dir / "curve.csv") == curve1);
  CHECK(slurp(dir / "loss_curves.svg") == svg1);
  CHECK(slurp(dir / "fit.svg") == fit1);

  // the plots parse as balanced markup
  CHECK(xml_balanced(svg1));
  CHECK(xml_balanced(fit1));

  // a re-parsed report echoes the same config
  const Report parsed =
      report_from_json(nlohmann::json::parse(report1));
  CHECK(parsed.config.input == cfg.input);
  CHECK(parsed.selected_count == out.report.selected_count);
}

TEST_CASE("write_points_csv round trip") {
  const auto dir = test_dir();
  const auto path = dir / "gen.csv";
  const PointSet ps = gen_builtin(kSpaceCurve, 51, 0.0, 0);
  write_points_csv(ps, path.string());
  const PointSet back = load_points(path.string(), "csv");
  CHECK(back.count() == 51);
  CHECK((back.points - ps.points).cwiseAbs().maxCoeff() == 0.0);
}
