#include "knotfit/io/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "knotfit/errors.hpp"
#include "knotfit/version.hpp"

namespace knotfit {

void RunConfig::validate() const {
  if (input.empty()) throw ConfigError("no input dataset given");
  if (degree < 1) throw ConfigError("degree must be >= 1");
  if (count_lo < 1 || count_hi < count_lo)
    throw ConfigError("knot-count range must satisfy 1 <= lo <= hi");
  if (rough && (count_hi - count_lo) % rough_decrement != 0)
    throw ConfigError("wide range must be divisible by the rough decrement");
  if (!rough && (count_hi - count_lo) % solve_decrement != 0)
    throw ConfigError("knot-count range must be divisible by the decrement");
  if (solve_decrement < 1 || rough_decrement < 1)
    throw ConfigError("decrements must be >= 1");
  if (max_iters < 1 || rough_iters < 1)
    throw ConfigError("iteration budgets must be >= 1");
  if (learning_rate <= 0.0) throw ConfigError("learning rate must be > 0");
  if (select_slack < 0.0) throw ConfigError("selection slack must be >= 0");
  if (lambda < 0.0) throw ConfigError("ridge weight must be >= 0");
  if (parametrization != "chord" && parametrization != "network")
    throw ConfigError("parametrization must be chord or network");
  if (merge_tol <= 0.0) throw ConfigError("merge tolerance must be > 0");
  if (gen_count == 1) throw ConfigError("builtin count must be 0 or >= 2");
  if (gen_noise < 0.0) throw ConfigError("noise amplitude must be >= 0");
}

nlohmann::json to_json(const RunConfig& c) {
  return nlohmann::json{{"input", c.input},
                        {"format", c.format},
                        {"params_col", c.params_col},
                        {"gen_count", c.gen_count},
                        {"gen_noise", c.gen_noise},
                        {"gen_seed", c.gen_seed},
                        {"degree", c.degree},
                        {"count_lo", c.count_lo},
                        {"count_hi", c.count_hi},
                        {"rough", c.rough},
                        {"rough_decrement", c.rough_decrement},
                        {"rough_iters", c.rough_iters},
                        {"solve_decrement", c.solve_decrement},
                        {"max_iters", c.max_iters},
                        {"learning_rate", c.learning_rate},
                        {"seed", c.seed},
                        {"select_slack", c.select_slack},
                        {"lambda", c.lambda},
                        {"parametrization", c.parametrization},
                        {"merge", c.merge},
                        {"merge_tol", c.merge_tol},
                        {"outdir", c.outdir}};
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  c.input = j.at("input").get<std::string>();
  c.format = j.at("format").get<std::string>();
  c.params_col = j.at("params_col").get<int>();
  c.gen_count = j.at("gen_count").get<int>();
  c.gen_noise = j.at("gen_noise").get<double>();
  c.gen_seed = j.at("gen_seed").get<std::uint64_t>();
  c.degree = j.at("degree").get<int>();
  c.count_lo = j.at("count_lo").get<int>();
  c.count_hi = j.at("count_hi").get<int>();
  c.rough = j.at("rough").get<bool>();
  c.rough_decrement = j.at("rough_decrement").get<int>();
  c.rough_iters = j.at("rough_iters").get<int>();
  c.solve_decrement = j.at("solve_decrement").get<int>();
  c.max_iters = j.at("max_iters").get<int>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.select_slack = j.at("select_slack").get<double>();
  c.lambda = j.at("lambda").get<double>();
  c.parametrization = j.at("parametrization").get<std::string>();
  c.merge = j.at("merge").get<bool>();
  c.merge_tol = j.at("merge_tol").get<double>();
  c.outdir = j.at("outdir").get<std::string>();
  return c;
}

nlohmann::json to_json(const Report& r) {
  nlohmann::json controls = nlohmann::json::array();
  for (Eigen::Index i = 0; i < r.control_points.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < r.control_points.cols(); ++c)
      row.push_back(r.control_points(i, c));
    controls.push_back(std::move(row));
  }
  return nlohmann::json{{"version", r.version},
                        {"config", to_json(r.config)},
                        {"degree", r.degree},
                        {"selected_count", r.selected_count},
                        {"knots", r.knots},
                        {"control_points", controls},
                        {"counts", r.counts},
                        {"final_losses", r.final_losses},
                        {"final_losses_frob", r.final_losses_frob},
                        {"hausdorff_error", r.hausdorff_error},
                        {"wall_seconds", r.wall_seconds},
                        {"iterations", r.iterations}};
}

Report report_from_json(const nlohmann::json& j) {
  Report r;
  r.version = j.at("version").get<std::string>();
  r.config = run_config_from_json(j.at("config"));
  r.degree = j.at("degree").get<int>();
  r.selected_count = j.at("selected_count").get<int>();
  r.knots = j.at("knots").get<std::vector<double>>();
  const nlohmann::json& controls = j.at("control_points");
  if (!controls.empty()) {
    r.control_points.resize(static_cast<Eigen::Index>(controls.size()),
                            static_cast<Eigen::Index>(controls[0].size()));
    for (std::size_t i = 0; i < controls.size(); ++i)
      for (std::size_t c = 0; c < controls[i].size(); ++c)
        r.control_points(static_cast<Eigen::Index>(i),
                         static_cast<Eigen::Index>(c)) =
            controls[i][c].get<double>();
  }
  r.counts = j.at("counts").get<std::vector<int>>();
  r.final_losses = j.at("final_losses").get<std::vector<double>>();
  r.final_losses_frob = j.at("final_losses_frob").get<std::vector<double>>();
  r.hausdorff_error = j.at("hausdorff_error").get<double>();
  r.wall_seconds = j.at("wall_seconds").get<double>();
  r.iterations = j.at("iterations").get<int>();
  return r;
}

namespace {

std::string fmt_full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write " + tmp);
    out << content;
    if (!out) throw IoError("failed writing " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp + " to " + path);
}

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c",
                                    "#d62728", "#9467bd", "#8c564b",
                                    "#e377c2", "#17becf"};

// Minimal fixed-size line plot. Both plots share the frame; only the series
// differ.
class SvgPlot {
 public:
  SvgPlot(double x_lo, double x_hi, double y_lo, double y_hi,
          const std::string& x_label, const std::string& y_label) {
    x_lo_ = x_lo;
    x_hi_ = x_hi > x_lo ? x_hi : x_lo + 1.0;
    y_lo_ = y_lo;
    y_hi_ = y_hi > y_lo ? y_hi : y_lo + 1.0;
    os_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
        << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << " " << kH
        << "\">\n";
    os_ << "<rect x=\"0\" y=\"0\" width=\"" << kW << "\" height=\"" << kH
        << "\" fill=\"white\"/>\n";
    os_ << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
        << kW - 2 * kMargin << "\" height=\"" << kH - 2 * kMargin
        << "\" fill=\"none\" stroke=\"#404040\"/>\n";
    text(kMargin, kH - 12, x_label + "  [" + fmt_label(x_lo_) + ", " +
                               fmt_label(x_hi_) + "]");
    text(8, kMargin - 8,
         y_label + "  [" + fmt_label(y_lo_) + ", " + fmt_label(y_hi_) + "]");
  }

  void polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                const char* color) {
    os_ << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i)
      os_ << fmt_px(px(xs[i])) << "," << fmt_px(py(ys[i])) << " ";
    os_ << "\"/>\n";
  }

  void dots(const std::vector<double>& xs, const std::vector<double>& ys,
            const char* color) {
    for (std::size_t i = 0; i < xs.size(); ++i)
      os_ << "<circle cx=\"" << fmt_px(px(xs[i])) << "\" cy=\""
          << fmt_px(py(ys[i])) << "\" r=\"1.5\" fill=\"" << color << "\"/>\n";
  }

  void legend(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      const double y = kMargin + 16.0 + 16.0 * static_cast<double>(i);
      const char* color = kPalette[i % std::size(kPalette)];
      os_ << "<line x1=\"" << kW - kMargin - 110 << "\" y1=\"" << fmt_px(y - 4)
          << "\" x2=\"" << kW - kMargin - 90 << "\" y2=\"" << fmt_px(y - 4)
          << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
      text(kW - kMargin - 84, y, names[i]);
    }
  }

  void text(double x, double y, const std::string& s) {
    os_ << "<text x=\"" << fmt_px(x) << "\" y=\"" << fmt_px(y)
        << "\" font-family=\"monospace\" font-size=\"12\">" << s
        << "</text>\n";
  }

  std::string finish() {
    os_ << "</svg>\n";
    return os_.str();
  }

 private:
  static constexpr int kW = 800;
  static constexpr int kH = 520;
  static constexpr int kMargin = 56;

  double px(double x) const {
    return kMargin + (x - x_lo_) / (x_hi_ - x_lo_) * (kW - 2 * kMargin);
  }
  double py(double y) const {
    return kH - kMargin - (y - y_lo_) / (y_hi_ - y_lo_) * (kH - 2 * kMargin);
  }

  double x_lo_, x_hi_, y_lo_, y_hi_;
  std::ostringstream os_;
};

double safe_log10(double v) { return std::log10(std::max(v, 1e-300)); }

std::string render_loss_svg(const LossTrace& trace) {
  const int iters = trace.iterations();
  double lo = 1e300, hi = -1e300;
  for (const std::vector<double>& col : trace.per_subnet)
    for (double v : col) {
      lo = std::min(lo, safe_log10(v));
      hi = std::max(hi, safe_log10(v));
    }
  for (double v : trace.total) {
    lo = std::min(lo, safe_log10(v));
    hi = std::max(hi, safe_log10(v));
  }
  SvgPlot plot(0.0, static_cast<double>(iters - 1), lo, hi, "iteration",
               "log10 loss");

  std::vector<double> xs(static_cast<std::size_t>(iters));
  for (int i = 0; i < iters; ++i) xs[static_cast<std::size_t>(i)] = i;

  std::vector<std::string> names;
  for (std::size_t k = 0; k < trace.per_subnet.size(); ++k) {
    std::vector<double> ys;
    ys.reserve(static_cast<std::size_t>(iters));
    for (double v : trace.per_subnet[k]) ys.push_back(safe_log10(v));
    plot.polyline(xs, ys, kPalette[k % std::size(kPalette)]);
    names.push_back("k=" + std::to_string(trace.counts[k]));
  }
  std::vector<double> ys;
  ys.reserve(static_cast<std::size_t>(iters));
  for (double v : trace.total) ys.push_back(safe_log10(v));
  plot.polyline(xs, ys, "#000000");
  names.push_back("total");
  plot.legend(names);
  return plot.finish();
}

std::string render_fit_svg(const Eigen::MatrixXd& curve,
                           const Eigen::MatrixXd& data) {
  // plot the first two coordinates; 1-d data is plotted against its index
  auto coords = [](const Eigen::MatrixXd& m, std::vector<double>& xs,
                   std::vector<double>& ys) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      xs.push_back(m.cols() > 1 ? m(i, 0)
                                : static_cast<double>(i) / (m.rows() - 1));
      ys.push_back(m.cols() > 1 ? m(i, 1) : m(i, 0));
    }
  };
  std::vector<double> cx, cy, dx, dy;
  coords(curve, cx, cy);
  coords(data, dx, dy);

  double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
  for (std::size_t i = 0; i < dx.size(); ++i) {
    x_lo = std::min(x_lo, dx[i]);
    x_hi = std::max(x_hi, dx[i]);
    y_lo = std::min(y_lo, dy[i]);
    y_hi = std::max(y_hi, dy[i]);
  }
  SvgPlot plot(x_lo, x_hi, y_lo, y_hi, "x", "y");
  plot.dots(dx, dy, "#9ecae1");
  plot.polyline(cx, cy, "#d62728");
  plot.legend({"data", "fit"});
  return plot.finish();
}

std::string render_loss_csv(const Report& report, const LossTrace& trace) {
  // columns in ascending count order
  std::vector<std::size_t> order;
  for (int c : report.counts)
    for (std::size_t k = 0; k < trace.counts.size(); ++k)
      if (trace.counts[k] == c) order.push_back(k);

  std::ostringstream os;
  os << "iter";
  for (int c : report.counts) os << ",k" << c;
  os << ",total\n";
  for (int it = 0; it < trace.iterations(); ++it) {
    os << it;
    for (std::size_t k : order)
      os << "," << fmt_full(trace.per_subnet[k][static_cast<std::size_t>(it)]);
    os << "," << fmt_full(trace.total[static_cast<std::size_t>(it)]) << "\n";
  }
  return os.str();
}

std::string render_curve_csv(const Eigen::MatrixXd& curve) {
  std::ostringstream os;
  const char* names[] = {"x", "y", "z"};
  os << "t";
  for (Eigen::Index c = 0; c < curve.cols(); ++c) {
    os << ",";
    if (c < 3)
      os << names[c];
    else
      os << "c" << c;
  }
  os << "\n";
  for (Eigen::Index i = 0; i < curve.rows(); ++i) {
    os << fmt_full(static_cast<double>(i) / (curve.rows() - 1));
    for (Eigen::Index c = 0; c < curve.cols(); ++c)
      os << "," << fmt_full(curve(i, c));
    os << "\n";
  }
  return os.str();
}

}  // namespace

void emit_artifacts(const Report& report, const LossTrace& trace,
                    const Eigen::MatrixXd& curve,
                    const Eigen::MatrixXd& data_points,
                    const std::string& outdir) {
  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) throw IoError("cannot create directory " + outdir);
  const std::filesystem::path dir(outdir);

  atomic_write((dir / "report.json").string(), to_json(report).dump(2) + "\n");
  atomic_write((dir / "loss_trace.csv").string(),
               render_loss_csv(report, trace));
  atomic_write((dir / "curve.csv").string(), render_curve_csv(curve));
  atomic_write((dir / "loss_curves.svg").string(), render_loss_svg(trace));
  atomic_write((dir / "fit.svg").string(), render_fit_svg(curve, data_points));
}

}  // namespace knotfit
