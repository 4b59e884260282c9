#include "knotfit/io/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "knotfit/errors.hpp"
#include "knotfit/rng.hpp"

namespace knotfit {

bool is_builtin_dataset(const std::string& name) {
  return name == kPeakFunction || name == kSpaceCurve;
}

namespace {

double peak_function(double x) {
  const double u = 4.0 * x - 2.0;
  return std::sin(u) + 2.0 * std::exp(-30.0 * u * u);
}

PointSet gen_peak(int count, double noise, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd pts(count, 2);
  Eigen::VectorXd params(count);
  for (int i = 0; i < count; ++i) {
    const double x = static_cast<double>(i) / (count - 1);
    pts(i, 0) = x;
    pts(i, 1) = peak_function(x) + (noise > 0.0 ? rng.uniform(-noise, noise) : 0.0);
    params(i) = x;
  }
  return PointSet(std::move(pts), std::move(params));
}

PointSet gen_space_curve(int count, double noise, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd pts(count, 3);
  Eigen::VectorXd params(count);
  for (int i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / (count - 1);
    const double s = 2.0 * t - 1.0;
    pts(i, 0) = 100.0 / std::exp(std::abs(10.0 * t - 5.0)) +
                25.0 * s * s * s * s * s / 4.0;
    pts(i, 1) = 30.0 * t - 5.0;
    pts(i, 2) = 100.0 * t * t;
    if (noise > 0.0)
      for (int c = 0; c < 3; ++c) pts(i, c) += rng.uniform(-noise, noise);
    params(i) = t;
  }
  return PointSet(std::move(pts), std::move(params));
}

bool is_number(const std::string& token) {
  if (token.empty()) return false;
  char* end = nullptr;
  std::strtod(token.c_str(), &end);
  while (end && *end == ' ') ++end;
  return end && *end == '\0';
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const std::size_t b = tok.find_first_not_of(" \t\r");
    const std::size_t e = tok.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : tok.substr(b, e - b + 1));
  }
  return out;
}

Eigen::MatrixXd read_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::vector<std::string> toks = split_csv_row(line);
    bool numeric = true;
    for (const std::string& t : toks) numeric = numeric && is_number(t);
    if (first && !numeric) {  // header row
      first = false;
      continue;
    }
    first = false;
    if (!numeric)
      throw ConfigError("non-numeric row in " + path + ": " + line);
    std::vector<double> row;
    row.reserve(toks.size());
    for (const std::string& t : toks) row.push_back(std::stod(t));
    if (width == 0) width = row.size();
    if (row.size() != width)
      throw ConfigError("ragged row in " + path + ": " + line);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("no data rows in " + path);
  Eigen::MatrixXd m(rows.size(), width);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
  return m;
}

Eigen::MatrixXd read_json_matrix(const std::string& path,
                                 Eigen::VectorXd* params_out) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid JSON in " + path + ": " + e.what());
  }
  const nlohmann::json* pts = &doc;
  if (doc.is_object()) {
    if (!doc.contains("points"))
      throw ConfigError(path + " lacks a \"points\" array");
    pts = &doc["points"];
    if (doc.contains("params")) {
      const nlohmann::json& pr = doc["params"];
      params_out->resize(static_cast<Eigen::Index>(pr.size()));
      for (std::size_t i = 0; i < pr.size(); ++i)
        (*params_out)(static_cast<Eigen::Index>(i)) = pr[i].get<double>();
    }
  }
  if (!pts->is_array() || pts->empty())
    throw ConfigError(path + " holds no points");
  const std::size_t width = (*pts)[0].size();
  Eigen::MatrixXd m(pts->size(), width);
  for (std::size_t i = 0; i < pts->size(); ++i) {
    if ((*pts)[i].size() != width)
      throw ConfigError("ragged point array in " + path);
    for (std::size_t j = 0; j < width; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          (*pts)[i][j].get<double>();
  }
  return m;
}

// maps arbitrary increasing values to [0,1]
Eigen::VectorXd normalize_params(const Eigen::VectorXd& raw) {
  const double lo = raw(0);
  const double hi = raw(raw.size() - 1);
  if (!(hi > lo)) throw ConfigError("parameter column must be increasing");
  Eigen::VectorXd s = (raw.array() - lo) / (hi - lo);
  s(0) = 0.0;
  s(s.size() - 1) = 1.0;
  return s;
}

}  // namespace

PointSet gen_builtin(const std::string& name, int count, double noise,
                     std::uint64_t seed) {
  if (count < 2) throw ConfigError("builtin datasets need count >= 2");
  if (noise < 0.0) throw ConfigError("noise amplitude must be >= 0");
  if (name == kPeakFunction) return gen_peak(count, noise, seed);
  if (name == kSpaceCurve) return gen_space_curve(count, noise, seed);
  throw ConfigError("unknown builtin dataset: " + name);
}

PointSet load_points(const std::string& path, const std::string& format,
                     int params_col) {
  std::string fmt = format;
  if (fmt == "auto")
    fmt = std::filesystem::path(path).extension() == ".json" ? "json" : "csv";

  Eigen::MatrixXd raw;
  Eigen::VectorXd json_params;
  if (fmt == "csv") {
    raw = read_csv_matrix(path);
  } else if (fmt == "json") {
    raw = read_json_matrix(path, &json_params);
  } else {
    throw ConfigError("unknown input format: " + format);
  }

  Eigen::VectorXd raw_params;
  Eigen::MatrixXd coords;
  if (params_col >= 0) {
    if (params_col >= raw.cols())
      throw ConfigError("params column out of range");
    raw_params = raw.col(params_col);
    coords.resize(raw.rows(), raw.cols() - 1);
    Eigen::Index at = 0;
    for (Eigen::Index c = 0; c < raw.cols(); ++c)
      if (c != params_col) coords.col(at++) = raw.col(c);
  } else {
    coords = raw;
    raw_params = json_params;
  }
  if (coords.cols() < 1)
    throw ConfigError("no coordinate columns left in " + path);

  // collapse consecutive duplicates
  std::vector<Eigen::Index> keep;
  keep.push_back(0);
  for (Eigen::Index i = 1; i < coords.rows(); ++i) {
    if ((coords.row(i) - coords.row(keep.back())).norm() == 0.0) {
      std::cerr << "warning: collapsing duplicate point at row " << i << " of "
                << path << "\n";
      continue;
    }
    keep.push_back(i);
  }
  if (keep.size() < 2)
    throw ConfigError(path + " has fewer than 2 distinct points");
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(keep.size()), coords.cols());
  for (std::size_t i = 0; i < keep.size(); ++i)
    pts.row(static_cast<Eigen::Index>(i)) = coords.row(keep[i]);

  if (raw_params.size() > 0) {
    if (raw_params.size() != coords.rows())
      throw ConfigError("params length does not match point count");
    Eigen::VectorXd kept(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i)
      kept(static_cast<Eigen::Index>(i)) = raw_params(keep[i]);
    return PointSet(std::move(pts), normalize_params(kept));
  }
  return PointSet::with_chord_params(std::move(pts));
}

void write_points_csv(const PointSet& ps, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  const char* names[] = {"x", "y", "z"};
  for (int c = 0; c < ps.dim(); ++c) {
    out << (c ? "," : "");
    if (c < 3)
      out << names[c];
    else
      out << "c" << c;
  }
  out << "\n";
  char buf[32];
  for (int i = 0; i < ps.count(); ++i) {
    for (int c = 0; c < ps.dim(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", ps.points(i, c));
      out << (c ? "," : "") << buf;
    }
    out << "\n";
  }
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace knotfit
