#pragma once

#include <cstdint>
#include <string>

#include "knotfit/geom/point_set.hpp"

namespace knotfit {

inline constexpr const char* kPeakFunction = "peak_function";
inline constexpr const char* kSpaceCurve = "space_curve";

bool is_builtin_dataset(const std::string& name);

// Built-in benchmark datasets, deterministic per seed.
//   peak_function: y = sin(4x-2) + 2 exp(-30 (4x-2)^2) on a uniform x grid
//     over [0,1], with seeded uniform noise in [-amplitude, amplitude] added
//     to the function values; parameters are the x grid.
//   space_curve:   x = 100 exp(-|10t-5|) + 25 (2t-1)^5 / 4, y = 30t - 5,
//     z = 100 t^2 on a uniform t grid over [0,1]; parameters are the t grid.
PointSet gen_builtin(const std::string& name, int count, double noise,
                     std::uint64_t seed);

// Comma-separated numeric text (optional header row, auto-detected) or a JSON
// document: either a bare array of point arrays or an object with "points"
// and optional "params". Parameters come from a flagged column / the JSON
// "params" array when present, otherwise from chord length. Consecutive
// duplicate points are collapsed with a warning on stderr.
PointSet load_points(const std::string& path, const std::string& format,
                     int params_col = -1);

// Dataset emission for the `gen` subcommand; one comma-separated row per
// point, with header.
void write_points_csv(const PointSet& ps, const std::string& path);

}  // namespace knotfit
