#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "knotfit/geom/knot_vector.hpp"
#include "knotfit/geom/point_set.hpp"
#include "knotfit/net/network.hpp"
#include "knotfit/train/adam.hpp"

namespace knotfit {

// Per-iteration loss history: one column per subnetwork plus the summed
// network loss. Losses are mean squared residuals (normalized by the point
// count); multiply by the point count for plain squared Frobenius norms.
struct LossTrace {
  std::vector<int> counts;  // interior-knot count per subnetwork column
  std::vector<std::vector<double>> per_subnet;  // [subnet][iteration]
  std::vector<double> total;                    // [iteration]

  int iterations() const { return static_cast<int>(total.size()); }
  std::vector<double> final_losses() const;
};

struct TrainOutcome {
  LossTrace trace;
  std::vector<KnotVector> knots;            // per subnetwork, last iteration
  std::vector<Eigen::MatrixXd> controls;    // per subnetwork
  std::vector<double> final_losses;         // per subnetwork, normalized
  int iterations = 0;
};

// Full-batch Adam on the summed loss of the whole stack. Deterministic given
// (seed, config, data); stops early once the total loss plateaus.
TrainOutcome train(const NetworkConfig& net, const PointSet& ps,
                   const TrainConfig& cfg);

// Smallest count whose final loss is within (1+slack) of the smallest final
// loss; ties break toward fewer knots.
int select_knot_count(const std::vector<int>& counts,
                      const std::vector<double>& losses, double slack);

// The bracketing rule applied to per-count losses on a coarse grid: the
// bracket ends at the smallest acceptable count and starts one grid step
// below it (or covers the lowest pair when every count is acceptable).
std::pair<int, int> refine_bracket(const std::vector<int>& counts,
                                   const std::vector<double>& losses,
                                   double slack);

// Coarse pass over a wide knot-count range with a large decrement; returns
// the adjacent pair of counts bracketing the loss knee, which seeds the
// solving phase at decrement 1.
std::pair<int, int> rough_train(const NetworkConfig& wide, const PointSet& ps,
                                const TrainConfig& cfg);

// Merges runs of interior knots spaced closer than merge_tol into a single
// knot (their mean) of multiplicity min(run length, degree). Controls must be
// re-solved afterwards, since the basis count changes.
KnotVector coalesce_knots(const KnotVector& kv, double merge_tol);

// Coalesce and then polish each merged position against the data with a 1-d
// line search on the refit residual. The run mean can sit off the feature it
// encodes by a fraction of the run width, which a reduced-continuity knot
// amplifies; the polish recovers the feature location.
KnotVector coalesce_knots(const KnotVector& kv, double merge_tol,
                          const PointSet& ps, double lambda);

struct FitResult {
  int selected_count = 0;
  KnotVector knots;
  Eigen::MatrixXd controls;
  std::vector<int> counts;                   // ascending
  std::vector<double> final_losses;          // aligned with counts, normalized
  std::vector<double> final_losses_frob;     // squared Frobenius norms
  double hausdorff_error = 0.0;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
  NetworkConfig net_config;
  TrainConfig train_config;
  LossTrace trace;
  int iterations = 0;
};

// train + select + Hausdorff error between the data and the selected curve.
// The curve is discretized at the data parameters: uniform parameter samples
// would fall inside the data's own sampling gaps wherever a feature is
// narrower than the data spacing, and the measure would report data sparsity
// rather than fit quality.
FitResult fit(const NetworkConfig& net, const PointSet& ps,
              const TrainConfig& cfg);

}  // namespace knotfit
