#pragma once

#include <span>
#include <vector>

namespace knotfit {

// Minimum gap between distinct neighbouring interior knots. Anything tighter
// makes the design matrix of a least-squares fit numerically singular; knots
// recovered from softmax outputs are projected onto this floor.
double interior_spacing_floor(int num_interior);

// Clamped knot sequence on [0,1] of fixed degree p: the boundary values 0 and
// 1 each appear p+1 times and interior knots lie strictly inside (0,1).
// Repeated interior knots up to multiplicity p encode reduced continuity;
// distinct neighbours must be at least interior_spacing_floor() apart.
class KnotVector {
 public:
  KnotVector(int degree, std::vector<double> interior);

  int degree() const { return degree_; }
  int num_knots() const { return static_cast<int>(knots_.size()); }
  int num_interior() const { return num_knots() - 2 * (degree_ + 1); }
  // n+1 in the usual B-spline bookkeeping: basis count = knots - p - 1
  int num_basis() const { return num_knots() - degree_ - 1; }

  double knot(int i) const { return knots_[static_cast<std::size_t>(i)]; }
  std::span<const double> knots() const { return knots_; }
  std::span<const double> interior() const {
    return std::span<const double>(knots_).subspan(
        static_cast<std::size_t>(degree_ + 1),
        static_cast<std::size_t>(num_interior()));
  }

  bool operator==(const KnotVector&) const = default;

 private:
  int degree_;
  std::vector<double> knots_;  // full clamped sequence
};

}  // namespace knotfit
