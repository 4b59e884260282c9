#include "knotfit/geom/bspline_tape.hpp"

#include <optional>
#include <string>

#include "knotfit/errors.hpp"
#include "knotfit/geom/bspline.hpp"

namespace knotfit {

namespace {

using ad::Tape;
using ad::Var;

// Reciprocals of the knot-window widths used by the triangular recursion.
// They depend only on the span, not on the parameter, so they are recorded
// once and shared by every data point in the span. Index (level j, inner r)
// flattens to j*(j-1)/2 + r.
struct SpanShared {
  std::vector<Var> recip;
};

class DesignBuilder {
 public:
  DesignBuilder(Tape& tape, const TapeKnots& knots)
      : tape_(tape), kv_(knots.value) {
    const int p = kv_.degree();
    const int m = kv_.num_interior();
    const Var zero = tape_.constant(0.0);
    const Var one = tape_.constant(1.0);
    one_ = one;
    knot_vars_.reserve(static_cast<std::size_t>(kv_.num_knots()));
    for (int i = 0; i < kv_.num_knots(); ++i) {
      if (i <= p)
        knot_vars_.push_back(zero);
      else if (i >= p + 1 + m)
        knot_vars_.push_back(one);
      else
        knot_vars_.push_back(tape_.index(knots.interior, i - (p + 1)));
    }
    shared_.resize(static_cast<std::size_t>(kv_.num_basis()));
  }

  // Appends the p+1 nonzero basis values at (row, t) to `entries`.
  void add_row(std::uint32_t row, Var t_var, double t_value,
               std::vector<Tape::MatrixEntry>& entries) {
    const int p = kv_.degree();
    const int span = find_span(kv_, t_value);
    if (p == 0) {
      entries.push_back({row, static_cast<std::uint32_t>(span), one_});
      return;
    }
    const SpanShared& sh = shared_for(span);

    // left[j] = t - U[span+1-j], right[j] = U[span+j] - t
    std::vector<Var> left(static_cast<std::size_t>(p + 1));
    std::vector<Var> right(static_cast<std::size_t>(p + 1));
    for (int j = 1; j <= p; ++j) {
      left[static_cast<std::size_t>(j)] =
          tape_.sub(t_var, knot_vars_[static_cast<std::size_t>(span + 1 - j)]);
      right[static_cast<std::size_t>(j)] =
          tape_.sub(knot_vars_[static_cast<std::size_t>(span + j)], t_var);
    }

    std::vector<Var> basis(static_cast<std::size_t>(p + 1));
    // level 1 starts from N = 1, so temp is the shared reciprocal itself
    basis[0] = tape_.mul(right[1], sh.recip[0]);
    basis[1] = tape_.mul(left[1], sh.recip[0]);
    for (int j = 2; j <= p; ++j) {
      Var saved;
      for (int r = 0; r < j; ++r) {
        const Var recip = sh.recip[static_cast<std::size_t>(j * (j - 1) / 2 + r)];
        const Var temp = tape_.mul(basis[static_cast<std::size_t>(r)], recip);
        const Var term =
            tape_.mul(right[static_cast<std::size_t>(r + 1)], temp);
        basis[static_cast<std::size_t>(r)] =
            saved.valid() ? tape_.add(saved, term) : term;
        saved = tape_.mul(left[static_cast<std::size_t>(j - r)], temp);
      }
      basis[static_cast<std::size_t>(j)] = saved;
    }
    for (int r = 0; r <= p; ++r)
      entries.push_back({row, static_cast<std::uint32_t>(span - p + r),
                         basis[static_cast<std::size_t>(r)]});
  }

  int num_basis() const { return kv_.num_basis(); }

 private:
  const SpanShared& shared_for(int span) {
    std::optional<SpanShared>& slot = shared_[static_cast<std::size_t>(span)];
    if (slot) return *slot;
    const int p = kv_.degree();
    SpanShared sh;
    sh.recip.reserve(static_cast<std::size_t>(p * (p + 1) / 2));
    for (int j = 1; j <= p; ++j) {
      for (int r = 0; r < j; ++r) {
        const int a = span + r + 1;
        const int b = span + 1 + r - j;
        if (kv_.knot(a) == kv_.knot(b))
          throw NumericError("zero-width basis support at span " +
                             std::to_string(span));
        const Var den = tape_.sub(knot_vars_[static_cast<std::size_t>(a)],
                                  knot_vars_[static_cast<std::size_t>(b)]);
        sh.recip.push_back(tape_.div(one_, den));
      }
    }
    slot = std::move(sh);
    return *slot;
  }

  Tape& tape_;
  const KnotVector& kv_;
  Var one_;
  std::vector<Var> knot_vars_;
  std::vector<std::optional<SpanShared>> shared_;
};

}  // namespace

TapeKnots knots_from_differences(ad::Tape& tape, ad::Var du, int degree) {
  if (tape.cols(du) != 1 || tape.rows(du) < 1)
    throw ConfigError("difference vector must be a nonempty column vector");
  const int m = tape.rows(du) - 1;

  if (m == 0)
    return TapeKnots{KnotVector(degree, {}), ad::Var{}};

  // Clamping at twice the floor keeps the spacing above the floor even after
  // renormalization inflates the divisor.
  const double clamp = 2.0 * interior_spacing_floor(m);
  const Var floored = tape.max_const(du, clamp);
  const Var sum = tape.reduce_sum(floored);
  const Var normalized = tape.div_scalar(floored, sum);
  const Var partial = tape.cumsum(normalized);
  const Var interior = tape.slice(partial, 0, m);

  const Eigen::MatrixXd vals = tape.value(interior);
  std::vector<double> iv(vals.data(), vals.data() + m);
  return TapeKnots{KnotVector(degree, std::move(iv)), interior};
}

ad::Var tape_design_matrix(ad::Tape& tape, const TapeKnots& knots,
                           const Eigen::VectorXd& params) {
  DesignBuilder builder(tape, knots);
  std::vector<Tape::MatrixEntry> entries;
  entries.reserve(static_cast<std::size_t>(params.size()) *
                  (knots.value.degree() + 1));
  for (Eigen::Index i = 0; i < params.size(); ++i)
    builder.add_row(static_cast<std::uint32_t>(i), tape.constant(params(i)),
                    params(i), entries);
  return tape.assemble(static_cast<int>(params.size()), builder.num_basis(),
                       entries);
}

ad::Var tape_design_matrix(ad::Tape& tape, const TapeKnots& knots,
                           const std::vector<ad::Var>& params) {
  DesignBuilder builder(tape, knots);
  std::vector<Tape::MatrixEntry> entries;
  entries.reserve(params.size() * (knots.value.degree() + 1));
  for (std::size_t i = 0; i < params.size(); ++i)
    builder.add_row(static_cast<std::uint32_t>(i), params[i],
                    tape.value_scalar(params[i]), entries);
  return tape.assemble(static_cast<int>(params.size()), builder.num_basis(),
                       entries);
}

}  // namespace knotfit
