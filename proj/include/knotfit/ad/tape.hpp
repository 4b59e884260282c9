#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cstdint>
#include <limits>
#include <vector>

namespace knotfit::ad {

// Handle into a Tape. Shape is fixed at creation; the gradient produced by
// backward() has the same shape as the value.
struct Var {
  std::uint32_t id = std::numeric_limits<std::uint32_t>::max();
  bool valid() const {
    return id != std::numeric_limits<std::uint32_t>::max();
  }
};

enum class Op : std::uint8_t {
  kConst,
  kLeaf,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kRelu,
  kExp,
  kLog,
  kSquare,
  kScale,
  kMaxConst,
  kMatMul,
  kReduceSum,
  kCumSum,
  kSoftmax,
  kIndex,
  kSlice,
  kDivScalar,
  kAssemble,
  kLsSolve,
};

// Append-only reverse-mode differentiation graph. Values are computed eagerly
// as nodes are recorded; backward() makes one reverse sweep, accumulating
// adjoints additively across fan-out. Parents always precede children, so a
// single sweep visits each node exactly once.
//
// A tape is single-threaded; reset() keeps the allocated arenas so a tape can
// be rebuilt every training iteration without reallocating.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  void reset();

  Var leaf(const Eigen::MatrixXd& value);
  Var constant(const Eigen::MatrixXd& value);
  Var constant(double value);

  // elementwise, shapes must match
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  Var div(Var a, Var b);
  Var relu(Var a);  // adjoint at exactly 0 is 0
  Var exp(Var a);
  Var log(Var a);
  Var square(Var a);
  Var scale(Var a, double c);
  Var max_const(Var a, double c);

  Var matmul(Var a, Var b);
  Var reduce_sum(Var a);
  Var cumsum(Var a);   // column vector; adjoint is the reverse cumulative sum
  Var softmax(Var a);  // column vector, stabilized by max-subtraction
  Var index(Var a, int i);
  Var slice(Var a, int offset, int len);
  Var div_scalar(Var a, Var s);  // column vector divided by a scalar node

  struct MatrixEntry {
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    Var value;  // scalar node
  };
  // Dense rows x cols matrix whose listed entries are scalar nodes; all other
  // entries are structural zeros. Entries must not repeat positions.
  Var assemble(int rows, int cols, const std::vector<MatrixEntry>& entries);

  // Ridge least squares through the tape: forward equals solve_controls on
  // (value(a), value(points), lambda); backward maps dLoss/dC to dLoss/dA
  // through the closed-form solution, reusing the forward factorization.
  // `points` must be a constant node.
  Var ls_solve(Var a, Var points, double lambda);

  // Reverse sweep from a scalar root. Gradients of all nodes at or below the
  // root are available afterwards until the tape is modified.
  void backward(Var root);

  Eigen::MatrixXd value(Var v) const;
  Eigen::MatrixXd grad(Var v) const;
  double value_scalar(Var v) const;
  double grad_scalar(Var v) const;

  int rows(Var v) const { return static_cast<int>(node(v).rows); }
  int cols(Var v) const { return static_cast<int>(node(v).cols); }
  std::size_t num_nodes() const { return nodes_.size(); }

  // leaves in creation order
  std::vector<Var> leaves() const;

 private:
  static constexpr std::uint32_t kNone =
      std::numeric_limits<std::uint32_t>::max();

  struct Node {
    Op op;
    std::uint32_t rows = 0, cols = 0;
    std::uint32_t a = kNone, b = kNone;
    std::size_t off = 0;
    std::uint32_t aux = 0, aux_n = 0;  // assemble triples
    std::uint32_t cache = 0;           // ls_solve factorization
    std::int32_t i0 = 0, i1 = 0;       // index / slice arguments
    double imm = 0.0;                  // scale factor or clamp constant
    std::size_t size() const {
      return static_cast<std::size_t>(rows) * cols;
    }
  };

  struct LsCache {
    Eigen::LDLT<Eigen::MatrixXd> ldlt;
    double mu = 0.0;
  };

  const Node& node(Var v) const { return nodes_[v.id]; }
  Node& alloc(Op op, int rows, int cols, Var a = {}, Var b = {});
  double* val(const Node& n) { return val_.data() + n.off; }
  const double* val(const Node& n) const { return val_.data() + n.off; }
  double* grd(const Node& n) { return grad_.data() + n.off; }

  void check_same_shape(Var a, Var b, const char* what) const;
  void backward_node(const Node& n);

  std::vector<Node> nodes_;
  std::vector<double> val_;
  std::vector<double> grad_;
  std::vector<std::uint32_t> aux_;
  std::vector<LsCache> ls_;
};

}  // namespace knotfit::ad
