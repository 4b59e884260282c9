#include "knotfit/ad/tape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "knotfit/errors.hpp"
#include "knotfit/geom/least_squares.hpp"

namespace knotfit::ad {

namespace {

using MapM = Eigen::Map<Eigen::MatrixXd>;
using MapC = Eigen::Map<const Eigen::MatrixXd>;

}  // namespace

void Tape::reset() {
  nodes_.clear();
  val_.clear();
  grad_.clear();
  aux_.clear();
  ls_.clear();
}

Tape::Node& Tape::alloc(Op op, int rows, int cols, Var a, Var b) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative node shape");
  Node n;
  n.op = op;
  n.rows = static_cast<std::uint32_t>(rows);
  n.cols = static_cast<std::uint32_t>(cols);
  n.a = a.id;
  n.b = b.id;
  n.off = val_.size();
  val_.resize(val_.size() + n.size());
  nodes_.push_back(n);
  return nodes_.back();
}

void Tape::check_same_shape(Var a, Var b, const char* what) const {
  const Node& na = node(a);
  const Node& nb = node(b);
  if (na.rows != nb.rows || na.cols != nb.cols)
    throw std::invalid_argument(std::string(what) + ": shape mismatch " +
                                std::to_string(na.rows) + "x" +
                                std::to_string(na.cols) + " vs " +
                                std::to_string(nb.rows) + "x" +
                                std::to_string(nb.cols));
}

Var Tape::leaf(const Eigen::MatrixXd& value) {
  Node& n = alloc(Op::kLeaf, static_cast<int>(value.rows()),
                  static_cast<int>(value.cols()));
  MapM(val(n), value.rows(), value.cols()) = value;
  return {static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::constant(const Eigen::MatrixXd& value) {
  Node& n = alloc(Op::kConst, static_cast<int>(value.rows()),
                  static_cast<int>(value.cols()));
  MapM(val(n), value.rows(), value.cols()) = value;
  return {static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::constant(double value) {
  Node& n = alloc(Op::kConst, 1, 1);
  *val(n) = value;
  return {static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::add(Var a, Var b) {
  check_same_shape(a, b, "add");
  Node& n = alloc(Op::kAdd, rows(a), cols(a), a, b);
  const double* pa = val(node(a));
  const double* pb = val(node(b));
  double* po = val(n);
  for (std::size_t i = 0; i < n.size(); ++i) po[i] = pa[i] + pb[i];
  return {static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::sub(Var a, Var b) {
  check_same_shape(a, b, "sub");
  Node& n = alloc(Op::kSub, rows(a), cols(a), a, b);
  const double* pa = val(node(a));
  const double* pb = val(node(b));
  double* po = val(n);
  for (std::size_t i = 0; i < n.size(); ++i) po[i] = pa[i] - pb[i];
  return {static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::mul(Var a, Var b) {
  check_same_shape(a, b, "mul");
  Node& n = alloc(Op::kMul, rows(a), cols(a), a, b);
  const double* pa = val(node(a));
  const double* pb = val(node(b));
  double* po = val(n);
  for (std::size_t i = 0; i < n.size(); ++i) po[i] = pa[i] * pb[i];
  return {static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::div(Var a, Var b) {
  check_same_shape(a, b, "div");
  Node& n = alloc(Op::kDiv, rows(a), cols(a), a, b);
  const double* pa = val(node(a));
  const double* pb = val(node(b));
  double* po = val(n);
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (pb[i] == 0.0) throw NumericError("division by zero on tape");
    po[i] = pa[i] / pb[i];
  }
  return {static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::relu(Var a) {
  Node& n = alloc(Op::kRelu, rows(a), cols(a), a);
  const double* pa = val(node(a));
  double* po = val(n);
  for (std::size_t i = 0; i < n.size(); ++i) po[i] = pa[i] > 0.0 ? pa[i] : 0.0;
  return {static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::exp(Var a) {
  Node& n = alloc(Op::kExp, rows(a), cols(a), a);
  const double* pa = val(node(a));
  double* po = val(n);
  for (std::size_t i = 0; i < n.size(); ++i) po[i] = std::exp(pa[i]);
  return {static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::log(Var a) {
  Node& n = alloc(Op::kLog, rows(a), cols(a), a);
  const double* pa = val(node(a));
  double* po = val(n);
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(pa[i] > 0.0)) throw NumericError("log of a non-positive value");
    po[i] = std::log(pa[i]);
  }
  return {static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::square(Var a) {
  Node& n = alloc(Op::kSquare, rows(a), cols(a), a);
  const double* pa = val(node(a));
  double* po = val(n);
  for (std::size_t i = 0; i < n.size(); ++i) po[i] = pa[i] * pa[i];
  return {static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::scale(Var a, double c) {
  Node& n = alloc(Op::kScale, rows(a), cols(a), a);
  n.imm = c;
  const double* pa = val(node(a));
  double* po = val(n);
  for (std::size_t i = 0; i < n.size(); ++i) po[i] = c * pa[i];
  return {static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::max_const(Var a, double c) {
  Node& n = alloc(Op::kMaxConst, rows(a), cols(a), a);
  n.imm = c;
  const double* pa = val(node(a));
  double* po = val(n);
  for (std::size_t i = 0; i < n.size(); ++i) po[i] = pa[i] > c ? pa[i] : c;
  return {static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::matmul(Var a, Var b) {
  const int m = rows(a), k = cols(a), k2 = rows(b), c = cols(b);
  if (k != k2) throw std::invalid_argument("matmul: inner dimension mismatch");
  Node& n = alloc(Op::kMatMul, m, c, a, b);
  MapM(val(n), m, c).noalias() =
      MapC(val(node(a)), m, k) * MapC(val(node(b)), k2, c);
  return {static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::reduce_sum(Var a) {
  Node& n = alloc(Op::kReduceSum, 1, 1, a);
  const double* pa = val(node(a));
  double acc = 0.0;
  for (std::size_t i = 0; i < node(a).size(); ++i) acc += pa[i];
  *val(n) = acc;
  return {static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::cumsum(Var a) {
  if (cols(a) != 1)
    throw std::invalid_argument("cumsum expects a column vector");
  Node& n = alloc(Op::kCumSum, rows(a), 1, a);
  const double* pa = val(node(a));
  double* po = val(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    acc += pa[i];
    po[i] = acc;
  }
  return {static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::softmax(Var a) {
  if (cols(a) != 1)
    throw std::invalid_argument("softmax expects a column vector");
  Node& n = alloc(Op::kSoftmax, rows(a), 1, a);
  const double* pa = val(node(a));
  double* po = val(n);
  const std::size_t len = n.size();
  double hi = pa[0];
  for (std::size_t i = 1; i < len; ++i) hi = std::max(hi, pa[i]);
  if (!std::isfinite(hi)) throw NumericError("softmax of non-finite input");
  double sum = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    po[i] = std::exp(pa[i] - hi);
    sum += po[i];
  }
  for (std::size_t i = 0; i < len; ++i) po[i] /= sum;
  return {static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::index(Var a, int i) {
  if (cols(a) != 1)
    throw std::invalid_argument("index expects a column vector");
  if (i < 0 || i >= rows(a)) throw std::invalid_argument("index out of range");
  Node& n = alloc(Op::kIndex, 1, 1, a);
  n.i0 = i;
  *val(n) = val(node(a))[i];
  return {static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::slice(Var a, int offset, int len) {
  if (cols(a) != 1)
    throw std::invalid_argument("slice expects a column vector");
  if (offset < 0 || len < 1 || offset + len > rows(a))
    throw std::invalid_argument("slice out of range");
  Node& n = alloc(Op::kSlice, len, 1, a);
  n.i0 = offset;
  n.i1 = len;
  const double* pa = val(node(a));
  double* po = val(n);
  for (int i = 0; i < len; ++i) po[i] = pa[offset + i];
  return {static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::div_scalar(Var a, Var s) {
  if (rows(s) != 1 || cols(s) != 1)
    throw std::invalid_argument("div_scalar expects a scalar divisor");
  Node& n = alloc(Op::kDivScalar, rows(a), cols(a), a, s);
  const double d = *val(node(s));
  if (d == 0.0) throw NumericError("division by zero on tape");
  const double* pa = val(node(a));
  double* po = val(n);
  for (std::size_t i = 0; i < n.size(); ++i) po[i] = pa[i] / d;
  return {static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::assemble(int nrows, int ncols,
                   const std::vector<MatrixEntry>& entries) {
  Node& n = alloc(Op::kAssemble, nrows, ncols);
  n.aux = static_cast<std::uint32_t>(aux_.size());
  n.aux_n = static_cast<std::uint32_t>(entries.size());
  aux_.reserve(aux_.size() + 3 * entries.size());
  double* po = val(n);
  std::fill(po, po + n.size(), 0.0);
  for (const MatrixEntry& e : entries) {
    if (e.row >= n.rows || e.col >= n.cols)
      throw std::invalid_argument("assemble entry out of range");
    const Node& p = node(e.value);
    if (p.size() != 1)
      throw std::invalid_argument("assemble entries must be scalar nodes");
    aux_.push_back(e.row);
    aux_.push_back(e.col);
    aux_.push_back(e.value.id);
    po[static_cast<std::size_t>(e.col) * n.rows + e.row] = val_[p.off];
  }
  return {static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::ls_solve(Var a, Var points, double lambda) {
  if (node(points).op != Op::kConst)
    throw std::invalid_argument("ls_solve expects constant points");
  if (rows(a) < cols(a))
    throw std::invalid_argument("ls_solve needs rows >= cols");
  if (rows(points) != rows(a))
    throw std::invalid_argument("ls_solve: point rows must match matrix rows");

  const int nr = rows(a), nc = cols(a), d = cols(points);
  // copies, since solve_controls may throw after further allocation
  const Eigen::MatrixXd amat = MapC(val(node(a)), nr, nc);
  const Eigen::MatrixXd pmat = MapC(val(node(points)), nr, d);
  const Eigen::MatrixXd c = solve_controls(amat, pmat, lambda);

  LsCache cache;
  cache.mu = effective_ridge(amat, lambda);
  Eigen::MatrixXd h = amat.transpose() * amat;
  h.diagonal().array() += cache.mu;
  cache.ldlt.compute(h);
  ls_.push_back(std::move(cache));

  Node& n = alloc(Op::kLsSolve, nc, d, a, points);
  n.cache = static_cast<std::uint32_t>(ls_.size() - 1);
  MapM(val(n), nc, d) = c;
  return {static_cast<std::uint32_t>(nodes_.size() - 1)};
}

void Tape::backward(Var root) {
  const Node& r = node(root);
  if (r.size() != 1)
    throw std::invalid_argument("backward root must be scalar");
  grad_.assign(val_.size(), 0.0);
  grad_[r.off] = 1.0;
  for (std::uint32_t i = root.id + 1; i-- > 0;) backward_node(nodes_[i]);
}

void Tape::backward_node(const Node& n) {
  switch (n.op) {
    case Op::kConst:
    case Op::kLeaf:
      return;
    case Op::kAdd: {
      const double* g = grd(n);
      double* ga = grd(nodes_[n.a]);
      double* gb = grd(nodes_[n.b]);
      for (std::size_t i = 0; i < n.size(); ++i) {
        ga[i] += g[i];
        gb[i] += g[i];
      }
      return;
    }
    case Op::kSub: {
      const double* g = grd(n);
      double* ga = grd(nodes_[n.a]);
      double* gb = grd(nodes_[n.b]);
      for (std::size_t i = 0; i < n.size(); ++i) {
        ga[i] += g[i];
        gb[i] -= g[i];
      }
      return;
    }
    case Op::kMul: {
      const double* g = grd(n);
      const double* pa = val(nodes_[n.a]);
      const double* pb = val(nodes_[n.b]);
      double* ga = grd(nodes_[n.a]);
      double* gb = grd(nodes_[n.b]);
      for (std::size_t i = 0; i < n.size(); ++i) {
        ga[i] += g[i] * pb[i];
        gb[i] += g[i] * pa[i];
      }
      return;
    }
    case Op::kDiv: {
      const double* g = grd(n);
      const double* po = val(n);
      const double* pb = val(nodes_[n.b]);
      double* ga = grd(nodes_[n.a]);
      double* gb = grd(nodes_[n.b]);
      for (std::size_t i = 0; i < n.size(); ++i) {
        ga[i] += g[i] / pb[i];
        gb[i] -= g[i] * po[i] / pb[i];
      }
      return;
    }
    case Op::kRelu: {
      const double* g = grd(n);
      const double* pa = val(nodes_[n.a]);
      double* ga = grd(nodes_[n.a]);
      for (std::size_t i = 0; i < n.size(); ++i)
        if (pa[i] > 0.0) ga[i] += g[i];
      return;
    }
    case Op::kExp: {
      const double* g = grd(n);
      const double* po = val(n);
      double* ga = grd(nodes_[n.a]);
      for (std::size_t i = 0; i < n.size(); ++i) ga[i] += g[i] * po[i];
      return;
    }
    case Op::kLog: {
      const double* g = grd(n);
      const double* pa = val(nodes_[n.a]);
      double* ga = grd(nodes_[n.a]);
      for (std::size_t i = 0; i < n.size(); ++i) ga[i] += g[i] / pa[i];
      return;
    }
    case Op::kSquare: {
      const double* g = grd(n);
      const double* pa = val(nodes_[n.a]);
      double* ga = grd(nodes_[n.a]);
      for (std::size_t i = 0; i < n.size(); ++i)
        ga[i] += 2.0 * pa[i] * g[i];
      return;
    }
    case Op::kScale: {
      const double* g = grd(n);
      double* ga = grd(nodes_[n.a]);
      for (std::size_t i = 0; i < n.size(); ++i) ga[i] += n.imm * g[i];
      return;
    }
    case Op::kMaxConst: {
      const double* g = grd(n);
      const double* pa = val(nodes_[n.a]);
      double* ga = grd(nodes_[n.a]);
      for (std::size_t i = 0; i < n.size(); ++i)
        if (pa[i] > n.imm) ga[i] += g[i];
      return;
    }
    case Op::kMatMul: {
      const Node& na = nodes_[n.a];
      const Node& nb = nodes_[n.b];
      MapC g(grd(n), n.rows, n.cols);
      MapC a(val(na), na.rows, na.cols);
      MapC b(val(nb), nb.rows, nb.cols);
      MapM(grd(na), na.rows, na.cols).noalias() += g * b.transpose();
      MapM(grd(nb), nb.rows, nb.cols).noalias() += a.transpose() * g;
      return;
    }
    case Op::kReduceSum: {
      const double g = *grd(n);
      double* ga = grd(nodes_[n.a]);
      for (std::size_t i = 0; i < nodes_[n.a].size(); ++i) ga[i] += g;
      return;
    }
    case Op::kCumSum: {
      const double* g = grd(n);
      double* ga = grd(nodes_[n.a]);
      double acc = 0.0;
      for (std::size_t i = n.size(); i-- > 0;) {
        acc += g[i];
        ga[i] += acc;
      }
      return;
    }
    case Op::kSoftmax: {
      const double* g = grd(n);
      const double* y = val(n);
      double* ga = grd(nodes_[n.a]);
      double dot = 0.0;
      for (std::size_t i = 0; i < n.size(); ++i) dot += g[i] * y[i];
      for (std::size_t i = 0; i < n.size(); ++i)
        ga[i] += y[i] * (g[i] - dot);
      return;
    }
    case Op::kIndex: {
      grd(nodes_[n.a])[n.i0] += *grd(n);
      return;
    }
    case Op::kSlice: {
      const double* g = grd(n);
      double* ga = grd(nodes_[n.a]);
      for (int i = 0; i < n.i1; ++i) ga[n.i0 + i] += g[i];
      return;
    }
    case Op::kDivScalar: {
      const double* g = grd(n);
      const double* y = val(n);
      const double s = *val(nodes_[n.b]);
      double* ga = grd(nodes_[n.a]);
      double dot = 0.0;
      for (std::size_t i = 0; i < n.size(); ++i) {
        ga[i] += g[i] / s;
        dot += g[i] * y[i];
      }
      *grd(nodes_[n.b]) -= dot / s;
      return;
    }
    case Op::kAssemble: {
      const double* g = grd(n);
      for (std::uint32_t k = 0; k < n.aux_n; ++k) {
        const std::uint32_t row = aux_[n.aux + 3 * k];
        const std::uint32_t col = aux_[n.aux + 3 * k + 1];
        const Node& p = nodes_[aux_[n.aux + 3 * k + 2]];
        if (p.op == Op::kConst) continue;
        grad_[p.off] += g[static_cast<std::size_t>(col) * n.rows + row];
      }
      return;
    }
    case Op::kLsSolve: {
      // C = H^-1 A^T P with H = A^T A + mu I. For incoming adjoint G and
      // Gt = H^-1 G:  dLoss/dA = (P - A C) Gt^T - A Gt C^T.
      const Node& na = nodes_[n.a];
      const Node& np = nodes_[n.b];
      MapC g(grd(n), n.rows, n.cols);
      MapC c(val(n), n.rows, n.cols);
      MapC a(val(na), na.rows, na.cols);
      MapC p(val(np), np.rows, np.cols);
      const LsCache& cache = ls_[n.cache];
      const Eigen::MatrixXd gt = cache.ldlt.solve(g);
      MapM ga(grd(na), na.rows, na.cols);
      ga.noalias() += (p - a * c) * gt.transpose();
      ga.noalias() -= (a * gt) * c.transpose();
      return;
    }
  }
}

Eigen::MatrixXd Tape::value(Var v) const {
  const Node& n = node(v);
  return MapC(val(n), n.rows, n.cols);
}

Eigen::MatrixXd Tape::grad(Var v) const {
  const Node& n = node(v);
  if (grad_.size() < val_.size())
    throw std::logic_error("grad read before backward");
  return MapC(grad_.data() + n.off, n.rows, n.cols);
}

double Tape::value_scalar(Var v) const {
  const Node& n = node(v);
  if (n.size() != 1) throw std::invalid_argument("not a scalar node");
  return val_[n.off];
}

double Tape::grad_scalar(Var v) const {
  const Node& n = node(v);
  if (n.size() != 1) throw std::invalid_argument("not a scalar node");
  if (grad_.size() < val_.size())
    throw std::logic_error("grad read before backward");
  return grad_[n.off];
}

std::vector<Var> Tape::leaves() const {
  std::vector<Var> out;
  for (std::uint32_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].op == Op::kLeaf) out.push_back({i});
  return out;
}

}  // namespace knotfit::ad
