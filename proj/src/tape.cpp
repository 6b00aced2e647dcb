#include "acrnn/tape.hpp"

#include <cmath>
#include <cstring>

#include "acrnn/kernels.hpp"

namespace acrnn {

namespace {

#ifndef NDEBUG
void debug_check_finite(const Tensor& t, const char* op) {
  if (!t.all_finite()) throw NonFiniteError(std::string("tape op ") + op + " produced non-finite values");
}
#define ACRNN_FINITE(t, op) debug_check_finite(t, op)
#else
#define ACRNN_FINITE(t, op) ((void)0)
#endif

void require_rank2(const Tensor& t, const char* op) {
  if (t.rank() != 2) throw ShapeError(std::string(op) + ": expected rank-2 tensor, got " + t.shape_string());
}

}  // namespace

bool Tensor::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

std::string Tensor::shape_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape_[i]);
  }
  return s + "]";
}

std::int32_t Tape::check(Var v) const {
  if (!v.valid() || static_cast<std::size_t>(v.id) >= nodes_.size())
    throw ContractError("tape: invalid var id " + std::to_string(v.id));
  return v.id;
}

void Tape::check_open() const {
  if (backward_done_)
    throw ContractError("tape: recording after backward; call reset() first");
}

Var Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return Var{static_cast<std::int32_t>(nodes_.size() - 1)};
}

Var Tape::leaf(Tensor value) {
  check_open();
  return push(Node{Op::leaf, -1, -1, 0, 0, 0.0, std::move(value)});
}

Var Tape::matmul(Var a, Var b) {
  check_open();
  const Tensor& ta = nodes_[check(a)].value;
  const Tensor& tb = nodes_[check(b)].value;
  require_rank2(ta, "matmul");
  require_rank2(tb, "matmul");
  if (ta.cols() != tb.rows())
    throw ShapeError("matmul: incompatible shapes " + shape_pair(ta, tb));
  Tensor out({ta.rows(), tb.cols()});
  kernels::matmul(ta.data(), tb.data(), out.data(), ta.rows(), ta.cols(), tb.cols());
  ACRNN_FINITE(out, "matmul");
  return push(Node{Op::matmul, a.id, b.id, 0, 0, 0.0, std::move(out)});
}

Var Tape::add(Var a, Var b) {
  check_open();
  const Tensor& ta = nodes_[check(a)].value;
  const Tensor& tb = nodes_[check(b)].value;
  if (!ta.same_shape(tb)) throw ShapeError("add: shape mismatch " + shape_pair(ta, tb));
  Tensor out(ta.shape());
  kernels::add(ta.data(), tb.data(), out.data(), ta.size());
  ACRNN_FINITE(out, "add");
  return push(Node{Op::add, a.id, b.id, 0, 0, 0.0, std::move(out)});
}

Var Tape::add_rowvec(Var m, Var v) {
  check_open();
  const Tensor& tm = nodes_[check(m)].value;
  const Tensor& tv = nodes_[check(v)].value;
  require_rank2(tm, "add_rowvec");
  if (tv.rank() != 1 || tv.size() != tm.cols())
    throw ShapeError("add_rowvec: shape mismatch " + shape_pair(tm, tv));
  Tensor out(tm.shape());
  kernels::add_rowvec(tm.data(), tv.data(), out.data(), tm.rows(), tm.cols());
  ACRNN_FINITE(out, "add_rowvec");
  return push(Node{Op::add_rowvec, m.id, v.id, 0, 0, 0.0, std::move(out)});
}

Var Tape::mul(Var a, Var b) {
  check_open();
  const Tensor& ta = nodes_[check(a)].value;
  const Tensor& tb = nodes_[check(b)].value;
  if (!ta.same_shape(tb)) throw ShapeError("mul: shape mismatch " + shape_pair(ta, tb));
  Tensor out(ta.shape());
  kernels::mul(ta.data(), tb.data(), out.data(), ta.size());
  ACRNN_FINITE(out, "mul");
  return push(Node{Op::mul, a.id, b.id, 0, 0, 0.0, std::move(out)});
}

Var Tape::sigmoid(Var x) {
  check_open();
  const Tensor& tx = nodes_[check(x)].value;
  Tensor out(tx.shape());
  kernels::sigmoid(tx.data(), out.data(), tx.size());
  ACRNN_FINITE(out, "sigmoid");
  return push(Node{Op::sigmoid, x.id, -1, 0, 0, 0.0, std::move(out)});
}

Var Tape::tanh(Var x) {
  check_open();
  const Tensor& tx = nodes_[check(x)].value;
  Tensor out(tx.shape());
  kernels::tanh(tx.data(), out.data(), tx.size());
  ACRNN_FINITE(out, "tanh");
  return push(Node{Op::tanh, x.id, -1, 0, 0, 0.0, std::move(out)});
}

Var Tape::concat(Var a, Var b) {
  check_open();
  const Tensor& ta = nodes_[check(a)].value;
  const Tensor& tb = nodes_[check(b)].value;
  require_rank2(ta, "concat");
  require_rank2(tb, "concat");
  if (ta.rows() != tb.rows())
    throw ShapeError("concat: row mismatch " + shape_pair(ta, tb));
  const std::size_t rows = ta.rows(), ca = ta.cols(), cb = tb.cols();
  Tensor out({rows, ca + cb});
  for (std::size_t r = 0; r < rows; ++r) {
    std::memcpy(out.data() + r * (ca + cb), ta.data() + r * ca, ca * sizeof(double));
    std::memcpy(out.data() + r * (ca + cb) + ca, tb.data() + r * cb, cb * sizeof(double));
  }
  return push(Node{Op::concat, a.id, b.id, ca, 0, 0.0, std::move(out)});
}

Var Tape::slice(Var x, std::size_t col_begin, std::size_t col_end) {
  check_open();
  const Tensor& tx = nodes_[check(x)].value;
  require_rank2(tx, "slice");
  if (col_begin >= col_end || col_end > tx.cols())
    throw ShapeError("slice: range [" + std::to_string(col_begin) + "," +
                     std::to_string(col_end) + ") out of " + tx.shape_string());
  const std::size_t rows = tx.rows(), cols = tx.cols(), w = col_end - col_begin;
  Tensor out({rows, w});
  for (std::size_t r = 0; r < rows; ++r)
    std::memcpy(out.data() + r * w, tx.data() + r * cols + col_begin, w * sizeof(double));
  return push(Node{Op::slice, x.id, -1, col_begin, col_end, 0.0, std::move(out)});
}

Var Tape::sum_squares_diff(Var a, Var b) {
  check_open();
  const Tensor& ta = nodes_[check(a)].value;
  const Tensor& tb = nodes_[check(b)].value;
  if (!ta.same_shape(tb))
    throw ShapeError("sum_squares_diff: shape mismatch " + shape_pair(ta, tb));
  Tensor out = Tensor::scalar(kernels::sum_squares_diff(ta.data(), tb.data(), ta.size()));
  ACRNN_FINITE(out, "sum_squares_diff");
  return push(Node{Op::sum_squares_diff, a.id, b.id, 0, 0, 0.0, std::move(out)});
}

Var Tape::scale(Var x, double factor) {
  check_open();
  const Tensor& tx = nodes_[check(x)].value;
  Tensor out(tx.shape());
  for (std::size_t i = 0; i < tx.size(); ++i) out[i] = tx[i] * factor;
  ACRNN_FINITE(out, "scale");
  return push(Node{Op::scale, x.id, -1, 0, 0, factor, std::move(out)});
}

const Tensor& Tape::grad(Var v) const {
  if (!backward_done_) throw ContractError("tape: grad() before backward()");
  return grads_[check(v)];
}

void Tape::backward(Var loss) {
  const std::int32_t loss_id = check(loss);
  if (backward_done_) throw ContractError("tape: backward() called twice on one recording");
  if (nodes_[loss_id].value.size() != 1)
    throw ContractError("tape: backward() needs a scalar loss, got " +
                        nodes_[loss_id].value.shape_string());

  // Buffers from the previous recording usually have the same shapes (the
  // training unroll repeats); reuse them instead of reallocating.
  bool reusable = grads_.size() == nodes_.size();
  for (std::size_t i = 0; reusable && i < nodes_.size(); ++i)
    reusable = grads_[i].same_shape(nodes_[i].value);
  if (reusable) {
    for (Tensor& g : grads_) std::memset(g.data(), 0, g.size() * sizeof(double));
  } else {
    grads_.clear();
    grads_.reserve(nodes_.size());
    for (const Node& n : nodes_) grads_.emplace_back(Tensor::zeros(n.value.shape()));
  }
  grads_[loss_id][0] = 1.0;

  // Right-hand matmul operands repeat across an unrolled sequence (the same
  // weight leaves feed every step), so their transposes are cached per pass.
  std::vector<std::vector<double>> bt_cache(nodes_.size());

  for (std::size_t idx = nodes_.size(); idx-- > 0;) {
    const Node& n = nodes_[idx];
    const Tensor& g = grads_[idx];
    switch (n.op) {
      case Op::leaf:
        break;
      case Op::matmul: {
        const Tensor& ta = nodes_[n.a].value;
        const Tensor& tb = nodes_[n.b].value;
        const std::size_t rows = ta.rows(), inner = ta.cols(), cols = tb.cols();
        // dA += dC * B^T
        std::vector<double>& bt = bt_cache[n.b];
        if (bt.empty()) {
          bt.resize(inner * cols);
          kernels::transpose(tb.data(), bt.data(), inner, cols);
        }
        kernels::matmul_acc(g.data(), bt.data(), grads_[n.a].data(), rows, cols, inner);
        // dB += A^T * dC
        kernels::matmul_atb_acc(ta.data(), g.data(), grads_[n.b].data(), rows, inner, cols);
        break;
      }
      case Op::add:
        kernels::axpy(1.0, g.data(), grads_[n.a].data(), g.size());
        kernels::axpy(1.0, g.data(), grads_[n.b].data(), g.size());
        break;
      case Op::add_rowvec:
        kernels::axpy(1.0, g.data(), grads_[n.a].data(), g.size());
        kernels::colsum_acc(g.data(), grads_[n.b].data(), g.rows(), g.cols());
        break;
      case Op::mul:
        kernels::mul_acc(g.data(), nodes_[n.b].value.data(), grads_[n.a].data(), g.size());
        kernels::mul_acc(g.data(), nodes_[n.a].value.data(), grads_[n.b].data(), g.size());
        break;
      case Op::sigmoid: {
        const Tensor& y = n.value;
        Tensor& ga = grads_[n.a];
        for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * y[i] * (1.0 - y[i]);
        break;
      }
      case Op::tanh: {
        const Tensor& y = n.value;
        Tensor& ga = grads_[n.a];
        for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
        break;
      }
      case Op::concat: {
        const std::size_t split = n.aux0, total = n.value.cols();
        const std::size_t cb = total - split;
        Tensor& ga = grads_[n.a];
        Tensor& gb = grads_[n.b];
        for (std::size_t r = 0; r < n.value.rows(); ++r) {
          kernels::axpy(1.0, g.data() + r * total, ga.data() + r * split, split);
          kernels::axpy(1.0, g.data() + r * total + split, gb.data() + r * cb, cb);
        }
        break;
      }
      case Op::slice: {
        const std::size_t begin = n.aux0, w = n.aux1 - n.aux0;
        const std::size_t cols = nodes_[n.a].value.cols();
        Tensor& ga = grads_[n.a];
        for (std::size_t r = 0; r < n.value.rows(); ++r)
          kernels::axpy(1.0, g.data() + r * w, ga.data() + r * cols + begin, w);
        break;
      }
      case Op::sum_squares_diff: {
        const double gl = 2.0 * g[0];
        const Tensor& ta = nodes_[n.a].value;
        const Tensor& tb = nodes_[n.b].value;
        Tensor& ga = grads_[n.a];
        Tensor& gb = grads_[n.b];
        for (std::size_t i = 0; i < ta.size(); ++i) {
          const double d = gl * (ta[i] - tb[i]);
          ga[i] += d;
          gb[i] -= d;
        }
        break;
      }
      case Op::scale:
        kernels::axpy(n.factor, g.data(), grads_[n.a].data(), g.size());
        break;
    }
  }
  backward_done_ = true;
}

void Tape::reset() {
  // Gradient buffers stay allocated for reuse; grad() is gated on
  // backward_done_ so stale buffers are unreachable.
  nodes_.clear();
  backward_done_ = false;
}

}  // namespace acrnn
