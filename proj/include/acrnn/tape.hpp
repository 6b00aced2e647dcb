#pragma once

#include <cstdint>
#include <vector>

#include "acrnn/tensor.hpp"

namespace acrnn {

// Handle to a value recorded on a Tape.
struct Var {
  std::int32_t id = -1;
  bool valid() const { return id >= 0; }
};

// Reverse-mode tape. Operations record nodes in topological (creation) order;
// backward() walks them once in reverse and accumulates gradients into every
// node, leaves included. One recording supports exactly one backward pass;
// reset() starts the next recording and keeps the allocated capacity.
//
// A tape belongs to one logical training thread. Parallelism lives inside the
// kernels, invisible to callers, and never changes reduction order.
class Tape {
 public:
  Tape() = default;

  void reserve(std::size_t nodes) {
    nodes_.reserve(nodes);
    grads_.reserve(nodes);
  }

  // Records an input value. Gradients accumulate into leaves like any other
  // node; callers read them back after backward().
  Var leaf(Tensor value);

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);            // same shape
  Var add_rowvec(Var m, Var v);     // matrix + row-vector bias, the one broadcast
  Var mul(Var a, Var b);            // elementwise
  Var sigmoid(Var x);
  Var tanh(Var x);
  Var concat(Var a, Var b);         // last axis, rank-2
  Var slice(Var x, std::size_t col_begin, std::size_t col_end);  // last axis, rank-2
  Var sum_squares_diff(Var a, Var b);  // scalar ||a - b||^2 over all elements
  Var scale(Var x, double factor);

  const Tensor& value(Var v) const { return nodes_[check(v)].value; }
  // Valid after backward().
  const Tensor& grad(Var v) const;

  // loss must be scalar (one element). Throws ContractError on a non-scalar
  // loss or when called twice on one recording.
  void backward(Var loss);

  bool backward_done() const { return backward_done_; }
  std::size_t size() const { return nodes_.size(); }

  void reset();

 private:
  enum class Op : std::uint8_t {
    leaf,
    matmul,
    add,
    add_rowvec,
    mul,
    sigmoid,
    tanh,
    concat,
    slice,
    sum_squares_diff,
    scale,
  };

  struct Node {
    Op op;
    std::int32_t a = -1;
    std::int32_t b = -1;
    std::size_t aux0 = 0;  // slice begin / concat split
    std::size_t aux1 = 0;  // slice end
    double factor = 0.0;   // scale
    Tensor value;
  };

  std::int32_t check(Var v) const;
  Var push(Node node);
  void check_open() const;

  std::vector<Node> nodes_;
  std::vector<Tensor> grads_;
  bool backward_done_ = false;
};

}  // namespace acrnn
