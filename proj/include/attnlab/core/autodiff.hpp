#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "attnlab/core/types.hpp"

namespace attnlab::ad {

class Tape;

/// One recorded value on a tape. grad has the shape of value and stays zero
/// until Tape::backward runs.
struct Tensor {
  std::size_t id = 0;
  Matrix value;
  Matrix grad;
  std::vector<std::size_t> parents;
  bool requires_grad = false;
  /// Pushes this node's grad into the grads of its parents.
  std::function<void(Tape&, const Tensor&)> backward;
};

/// Lightweight handle to a tape node.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  std::size_t id() const { return id_; }
  Tape& tape() const { return *tape_; }
  const Matrix& value() const;
  const Matrix& grad() const;
  Index rows() const { return value().rows(); }
  Index cols() const { return value().cols(); }

 private:
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Records primitive operations in creation order, which is a topological order.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, const Tensor&)>;

  Var constant(Matrix value);
  Var parameter(Matrix value);
  Var record(Matrix value, std::vector<std::size_t> parents, BackwardFn backward);

  Tensor& node(std::size_t id) { return nodes_.at(id); }
  const Tensor& node(std::size_t id) const { return nodes_.at(id); }
  std::size_t size() const { return nodes_.size(); }

  /// Adds g into the grad of node `id` if that node tracks gradients.
  void accumulate(std::size_t id, const Matrix& g);

  /// Reverse sweep from a 1x1 loss. Resets all grads first, so calling it twice
  /// gives the same result.
  void backward(Var loss);

 private:
  std::vector<Tensor> nodes_;
};

Var add(Var a, Var b);
Var sub(Var a, Var b);
/// a (r x c) plus a 1 x c row broadcast over every row.
Var add_row(Var a, Var row);
Var hadamard(Var a, Var b);
Var scale(Var a, double factor);
Var transpose(Var a);
Var matmul(Var a, Var b);
/// a * b^T.
Var matmul_transposed(Var a, Var b);
Var tanh(Var a);
Var exp(Var a);
Var sum(Var a);
Var row_softmax(Var a, double temperature);
Var pairwise_sqdist(Var x);
/// Mean softmax cross-entropy of logits (N x C) against integer labels.
Var cross_entropy(Var logits, std::span<const int> labels);

}  // namespace attnlab::ad
