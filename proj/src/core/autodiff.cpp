#include "attnlab/core/autodiff.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "attnlab/core/dense.hpp"
#include "attnlab/core/error.hpp"

namespace attnlab::ad {

const Matrix& Var::value() const { return tape_->node(id_).value; }
const Matrix& Var::grad() const { return tape_->node(id_).grad; }

Var Tape::constant(Matrix value) {
  Tensor t;
  t.id = nodes_.size();
  t.grad = Matrix::Zero(value.rows(), value.cols());
  t.value = std::move(value);
  nodes_.push_back(std::move(t));
  return {this, nodes_.size() - 1};
}

Var Tape::parameter(Matrix value) {
  Var v = constant(std::move(value));
  nodes_.back().requires_grad = true;
  return v;
}

Var Tape::record(Matrix value, std::vector<std::size_t> parents, BackwardFn backward) {
  Tensor t;
  t.id = nodes_.size();
  t.grad = Matrix::Zero(value.rows(), value.cols());
  t.value = std::move(value);
  for (std::size_t p : parents) t.requires_grad = t.requires_grad || nodes_.at(p).requires_grad;
  t.parents = std::move(parents);
  if (t.requires_grad) t.backward = std::move(backward);
  nodes_.push_back(std::move(t));
  return {this, nodes_.size() - 1};
}

void Tape::accumulate(std::size_t id, const Matrix& g) {
  Tensor& t = nodes_.at(id);
  if (t.requires_grad) t.grad += g;
}

void Tape::backward(Var loss) {
  if (loss.rows() != 1 || loss.cols() != 1) {
    throw DimensionError("backward: loss must be 1x1, got " +
                         shape_string(loss.rows(), loss.cols()));
  }
  for (Tensor& t : nodes_) t.grad.setZero();
  nodes_.at(loss.id()).grad(0, 0) = 1.0;
  for (std::size_t k = loss.id() + 1; k-- > 0;) {
    const Tensor& t = nodes_[k];
    if (t.requires_grad && t.backward) t.backward(*this, t);
  }
}

namespace {

void require_same_tape(Var a, Var b, const char* op) {
  if (&a.tape() != &b.tape()) throw std::logic_error(std::string(op) + ": operands on different tapes");
}

void require_same_shape(Var a, Var b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + shape_string(a.rows(), a.cols()) +
                         " vs " + shape_string(b.rows(), b.cols()));
  }
}

}  // namespace

Var add(Var a, Var b) {
  require_same_tape(a, b, "add");
  require_same_shape(a, b, "add");
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape().record(a.value() + b.value(), {ia, ib}, [ia, ib](Tape& tape, const Tensor& self) {
    tape.accumulate(ia, self.grad);
    tape.accumulate(ib, self.grad);
  });
}

Var sub(Var a, Var b) {
  require_same_tape(a, b, "sub");
  require_same_shape(a, b, "sub");
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape().record(a.value() - b.value(), {ia, ib}, [ia, ib](Tape& tape, const Tensor& self) {
    tape.accumulate(ia, self.grad);
    tape.accumulate(ib, -self.grad);
  });
}

Var add_row(Var a, Var row) {
  require_same_tape(a, row, "add_row");
  if (row.rows() != 1 || row.cols() != a.cols()) {
    throw DimensionError("add_row: row " + shape_string(row.rows(), row.cols()) +
                         " does not broadcast over " + shape_string(a.rows(), a.cols()));
  }
  Matrix out = a.value();
  out.rowwise() += row.value().row(0);
  const std::size_t ia = a.id(), ir = row.id();
  return a.tape().record(std::move(out), {ia, ir}, [ia, ir](Tape& tape, const Tensor& self) {
    tape.accumulate(ia, self.grad);
    Matrix col_sums = Matrix::Zero(1, self.grad.cols());
    for (Index i = 0; i < self.grad.rows(); ++i) col_sums.row(0) += self.grad.row(i);
    tape.accumulate(ir, col_sums);
  });
}

Var hadamard(Var a, Var b) {
  require_same_tape(a, b, "hadamard");
  require_same_shape(a, b, "hadamard");
  const std::size_t ia = a.id(), ib = b.id();
  Matrix out = a.value().cwiseProduct(b.value());
  return a.tape().record(std::move(out), {ia, ib}, [ia, ib](Tape& tape, const Tensor& self) {
    tape.accumulate(ia, self.grad.cwiseProduct(tape.node(ib).value));
    tape.accumulate(ib, self.grad.cwiseProduct(tape.node(ia).value));
  });
}

Var scale(Var a, double factor) {
  const std::size_t ia = a.id();
  return a.tape().record(a.value() * factor, {ia}, [ia, factor](Tape& tape, const Tensor& self) {
    tape.accumulate(ia, self.grad * factor);
  });
}

Var transpose(Var a) {
  const std::size_t ia = a.id();
  Matrix out = a.value().transpose();
  return a.tape().record(std::move(out), {ia}, [ia](Tape& tape, const Tensor& self) {
    tape.accumulate(ia, self.grad.transpose());
  });
}

Var matmul(Var a, Var b) {
  require_same_tape(a, b, "matmul");
  const std::size_t ia = a.id(), ib = b.id();
  Matrix out = attnlab::matmul(a.value(), b.value());
  return a.tape().record(std::move(out), {ia, ib}, [ia, ib](Tape& tape, const Tensor& self) {
    if (tape.node(ia).requires_grad)
      tape.accumulate(ia, attnlab::matmul_transposed(self.grad, tape.node(ib).value));
    if (tape.node(ib).requires_grad)
      tape.accumulate(ib, attnlab::transposed_matmul(tape.node(ia).value, self.grad));
  });
}

Var matmul_transposed(Var a, Var b) {
  require_same_tape(a, b, "matmul_transposed");
  const std::size_t ia = a.id(), ib = b.id();
  Matrix out = attnlab::matmul_transposed(a.value(), b.value());
  return a.tape().record(std::move(out), {ia, ib}, [ia, ib](Tape& tape, const Tensor& self) {
    if (tape.node(ia).requires_grad)
      tape.accumulate(ia, attnlab::matmul(self.grad, tape.node(ib).value));
    if (tape.node(ib).requires_grad)
      tape.accumulate(ib, attnlab::transposed_matmul(self.grad, tape.node(ia).value));
  });
}

Var tanh(Var a) {
  const std::size_t ia = a.id();
  Matrix out = a.value().array().tanh().matrix();
  return a.tape().record(std::move(out), {ia}, [ia](Tape& tape, const Tensor& self) {
    const Matrix local = (1.0 - self.value.array().square()).matrix();
    tape.accumulate(ia, self.grad.cwiseProduct(local));
  });
}

Var exp(Var a) {
  const std::size_t ia = a.id();
  Matrix out = a.value().array().exp().matrix();
  return a.tape().record(std::move(out), {ia}, [ia](Tape& tape, const Tensor& self) {
    tape.accumulate(ia, self.grad.cwiseProduct(self.value));
  });
}

Var sum(Var a) {
  const std::size_t ia = a.id();
  double total = 0.0;
  const Matrix& v = a.value();
  for (Index i = 0; i < v.rows(); ++i)
    for (Index j = 0; j < v.cols(); ++j) total += v(i, j);
  Matrix out(1, 1);
  out(0, 0) = total;
  const Index r = v.rows(), c = v.cols();
  return a.tape().record(std::move(out), {ia}, [ia, r, c](Tape& tape, const Tensor& self) {
    tape.accumulate(ia, Matrix::Constant(r, c, self.grad(0, 0)));
  });
}

Var row_softmax(Var a, double temperature) {
  const std::size_t ia = a.id();
  Matrix out = attnlab::row_softmax(a.value(), temperature);
  return a.tape().record(std::move(out), {ia}, [ia, temperature](Tape& tape, const Tensor& self) {
    const Matrix& y = self.value;
    const Matrix& g = self.grad;
    Matrix local(y.rows(), y.cols());
    for (Index i = 0; i < y.rows(); ++i) {
      double dot = 0.0;
      for (Index j = 0; j < y.cols(); ++j) dot += g(i, j) * y(i, j);
      for (Index j = 0; j < y.cols(); ++j) local(i, j) = y(i, j) * (g(i, j) - dot) / temperature;
    }
    tape.accumulate(ia, local);
  });
}

Var pairwise_sqdist(Var x) {
  const std::size_t ix = x.id();
  Matrix out = attnlab::pairwise_sqdist(x.value());
  return x.tape().record(std::move(out), {ix}, [ix](Tape& tape, const Tensor& self) {
    // dF_ij/dx_i = 2 (x_i - x_j), dF_ij/dx_j = -2 (x_i - x_j).
    const Matrix& pts = tape.node(ix).value;
    const Matrix& g = self.grad;
    const Matrix sym = g + g.transpose();
    Matrix local = attnlab::matmul(sym, pts) * -2.0;
    for (Index i = 0; i < pts.rows(); ++i) {
      double weight = 0.0;
      for (Index j = 0; j < sym.cols(); ++j) weight += sym(i, j);
      local.row(i) += 2.0 * weight * pts.row(i);
    }
    tape.accumulate(ix, local);
  });
}

Var cross_entropy(Var logits, std::span<const int> labels) {
  const Matrix& z = logits.value();
  if (static_cast<Index>(labels.size()) != z.rows() || z.rows() == 0) {
    throw DimensionError("cross_entropy: " + std::to_string(labels.size()) + " labels for " +
                         shape_string(z.rows(), z.cols()) + " logits");
  }
  Matrix probs = attnlab::row_softmax(z, 1.0);
  std::vector<int> y(labels.begin(), labels.end());
  double total = 0.0;
  for (Index i = 0; i < z.rows(); ++i) {
    const int label = y[static_cast<std::size_t>(i)];
    if (label < 0 || label >= z.cols()) {
      throw ParameterError("cross_entropy: label " + std::to_string(label) + " out of range");
    }
    double row_max = -std::numeric_limits<double>::infinity();
    for (Index j = 0; j < z.cols(); ++j) row_max = std::max(row_max, z(i, j));
    double acc = 0.0;
    for (Index j = 0; j < z.cols(); ++j) acc += std::exp(z(i, j) - row_max);
    total += row_max + std::log(acc) - z(i, label);
  }
  const double n = static_cast<double>(z.rows());
  Matrix out(1, 1);
  out(0, 0) = total / n;
  const std::size_t il = logits.id();
  return logits.tape().record(
      std::move(out), {il},
      [il, probs = std::move(probs), y = std::move(y), n](Tape& tape, const Tensor& self) {
        Matrix local = probs;
        for (Index i = 0; i < local.rows(); ++i) local(i, y[static_cast<std::size_t>(i)]) -= 1.0;
        tape.accumulate(il, local * (self.grad(0, 0) / n));
      });
}

}  // namespace attnlab::ad
