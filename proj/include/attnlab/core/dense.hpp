#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "attnlab/core/error.hpp"
#include "attnlab/core/types.hpp"

namespace attnlab {

/// Matrix product with a fixed i-k-j loop: every output entry accumulates its
/// terms in increasing k, so results are reproducible bit for bit.
template <typename DerivedA, typename DerivedB>
MatrixX<typename DerivedA::Scalar> matmul(const Eigen::MatrixBase<DerivedA>& a,
                                          const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: cannot multiply " + shape_string(a.rows(), a.cols()) +
                         " by " + shape_string(b.rows(), b.cols()));
  }
  const MatrixX<Scalar> lhs = a;
  const MatrixX<Scalar> rhs = b;
  MatrixX<Scalar> out = MatrixX<Scalar>::Zero(lhs.rows(), rhs.cols());
  const Index inner = lhs.cols();
  const Index width = rhs.cols();
  for (Index i = 0; i < lhs.rows(); ++i) {
    Scalar* out_row = out.data() + i * width;
    for (Index k = 0; k < inner; ++k) {
      const Scalar aik = lhs(i, k);
      const Scalar* rhs_row = rhs.data() + k * width;
      for (Index j = 0; j < width; ++j) out_row[j] += aik * rhs_row[j];
    }
  }
  return out;
}

/// a * b^T. The transpose of b is formed once so the inner loop runs contiguously
/// over output columns; each entry still sums its terms in increasing k.
template <typename DerivedA, typename DerivedB>
MatrixX<typename DerivedA::Scalar> matmul_transposed(const Eigen::MatrixBase<DerivedA>& a,
                                                     const Eigen::MatrixBase<DerivedB>& b) {
  if (a.cols() != b.cols()) {
    throw DimensionError("matmul_transposed: cannot multiply " +
                         shape_string(a.rows(), a.cols()) + " by transpose of " +
                         shape_string(b.rows(), b.cols()));
  }
  return matmul(a, MatrixX<typename DerivedB::Scalar>(b.transpose()));
}

/// a^T * b, accumulating over the rows of a and b in increasing order.
template <typename DerivedA, typename DerivedB>
MatrixX<typename DerivedA::Scalar> transposed_matmul(const Eigen::MatrixBase<DerivedA>& a,
                                                     const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("transposed_matmul: cannot multiply transpose of " +
                         shape_string(a.rows(), a.cols()) + " by " + shape_string(b.rows(), b.cols()));
  }
  return matmul(MatrixX<typename DerivedA::Scalar>(a.transpose()), b);
}

/// exp(M_ij / tau) / sum_k exp(M_ik / tau), computed after subtracting each row max.
template <typename Derived>
MatrixX<typename Derived::Scalar> row_softmax(const Eigen::MatrixBase<Derived>& m,
                                              typename Derived::Scalar temperature) {
  using Scalar = typename Derived::Scalar;
  if (!(temperature > 0)) {
    throw ParameterError("row_softmax: temperature must be positive, got " +
                         std::to_string(static_cast<double>(temperature)));
  }
  MatrixX<Scalar> out = m;
  for (Index i = 0; i < out.rows(); ++i) {
    Scalar row_max = -std::numeric_limits<Scalar>::infinity();
    for (Index j = 0; j < out.cols(); ++j) row_max = std::max(row_max, out(i, j));
    Scalar total = 0;
    for (Index j = 0; j < out.cols(); ++j) {
      out(i, j) = std::exp((out(i, j) - row_max) / temperature);
      total += out(i, j);
    }
    for (Index j = 0; j < out.cols(); ++j) out(i, j) /= total;
  }
  return out;
}

/// Squared Euclidean distances between rows, via |x_i|^2 + |x_j|^2 - 2 x_i.x_j.
/// The result is exactly symmetric with a zero diagonal; rounding negatives are clamped to 0.
template <typename Derived>
MatrixX<typename Derived::Scalar> pairwise_sqdist(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const MatrixX<Scalar> pts = x;
  const Index n = pts.rows();
  VectorX<Scalar> norms(n);
  for (Index i = 0; i < n; ++i) {
    Scalar acc = 0;
    for (Index k = 0; k < pts.cols(); ++k) acc += pts(i, k) * pts(i, k);
    norms(i) = acc;
  }
  const MatrixX<Scalar> gram = matmul_transposed(pts, pts);
  MatrixX<Scalar> out(n, n);
  for (Index i = 0; i < n; ++i) {
    out(i, i) = 0;
    for (Index j = i + 1; j < n; ++j) {
      const Scalar d = std::max(Scalar(0), norms(i) + norms(j) - 2 * gram(i, j));
      out(i, j) = d;
      out(j, i) = d;
    }
  }
  return out;
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.array().isFinite().all();
}

/// Throws DomainError naming `what` if any entry is NaN or infinite.
void require_finite(const Matrix& m, const std::string& what);

}  // namespace attnlab
