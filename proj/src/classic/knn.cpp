#include "attnlab/classic/knn.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "attnlab/core/error.hpp"

namespace attnlab::classic {

Vector knn_weights(const Matrix& train, const RowVector& query, Index k) {
  const Index n = train.rows();
  if (n == 0) throw DegenerateInputError("knn: empty training set");
  if (k < 1 || k > n) {
    throw ParameterError("knn: k must be in [1, " + std::to_string(n) + "], got " + std::to_string(k));
  }
  if (query.size() != train.cols()) {
    throw DimensionError("knn: query width " + std::to_string(query.size()) + " vs training width " +
                         std::to_string(train.cols()));
  }
  Vector dist(n);
  for (Index j = 0; j < n; ++j) dist(j) = (train.row(j) - query).squaredNorm();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return dist(a) < dist(b); });
  Vector s = Vector::Zero(n);
  for (Index r = 0; r < k; ++r) s(order[static_cast<std::size_t>(r)]) = 1.0;
  return s / static_cast<double>(k);
}

int knn_predict(const Matrix& train, std::span<const int> labels, Index k, const RowVector& query) {
  if (static_cast<Index>(labels.size()) != train.rows()) {
    throw DimensionError("knn: " + std::to_string(labels.size()) + " labels for " +
                         std::to_string(train.rows()) + " training points");
  }
  const Vector s = knn_weights(train, query, k);
  int classes = 0;
  for (int y : labels) {
    if (y < 0) throw ParameterError("knn: negative label " + std::to_string(y));
    classes = std::max(classes, y + 1);
  }
  Matrix onehot = Matrix::Zero(train.rows(), classes);
  for (std::size_t j = 0; j < labels.size(); ++j) onehot(static_cast<Index>(j), labels[j]) = 1.0;
  const RowVector votes = s.transpose() * onehot;
  int best = 0;
  for (int c = 1; c < classes; ++c)
    if (votes(c) > votes(best)) best = c;
  return best;
}

std::vector<int> knn_predict_all(const Matrix& train, std::span<const int> labels, Index k,
                             const Matrix& queries) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(queries.rows()));
  for (Index i = 0; i < queries.rows(); ++i) out.push_back(knn_predict(train, labels, k, RowVector(queries.row(i))));
  return out;
}

}  // namespace attnlab::classic
