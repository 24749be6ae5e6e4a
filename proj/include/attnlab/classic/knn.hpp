#pragma once

#include <span>
#include <vector>

#include "attnlab/core/types.hpp"

namespace attnlab::classic {

/// Column-normalised neighbour indicator s = N_c(A) for one query: 1/k on the
/// k nearest training points (distance ties to the lowest index), 0 elsewhere.
Vector knn_weights(const Matrix& train, const RowVector& query, Index k);

/// argmax over classes of s^T onehot(y); ties to the lowest class.
int knn_predict(const Matrix& train, std::span<const int> labels, Index k, const RowVector& query);

std::vector<int> knn_predict_all(const Matrix& train, std::span<const int> labels, Index k,
                                 const Matrix& queries);

}  // namespace attnlab::classic
