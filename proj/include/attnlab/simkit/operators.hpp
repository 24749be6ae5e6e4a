#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "attnlab/core/types.hpp"

namespace attnlab::simkit {

/// Distances feeding metric_similarity: Euclidean distances between the rows
/// of a point matrix, or a precomputed symmetric, nonnegative, zero-diagonal matrix.
Matrix euclidean_distances(const Matrix& points);
void validate_distance_matrix(const Matrix& dist);

/// D_ij = c_i - sign(t) * dist_ij^t, with sign(0) = 0 so t = 0 gives the constant c_i.
/// Diagonal entries with t < 0 use the convention 0^t -> excluded (set to c_i).
Matrix metric_similarity(const Matrix& dist, const Vector& c, double t);
Matrix metric_similarity(const Matrix& dist, double c, double t);

/// D_ij = x_i^T (Q^T K) x_j for Q, K of shape m x n and rows x_i in R^n.
Matrix qk_dot_similarity(const Matrix& x, const Matrix& q, const Matrix& k);

struct WeightedNeighbor {
  Index index = 0;
  double weight = 0.0;
};
using WeightRow = std::vector<WeightedNeighbor>;

/// Reconstruction weights v_i ~ sum_j w_ij v_j with sum_j w_ij = 1. Solved exactly
/// when the constrained problem has a unique minimiser, otherwise from the
/// regularised local Gram system (G + 1e-9 trace(G) I) w = 1.
std::vector<WeightRow> local_combination(const Matrix& points,
                                         const std::vector<std::vector<Index>>& neighbors);
/// Dense N x N matrix with the local-combination weights in their columns.
Matrix local_combination_matrix(const Matrix& points,
                                const std::vector<std::vector<Index>>& neighbors);
/// Indices of the k nearest other points of every row (ties to the lower index).
std::vector<std::vector<Index>> nearest_neighbors(const Matrix& points, Index k);

/// A^k by repeated multiplication; k = 0 yields the identity.
Matrix adjacency_power(const Matrix& adjacency, int k);

struct PowerInflation {
  double r = 1.0;
};
struct ExpInflation {
  Vector eps;  ///< one entry per row
};
using InflationMode = std::variant<PowerInflation, ExpInflation>;

/// Power mode: sign(r) * M_ij^r. Exp mode: exp(M_ij / eps_i).
Matrix inflate(const Matrix& m, const InflationMode& mode);

enum class NormalizeMode { kRow, kColumn, kTwoSide, kGlobal };

/// Row: M_ij / sum_k M_ik. Column: M_ij / sum_k M_kj.
/// Two-side: M_ij / (sum_k M_ik * sum_k M_jk). Global: M_ij / sum_kl M_kl.
Matrix normalize(const Matrix& m, NormalizeMode mode);

}  // namespace attnlab::simkit
