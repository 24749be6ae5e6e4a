#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "attnlab/core/random.hpp"
#include "attnlab/core/types.hpp"

namespace attnlab::classic {

struct ClusterResult {
  std::vector<int> labels;
  Matrix centers;     ///< one row per cluster (center-based methods)
  Matrix membership;  ///< S, row = class, column = point (FCM); converged H (MCL)
  int iterations = 0;
  bool converged = false;
  std::vector<double> cost_history;  ///< k-means: cost after each assignment step
};

nlohmann::json to_json(const ClusterResult& result);

/// k-means++ seeding: first center uniform, the rest drawn proportional to the
/// squared distance to the nearest chosen center.
Matrix kmeans_plus_plus(const Matrix& x, Index k, RandomSource& rng);

struct FcmOptions {
  Index n_classes = 2;
  double m = 2.0;
  int max_iter = 300;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  std::optional<Matrix> initial_centers;
};

struct FcmStep {
  Matrix column_membership;  ///< N_c(D): each point's membership over classes
  Matrix membership;         ///< S = N_r(N_c(D))
  Matrix centers;            ///< S X
};

/// One fuzzy c-means update from the given centers:
/// D_ij = max(|c_i - x_j|, 1e-12)^(-2/(m-1)), S = N_r(N_c(D)), c_i = sum_j S_ij x_j.
FcmStep fcm_step(const Matrix& x, const Matrix& centers, double m);

ClusterResult fuzzy_c_means(const Matrix& x, const FcmOptions& options);

struct KMeansOptions {
  Index k = 2;
  int max_iter = 300;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  std::optional<Matrix> initial_centers;
};

/// Lloyd iteration. Ties go to the lowest center index; an empty cluster is
/// re-seeded at the point farthest from its assigned center.
ClusterResult kmeans(const Matrix& x, const KMeansOptions& options);

struct MclOptions {
  int max_iter = 100;
  double tol = 1e-9;
};

/// Markov clustering: H^1 = W (self-loops of weight 1 added where the diagonal
/// is zero), H^{k+1} = N_r(Gamma_2(H^k H^k)). Nodes are grouped by the argmax
/// column of their converged row (1e-6 tolerance, lowest index wins), labels
/// numbered by first appearance.
ClusterResult mcl(const Matrix& w, const MclOptions& options = {});

}  // namespace attnlab::classic
