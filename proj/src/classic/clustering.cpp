#include "attnlab/classic/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "attnlab/core/dense.hpp"
#include "attnlab/core/error.hpp"
#include "attnlab/core/json_io.hpp"
#include "attnlab/simkit/operators.hpp"

namespace attnlab::classic {

namespace {

constexpr double kDistanceClamp = 1e-12;

double sqdist(const Matrix& a, Index i, const Matrix& b, Index j) {
  return (a.row(i) - b.row(j)).squaredNorm();
}

void check_points(const Matrix& x, Index k, const char* who) {
  if (x.rows() == 0) throw DegenerateInputError(std::string(who) + ": empty data set");
  if (k < 1 || k > x.rows()) {
    throw ParameterError(std::string(who) + ": number of clusters " + std::to_string(k) +
                         " must be in [1, " + std::to_string(x.rows()) + "]");
  }
  require_finite(x, who);
}

Matrix initial_centers(const Matrix& x, Index k, const std::optional<Matrix>& given,
                       std::uint64_t seed, const char* who) {
  if (given) {
    if (given->rows() != k || given->cols() != x.cols()) {
      throw DimensionError(std::string(who) + ": initial centers " +
                           shape_string(given->rows(), given->cols()) + ", expected " +
                           shape_string(k, x.cols()));
    }
    return *given;
  }
  RandomSource rng(seed);
  return kmeans_plus_plus(x, k, rng);
}

}  // namespace

nlohmann::json to_json(const ClusterResult& result) {
  return {{"labels", result.labels},
          {"centers", matrix_to_json(result.centers)},
          {"membership", matrix_to_json(result.membership)},
          {"iterations", result.iterations},
          {"converged", result.converged},
          {"cost_history", result.cost_history}};
}

Matrix kmeans_plus_plus(const Matrix& x, Index k, RandomSource& rng) {
  check_points(x, k, "kmeans_plus_plus");
  const Index n = x.rows();
  std::vector<Index> chosen{static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)))};
  Vector nearest(n);
  for (Index j = 0; j < n; ++j) nearest(j) = sqdist(x, j, x, chosen[0]);
  while (static_cast<Index>(chosen.size()) < k) {
    const double total = nearest.sum();
    Index pick = -1;
    if (total > 0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (Index j = 0; j < n; ++j) {
        acc += nearest(j);
        if (nearest(j) > 0 && acc > target) {
          pick = j;
          break;
        }
      }
      if (pick < 0) {  // roundoff at the top end
        for (Index j = n - 1; j >= 0; --j)
          if (nearest(j) > 0) { pick = j; break; }
      }
    } else {
      // Fewer distinct points than k: fall back to the first unused index.
      for (Index j = 0; j < n && pick < 0; ++j)
        if (std::find(chosen.begin(), chosen.end(), j) == chosen.end()) pick = j;
    }
    chosen.push_back(pick);
    for (Index j = 0; j < n; ++j) nearest(j) = std::min(nearest(j), sqdist(x, j, x, pick));
  }
  Matrix centers(k, x.cols());
  for (Index c = 0; c < k; ++c) centers.row(c) = x.row(chosen[static_cast<std::size_t>(c)]);
  return centers;
}

FcmStep fcm_step(const Matrix& x, const Matrix& centers, double m) {
  if (!(m > 1)) throw ParameterError("fcm_step: fuzzifier m must exceed 1, got " + std::to_string(m));
  if (centers.cols() != x.cols()) {
    throw DimensionError("fcm_step: centers " + shape_string(centers.rows(), centers.cols()) +
                         " vs points " + shape_string(x.rows(), x.cols()));
  }
  const double power = -2.0 / (m - 1.0);
  Matrix d(centers.rows(), x.rows());
  for (Index i = 0; i < centers.rows(); ++i)
    for (Index j = 0; j < x.rows(); ++j)
      d(i, j) = std::pow(std::max(std::sqrt(sqdist(centers, i, x, j)), kDistanceClamp), power);
  FcmStep step;
  step.column_membership = simkit::normalize(d, simkit::NormalizeMode::kColumn);
  step.membership = simkit::normalize(step.column_membership, simkit::NormalizeMode::kRow);
  step.centers = step.membership * x;
  return step;
}

ClusterResult fuzzy_c_means(const Matrix& x, const FcmOptions& options) {
  check_points(x, options.n_classes, "fuzzy_c_means");
  if (options.max_iter < 1) throw ParameterError("fuzzy_c_means: max_iter must be >= 1");
  Matrix centers = initial_centers(x, options.n_classes, options.initial_centers, options.seed,
                                   "fuzzy_c_means");
  ClusterResult result;
  FcmStep step;
  for (int it = 1; it <= options.max_iter; ++it) {
    step = fcm_step(x, centers, options.m);
    const double shift = (step.centers - centers).rowwise().norm().maxCoeff();
    if (!std::isfinite(shift)) {
      throw DomainError("fuzzy_c_means: non-finite center displacement at iteration " +
                        std::to_string(it));
    }
    centers = step.centers;
    result.iterations = it;
    if (shift <= options.tol) {
      result.converged = true;
      break;
    }
  }
  result.centers = centers;
  result.membership = step.membership;
  result.labels.resize(static_cast<std::size_t>(x.rows()));
  for (Index j = 0; j < x.rows(); ++j) {
    Index best = 0;
    for (Index c = 1; c < options.n_classes; ++c)
      if (step.column_membership(c, j) > step.column_membership(best, j)) best = c;
    result.labels[static_cast<std::size_t>(j)] = static_cast<int>(best);
  }
  return result;
}

ClusterResult kmeans(const Matrix& x, const KMeansOptions& options) {
  check_points(x, options.k, "kmeans");
  if (options.max_iter < 1) throw ParameterError("kmeans: max_iter must be >= 1");
  const Index n = x.rows();
  const Index k = options.k;
  Matrix centers = initial_centers(x, k, options.initial_centers, options.seed, "kmeans");
  ClusterResult result;
  result.labels.assign(static_cast<std::size_t>(n), 0);
  Vector own(n);
  for (int it = 1; it <= options.max_iter; ++it) {
    double cost = 0.0;
    for (Index j = 0; j < n; ++j) {
      int best = 0;
      double best_d = sqdist(x, j, centers, 0);
      for (Index c = 1; c < k; ++c) {
        const double d = sqdist(x, j, centers, c);
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(c);
        }
      }
      result.labels[static_cast<std::size_t>(j)] = best;
      own(j) = best_d;
      cost += best_d;
    }
    result.cost_history.push_back(cost);

    Matrix next = Matrix::Zero(k, x.cols());
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index j = 0; j < n; ++j) {
      const int c = result.labels[static_cast<std::size_t>(j)];
      next.row(c) += x.row(j);
      ++counts[static_cast<std::size_t>(c)];
    }
    for (Index c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        next.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
      } else {
        Index far = 0;
        own.maxCoeff(&far);
        next.row(c) = x.row(far);
        own(far) = 0.0;  // a second empty cluster takes the next farthest point
      }
    }
    const double shift = (next - centers).rowwise().norm().maxCoeff();
    centers = next;
    result.iterations = it;
    if (shift <= options.tol) {
      result.converged = true;
      break;
    }
  }
  result.centers = centers;
  return result;
}

ClusterResult mcl(const Matrix& w, const MclOptions& options) {
  if (w.rows() != w.cols()) {
    throw DimensionError("mcl: weight matrix must be square, got " + shape_string(w.rows(), w.cols()));
  }
  if (w.rows() == 0) throw DegenerateInputError("mcl: empty graph");
  if (options.max_iter < 1) throw ParameterError("mcl: max_iter must be >= 1");
  require_finite(w, "mcl");
  if ((w.array() < 0).any()) throw DomainError("mcl: weights must be nonnegative");
  if ((w - w.transpose()).cwiseAbs().maxCoeff() > 0.0) throw DomainError("mcl: weights must be symmetric");
  const Index n = w.rows();
  Matrix h = w;
  for (Index i = 0; i < n; ++i)
    if (h(i, i) == 0.0) h(i, i) = 1.0;
  for (Index i = 0; i < n; ++i) {
    if (h.row(i).sum() <= 0.0) throw DegenerateInputError("mcl: row " + std::to_string(i) + " is zero");
  }

  ClusterResult result;
  for (int it = 1; it <= options.max_iter; ++it) {
    const Matrix expanded = h * h;
    const Matrix next = simkit::normalize(simkit::inflate(expanded, simkit::PowerInflation{2.0}),
                                          simkit::NormalizeMode::kRow);
    const double change = (next - h).cwiseAbs().maxCoeff();
    h = next;
    result.iterations = it;
    if (change <= options.tol) {
      result.converged = true;
      break;
    }
  }
  result.membership = h;

  constexpr double kTieTolerance = 1e-6;
  std::vector<Index> attractor(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const double top = h.row(i).maxCoeff();
    Index j = 0;
    while (h(i, j) < top - kTieTolerance) ++j;
    attractor[static_cast<std::size_t>(i)] = j;
  }
  std::vector<Index> seen;
  result.labels.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const Index a = attractor[static_cast<std::size_t>(i)];
    auto pos = std::find(seen.begin(), seen.end(), a);
    if (pos == seen.end()) {
      seen.push_back(a);
      pos = seen.end() - 1;
    }
    result.labels[static_cast<std::size_t>(i)] = static_cast<int>(pos - seen.begin());
  }
  return result;
}

}  // namespace attnlab::classic
