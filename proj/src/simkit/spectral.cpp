#include "attnlab/simkit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "attnlab/core/dense.hpp"
#include "attnlab/core/error.hpp"
#include "attnlab/core/random.hpp"

namespace attnlab::simkit {

namespace {

bool is_symmetric(const Matrix& s) {
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  return (s - s.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

// Stationary distribution of a row-stochastic matrix: pi^T (S - I) = 0 with
// sum(pi) = 1, solved directly as an overdetermined least-squares system.
Vector stationary_distribution(const Matrix& s) {
  const Index n = s.rows();
  Eigen::MatrixXd sys(n + 1, n);
  sys.topRows(n) = s.transpose() - Matrix::Identity(n, n);
  sys.row(n).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs(n) = 1.0;
  return sys.colPivHouseholderQr().solve(rhs);
}

Matrix orthonormalize(const Matrix& z) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(z.rows(), z.cols());
  return q;
}

}  // namespace

EigenPairs top_eigenvectors(const Matrix& s, Index k, const std::optional<Vector>& degrees,
                            const OrthogonalIterationOptions& options) {
  if (s.rows() != s.cols()) {
    throw DimensionError("top_eigenvectors: matrix must be square, got " +
                         shape_string(s.rows(), s.cols()));
  }
  const Index n = s.rows();
  if (k < 1 || k > n) throw ParameterError("top_eigenvectors: k must be in [1, N]");

  Matrix a = s;
  Vector root_weight;  // eigenvectors of S are D^{-1/2} times those of the conjugate
  if (!is_symmetric(s)) {
    Vector d = degrees ? *degrees : stationary_distribution(s);
    if (d.size() != n || (d.array() <= 0).any()) {
      throw ParameterError("top_eigenvectors: degrees must be positive, one per row");
    }
    const double scale = (d.asDiagonal() * s).cwiseAbs().maxCoeff();
    const Matrix flux = d.asDiagonal() * s;
    if ((flux - flux.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
      throw ParameterError(
          "top_eigenvectors: non-symmetric input is not of the form D^-1 W with W symmetric");
    }
    root_weight = d.cwiseSqrt();
    a = root_weight.asDiagonal() * s * root_weight.cwiseInverse().asDiagonal();
    a = 0.5 * (a + a.transpose()).eval();
  }

  // Shift by a Gershgorin lower bound so the iteration favours the algebraically
  // largest eigenvalues rather than the largest in magnitude.
  double lower = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double off = a.row(i).cwiseAbs().sum() - std::abs(a(i, i));
    lower = std::min(lower, a(i, i) - off);
  }
  const double shift = -lower;

  // The block is oversampled so convergence of the wanted k pairs is governed
  // by the gap to eigenvalue k + p + 1 rather than k + 1.
  const Index block = std::min(n, k + std::max<Index>(k, 8));
  RandomSource rng(0x5eed5eedULL);
  Matrix q = orthonormalize(rng.normal_matrix(n, block, 1.0));
  EigenPairs out;
  Vector ritz_values(block);
  for (Index it = 1; it <= options.max_iterations; ++it) {
    Matrix z = a * q + shift * q;
    q = orthonormalize(z);
    const Eigen::MatrixXd projected = q.transpose() * a * q;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(0.5 * (projected + projected.transpose()));
    // Eigen returns ascending order; flip to descending.
    const Eigen::MatrixXd rot = small.eigenvectors().rowwise().reverse();
    ritz_values = small.eigenvalues().reverse();
    q = q * rot;
    const Matrix resid = a * q.leftCols(k) - q.leftCols(k) * ritz_values.head(k).asDiagonal();
    out.residual = resid.norm();
    out.iterations = it;
    if (out.residual <= options.tolerance) break;
    if (it == options.max_iterations) {
      throw ConvergenceError("top_eigenvectors: no convergence after " + std::to_string(it) +
                             " iterations, residual " + std::to_string(out.residual));
    }
  }
  q = q.leftCols(k).eval();
  ritz_values = ritz_values.head(k).eval();
  out.values = ritz_values;
  if (root_weight.size() > 0) {
    q = root_weight.cwiseInverse().asDiagonal() * q;
    for (Index c = 0; c < k; ++c) q.col(c).normalize();
  }
  out.vectors = q;
  return out;
}

}  // namespace attnlab::simkit
