#pragma once

#include <optional>

#include "attnlab/core/types.hpp"

namespace attnlab::simkit {

struct EigenPairs {
  Vector values;   ///< descending
  Matrix vectors;  ///< one eigenvector per column, unit 2-norm
  Index iterations = 0;
  double residual = 0.0;
};

struct OrthogonalIterationOptions {
  double tolerance = 1e-8;
  Index max_iterations = 10000;
};

/// Leading k eigenpairs by orthogonal (subspace) iteration with Rayleigh–Ritz.
///
/// Symmetric input is used as is. A non-symmetric input must be reversible,
/// S = D^-1 W with W symmetric (row-stochastic kernels); it is conjugated to
/// D^{1/2} S D^{-1/2}, and the returned vectors are mapped back to
/// eigenvectors of S. `degrees` may supply D; otherwise the stationary
/// distribution of S is used. Throws ConvergenceError with the final residual.
EigenPairs top_eigenvectors(const Matrix& s, Index k,
                            const std::optional<Vector>& degrees = std::nullopt,
                            const OrthogonalIterationOptions& options = {});

}  // namespace attnlab::simkit
