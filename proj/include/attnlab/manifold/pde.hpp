#pragma once

#include "attnlab/manifold/point_cloud.hpp"

namespace attnlab::manifold {

/// Explicit Euler for dH/dt = H'' + 2 (p'/p) H' on the periodic grid
/// theta_k = 2 pi k / grid_size, central differences. Requires dt <= 0.4 h^2.
Vector pde_euler_reference(Index grid_size, const DensitySpec& density, const FieldSpec& field, double dt,
                           int steps);

enum class DerivativeMode { kAnalytic, kFiniteDifference };

/// Max over the grid of |LHS - RHS| for Delta f + 2 <grad p / p, grad f> = p^{4/(n-2)} Delta_g~ f
/// with g~ = p^{4/(n-2)} g. Only the circle (n = 1) is supported; n = 2 is excluded
/// by the identity itself. The left side always uses analytic derivatives; the mode
/// selects how Delta_g~ f on the right is evaluated.
double conformal_identity_check(const DensitySpec& density, const FieldSpec& field, int manifold_dim,
                                Index grid_size, DerivativeMode mode = DerivativeMode::kAnalytic);

}  // namespace attnlab::manifold
