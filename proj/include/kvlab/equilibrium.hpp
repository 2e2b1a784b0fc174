#pragma once

#include "kvlab/fields.hpp"
#include "kvlab/vec2.hpp"

namespace kvlab {

inline constexpr double kDefaultMomentumTol = 1e-10;

/// J = (int cos(theta) rho, int sin(theta) rho).
Momentum momentum(const DensityField& rho);

/// J/|J|; throws VanishingMomentum when |J| <= tol.
Direction mean_direction(const DensityField& rho, double tol = kDefaultMomentumTol);

/// C_M exp(cos(theta - phi)) at the nodes.
DensityField fisher_von_mises(GridPtr grid, Direction direction);

/// C_M = 1 / int exp(omega . Omega), cached.
double normalizer_cm();

/// m = |int omega M_Omega|, cached.
double equilibrium_momentum_m();

// Uncached evaluation on an n-cell midpoint grid with an arbitrary direction.
double compute_normalizer_cm(Direction direction, int n_cells = 4096);
double compute_equilibrium_momentum_m(Direction direction, int n_cells = 4096);

}  // namespace kvlab
