#pragma once

#include <span>
#include <vector>

#include "kvlab/banded.hpp"
#include "kvlab/fields.hpp"
#include "kvlab/trajectory.hpp"

namespace kvlab {

enum class FluxScheme {
  exponential_fitting,  // Scharfetter-Gummel, 2nd order, M-matrix
  central,              // centered drift, 2nd order
  fourth_order,         // staggered 4th-order flux in Slotboom form, exact on M_Omega
};

enum class Stepping { semi_implicit, explicit_euler };

struct SolverConfig {
  double dt = 1e-4;
  double t_end = 1.0;
  int n_cells = 256;
  double momentum_tol = 1e-10;
  FluxScheme flux_scheme = FluxScheme::exponential_fitting;
  Stepping stepping = Stepping::semi_implicit;
  // implicit weight of the semi-implicit step: 1 backward Euler, 0.5 Crank-Nicolson
  double theta = 1.0;
  int record_every = 1;

  void validate() const;
};

/// x / (e^x - 1), B(0) = 1
double bernoulli(double x);

// Numerical flux at face f (between nodes f and f+1), linear in rho:
// F_f = sum_k coeffs[f * width + k] * rho[f + first + k].
// The update is d rho_i / dt = -(F_i - F_{i-1}) / h.
struct FluxStencil {
  int first = 0;
  int width = 0;
  std::vector<double> coeffs;
};

FluxStencil flux_stencil(const CircleGrid& grid, const Direction& omega, FluxScheme scheme);
std::vector<double> face_fluxes(const FluxStencil& stencil, std::span<const double> rho);

/// A with d rho / dt = A rho for the frozen direction.
CyclicBandedMatrix assemble_operator(const CircleGrid& grid, const FluxStencil& stencil);

SimulationState initial_state(const DensityField& rho0, double momentum_tol);

SimulationState step(const SimulationState& state, const SolverConfig& config);

/// Records at t = 0, every record_every steps, and t = t_end.
Trajectory run(const DensityField& rho0, const SolverConfig& config);

double max_stable_dt(const SolverConfig& config, const SimulationState& state);

const char* to_string(FluxScheme scheme);
const char* to_string(Stepping stepping);

}  // namespace kvlab
