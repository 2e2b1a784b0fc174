#pragma once

#include <span>

#include "kvlab/fields.hpp"
#include "kvlab/vec2.hpp"

namespace kvlab {

struct Trajectory;

// Logs are taken of max(rho, kLogFloor); cells below kLowDensity raise a flag.
inline constexpr double kLogFloor = 1e-300;
inline constexpr double kLowDensity = 1e-14;

/// H(rho|ref) = int rho log(rho/ref).
/// Evaluated as int ref phi(rho/ref - 1), phi(f) = (1+f) log1p(f) - f, which
/// equals the definition for unit-mass inputs and keeps full relative
/// precision when rho is close to ref.
double relative_entropy(const CircleGrid& grid, std::span<const double> rho,
                        std::span<const double> ref);
double relative_entropy(const DensityField& rho, const DensityField& ref);

/// I(rho|ref) = int (d/dtheta log(rho/ref))^2 rho, spectral derivative.
double fisher_information(const CircleGrid& grid, std::span<const double> rho,
                          std::span<const double> ref);
double fisher_information(const DensityField& rho, const DensityField& ref);

/// int rho log rho
double entropy(const DensityField& rho);

/// E = int rho log rho - |J|
double free_energy(const DensityField& rho);

/// sup |rho / M_Omega - 1|
double sup_ratio_distance(const DensityField& rho, const Direction& omega);

struct DiagnosticsRecord {
  double t = 0.0;
  double H = 0.0;
  double I = 0.0;
  double E = 0.0;
  Momentum j;
  Direction omega = Direction::from_angle(0.0);
  double l1_to_equilibrium = 0.0;
  double sup_ratio = 0.0;
  bool low_density = false;
};

/// All quantities relative to M_{Omega_rho}.
DiagnosticsRecord make_record(double t, const DensityField& rho, double momentum_tol);

/// |(H_{i+1} - H_{i-1}) / 2h + I_i| / max(I_i, 1e-12)
double entropy_production_residual(const Trajectory& trajectory, int index);

struct SupRatioCheck {
  double lhs;
  double rhs;
  bool holds;
};

/// sup|rho/M - 1| <= e / C_M * sqrt(I(rho|M_Omega))
SupRatioCheck sup_ratio_bound_check(const DensityField& rho, const Direction& omega);

// Record spacing around index, checked uniform to 1e-9 relative.
double centered_spacing(const Trajectory& trajectory, int index);

}  // namespace kvlab
