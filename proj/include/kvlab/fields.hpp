#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "kvlab/geometry.hpp"
#include "kvlab/vec2.hpp"

namespace kvlab {

// Density per unit angle at the grid nodes. Nonnegative with unit mass
// (within 1e-12); immutable after construction.
class DensityField {
 public:
  DensityField(GridPtr grid, std::vector<double> values);

  // Divides by the quadrature mass first.
  static DensityField normalized(GridPtr grid, std::vector<double> values);

  const CircleGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](int i) const { return values_[i]; }
  int size() const { return static_cast<int>(values_.size()); }
  double mass() const;
  double min_value() const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

inline constexpr double kMassTolerance = 1e-12;

DensityField make_uniform(GridPtr grid);
DensityField make_von_mises(GridPtr grid, double kappa, double mean_angle);

/// M_Omega (1 + eps g), with g of zero M-weighted mean and sup|g| = 1.
/// seed = 0 gives g ~ cos(k(theta - phi)); otherwise g is a random
/// trigonometric polynomial of degree <= k.
DensityField make_perturbed_equilibrium(GridPtr grid, Direction direction, double eps, int mode,
                                        std::uint64_t seed);

enum class Norm { L1, L2, Linf };

double distance(const DensityField& a, const DensityField& b, Norm norm);

/// Columns theta,rho.
void write_density_csv(const DensityField& rho, const std::filesystem::path& path);

// Uniform double in [0, 1) from the top 53 bits; stable across standard libraries.
double unit_uniform(std::uint64_t bits);

}  // namespace kvlab
