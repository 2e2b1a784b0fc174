#include "kvlab/equilibrium.hpp"

#include <cmath>
#include <vector>

#include "kvlab/error.hpp"

namespace kvlab {

Direction Direction::from_vector(Vec2 v) {
  const double r = v.norm();
  if (!(r > 0.0) || !std::isfinite(r))
    throw InvalidArgument("Direction: zero or non-finite vector");
  return Direction({v.x / r, v.y / r});
}

Direction Direction::from_angle(double phi) { return Direction({std::cos(phi), std::sin(phi)}); }

namespace {

std::vector<double> gibbs_weights(const CircleGrid& grid, const Direction& d) {
  const auto cs = grid.cos_nodes();
  const auto sn = grid.sin_nodes();
  std::vector<double> w(grid.size());
  for (int i = 0; i < grid.size(); ++i) w[i] = std::exp(cs[i] * d.x() + sn[i] * d.y());
  return w;
}

}  // namespace

Momentum momentum(const DensityField& rho) {
  const CircleGrid& g = rho.grid();
  const auto cs = g.cos_nodes();
  const auto sn = g.sin_nodes();
  std::vector<double> jx(g.size()), jy(g.size());
  for (int i = 0; i < g.size(); ++i) {
    jx[i] = cs[i] * rho[i];
    jy[i] = sn[i] * rho[i];
  }
  return Momentum{{quadrature(g, jx), quadrature(g, jy)}};
}

Direction mean_direction(const DensityField& rho, double tol) {
  const Momentum j = momentum(rho);
  const double mag = j.magnitude();
  if (!(mag > tol)) throw VanishingMomentum(mag, tol);
  return Direction::from_vector(j.j);
}

double compute_normalizer_cm(Direction direction, int n_cells) {
  const CircleGrid grid(n_cells);
  return 1.0 / quadrature(grid, gibbs_weights(grid, direction));
}

double compute_equilibrium_momentum_m(Direction direction, int n_cells) {
  const CircleGrid grid(n_cells);
  std::vector<double> w = gibbs_weights(grid, direction);
  const double cm = 1.0 / quadrature(grid, w);
  std::vector<double> jx(n_cells), jy(n_cells);
  for (int i = 0; i < n_cells; ++i) {
    jx[i] = grid.cos_nodes()[i] * w[i] * cm;
    jy[i] = grid.sin_nodes()[i] * w[i] * cm;
  }
  return Vec2{quadrature(grid, jx), quadrature(grid, jy)}.norm();
}

double normalizer_cm() {
  static const double value = compute_normalizer_cm(Direction::from_angle(0.0));
  return value;
}

double equilibrium_momentum_m() {
  static const double value = compute_equilibrium_momentum_m(Direction::from_angle(0.0));
  return value;
}

DensityField fisher_von_mises(GridPtr grid, Direction direction) {
  std::vector<double> v = gibbs_weights(*grid, direction);
  const double cm = normalizer_cm();
  for (double& x : v) x *= cm;
  return DensityField(std::move(grid), std::move(v));
}

}  // namespace kvlab
