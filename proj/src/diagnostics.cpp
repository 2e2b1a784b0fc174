#include "kvlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "kvlab/equilibrium.hpp"
#include "kvlab/error.hpp"
#include "kvlab/trajectory.hpp"

namespace kvlab {
namespace {

// (1+f) log1p(f) - f
double phi_entropy(double f) {
  if (f == -1.0) return 1.0;
  if (std::abs(f) < 1e-2) {
    // sum_{k>=2} (-1)^k f^k / (k(k-1))
    double term = f * f;
    double sum = 0.0;
    for (int k = 2; k <= 10; ++k) {
      sum += ((k % 2 == 0) ? 1.0 : -1.0) * term / (k * (k - 1.0));
      term *= f;
    }
    return sum;
  }
  return (1.0 + f) * std::log1p(f) - f;
}

void check_sizes(const CircleGrid& grid, std::span<const double> a, std::span<const double> b) {
  if (static_cast<int>(a.size()) != grid.size() || static_cast<int>(b.size()) != grid.size()) {
    throw InvalidArgument("diagnostics: field size does not match grid");
  }
}

}  // namespace

double relative_entropy(const CircleGrid& grid, std::span<const double> rho,
                        std::span<const double> ref) {
  check_sizes(grid, rho, ref);
  std::vector<double> w(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    if (!(ref[i] > 0.0)) throw InvalidArgument("relative_entropy: reference must be positive");
    if (rho[i] < 0.0) throw InvalidArgument("relative_entropy: negative density");
    w[i] = ref[i] * phi_entropy(rho[i] / ref[i] - 1.0);
  }
  return quadrature(grid, w);
}

double relative_entropy(const DensityField& rho, const DensityField& ref) {
  if (!(rho.grid() == ref.grid())) throw InvalidArgument("relative_entropy: grid mismatch");
  return relative_entropy(rho.grid(), rho.values(), ref.values());
}

double fisher_information(const CircleGrid& grid, std::span<const double> rho,
                          std::span<const double> ref) {
  check_sizes(grid, rho, ref);
  std::vector<double> u(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    if (!(rho[i] > 0.0) || !(ref[i] > 0.0)) {
      throw InvalidArgument("fisher_information: nonpositive cell");
    }
    u[i] = std::log(rho[i] / ref[i]);
  }
  std::vector<double> du = deriv(grid, u, 1);
  for (int i = 0; i < grid.size(); ++i) du[i] = du[i] * du[i] * rho[i];
  return quadrature(grid, du);
}

double fisher_information(const DensityField& rho, const DensityField& ref) {
  if (!(rho.grid() == ref.grid())) throw InvalidArgument("fisher_information: grid mismatch");
  return fisher_information(rho.grid(), rho.values(), ref.values());
}

double entropy(const DensityField& rho) {
  std::vector<double> w(rho.size());
  for (int i = 0; i < rho.size(); ++i) {
    w[i] = rho[i] == 0.0 ? 0.0 : rho[i] * std::log(std::max(rho[i], kLogFloor));
  }
  return quadrature(rho.grid(), w);
}

double free_energy(const DensityField& rho) { return entropy(rho) - momentum(rho).magnitude(); }

double sup_ratio_distance(const DensityField& rho, const Direction& omega) {
  const DensityField m = fisher_von_mises(rho.grid_ptr(), omega);
  double s = 0.0;
  for (int i = 0; i < rho.size(); ++i) s = std::max(s, std::abs(rho[i] / m[i] - 1.0));
  return s;
}

DiagnosticsRecord make_record(double t, const DensityField& rho, double momentum_tol) {
  DiagnosticsRecord r;
  r.t = t;
  r.j = momentum(rho);
  r.omega = mean_direction(rho, momentum_tol);
  const DensityField m = fisher_von_mises(rho.grid_ptr(), r.omega);
  r.low_density = rho.min_value() < kLowDensity;

  std::vector<double> clamped(rho.values().begin(), rho.values().end());
  for (double& x : clamped) x = std::max(x, kLogFloor);
  r.H = relative_entropy(rho, m);
  r.I = fisher_information(rho.grid(), clamped, m.values());
  r.E = entropy(rho) - r.j.magnitude();
  r.l1_to_equilibrium = distance(rho, m, Norm::L1);
  double s = 0.0;
  for (int i = 0; i < rho.size(); ++i) s = std::max(s, std::abs(rho[i] / m[i] - 1.0));
  r.sup_ratio = s;
  return r;
}

double centered_spacing(const Trajectory& trajectory, int index) {
  if (index < 1 || index + 1 >= trajectory.size()) {
    throw InvalidArgument("record index must be interior");
  }
  const auto& rec = trajectory.records;
  const double h_minus = rec[index].t - rec[index - 1].t;
  const double h_plus = rec[index + 1].t - rec[index].t;
  if (!(h_minus > 0.0) || std::abs(h_plus - h_minus) > 1e-9 * h_minus) {
    throw InvalidArgument("records around index are not uniformly spaced");
  }
  return 0.5 * (h_minus + h_plus);
}

double entropy_production_residual(const Trajectory& trajectory, int index) {
  const double h = centered_spacing(trajectory, index);
  const auto& rec = trajectory.records;
  const double dhdt = (rec[index + 1].H - rec[index - 1].H) / (2.0 * h);
  return std::abs(dhdt + rec[index].I) / std::max(rec[index].I, 1e-12);
}

SupRatioCheck sup_ratio_bound_check(const DensityField& rho, const Direction& omega) {
  const DensityField m = fisher_von_mises(rho.grid_ptr(), omega);
  const double lhs = sup_ratio_distance(rho, omega);
  const double rhs = std::numbers::e / normalizer_cm() * std::sqrt(fisher_information(rho, m));
  return {lhs, rhs, lhs <= rhs + 1e-10};
}

}  // namespace kvlab
