#include "kvlab/fields.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "kvlab/equilibrium.hpp"
#include "kvlab/error.hpp"
#include "kvlab/format.hpp"

namespace kvlab {

DensityField::DensityField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw InvalidArgument("DensityField: null grid");
  if (static_cast<int>(values_.size()) != grid_->size()) {
    throw InvalidArgument("DensityField: value count does not match grid");
  }
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InvalidArgument("DensityField: values must be finite and nonnegative");
    }
  }
  const double m = quadrature(*grid_, values_);
  if (std::abs(m - 1.0) > kMassTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "DensityField: mass " << m << " differs from 1";
    throw InvalidArgument(os.str());
  }
}

DensityField DensityField::normalized(GridPtr grid, std::vector<double> values) {
  if (!grid) throw InvalidArgument("DensityField: null grid");
  const double m = quadrature(*grid, values);
  if (!(m > 0.0)) throw InvalidArgument("DensityField: cannot normalize nonpositive mass");
  for (double& v : values) v /= m;
  return DensityField(std::move(grid), std::move(values));
}

double DensityField::mass() const { return quadrature(*grid_, values_); }

double DensityField::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

DensityField make_uniform(GridPtr grid) {
  std::vector<double> v(grid->size(), 1.0 / (2.0 * std::numbers::pi));
  return DensityField(std::move(grid), std::move(v));
}

DensityField make_von_mises(GridPtr grid, double kappa, double mean_angle) {
  if (!std::isfinite(kappa) || kappa < 0.0) {
    throw InvalidArgument("make_von_mises: concentration must be finite and >= 0");
  }
  const double c = std::cos(mean_angle);
  const double s = std::sin(mean_angle);
  const auto cs = grid->cos_nodes();
  const auto sn = grid->sin_nodes();
  std::vector<double> v(grid->size());
  for (int i = 0; i < grid->size(); ++i) v[i] = std::exp(kappa * (cs[i] * c + sn[i] * s));
  return DensityField::normalized(std::move(grid), std::move(v));
}

double unit_uniform(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

DensityField make_perturbed_equilibrium(GridPtr grid, Direction direction, double eps, int mode,
                                        std::uint64_t seed) {
  if (!(std::abs(eps) < 1.0)) {
    throw InvalidArgument("make_perturbed_equilibrium: |eps| must be < 1");
  }
  if (mode < 1) throw InvalidArgument("make_perturbed_equilibrium: mode must be >= 1");

  const int n = grid->size();
  const DensityField m = fisher_von_mises(grid, direction);
  const double phi = direction.angle();

  std::vector<double> g(n, 0.0);
  if (seed == 0) {
    for (int i = 0; i < n; ++i) g[i] = std::cos(mode * (grid->node(i) - phi));
  } else {
    std::mt19937_64 rng(seed);
    for (int j = 1; j <= mode; ++j) {
      const double a = 2.0 * unit_uniform(rng()) - 1.0;
      const double b = 2.0 * unit_uniform(rng()) - 1.0;
      for (int i = 0; i < n; ++i) {
        const double x = j * (grid->node(i) - phi);
        g[i] += a * std::cos(x) + b * std::sin(x);
      }
    }
  }

  std::vector<double> gm(n);
  for (int i = 0; i < n; ++i) gm[i] = g[i] * m[i];
  const double mean = quadrature(*grid, gm);
  double sup = 0.0;
  for (double& x : g) {
    x -= mean;
    sup = std::max(sup, std::abs(x));
  }
  if (!(sup > 0.0)) throw InvalidArgument("make_perturbed_equilibrium: degenerate perturbation");

  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = m[i] * (1.0 + eps * (g[i] / sup));
  for (double x : v) {
    if (!(x > 0.0)) throw InvalidArgument("make_perturbed_equilibrium: negative density");
  }
  return DensityField(std::move(grid), std::move(v));
}

double distance(const DensityField& a, const DensityField& b, Norm norm) {
  if (!(a.grid() == b.grid())) throw InvalidArgument("distance: grid mismatch");
  const int n = a.size();
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = a[i] - b[i];
  switch (norm) {
    case Norm::L1:
      for (double& x : d) x = std::abs(x);
      return quadrature(a.grid(), d);
    case Norm::L2:
      for (double& x : d) x *= x;
      return std::sqrt(quadrature(a.grid(), d));
    case Norm::Linf: {
      double s = 0.0;
      for (double x : d) s = std::max(s, std::abs(x));
      return s;
    }
  }
  return 0.0;
}

void write_density_csv(const DensityField& rho, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string());
  out << "theta,rho\n";
  for (int i = 0; i < rho.size(); ++i) {
    out << format_double(rho.grid().node(i)) << ',' << format_double(rho[i]) << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace kvlab
