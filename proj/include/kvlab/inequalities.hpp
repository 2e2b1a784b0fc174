#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "kvlab/fields.hpp"
#include "kvlab/trajectory.hpp"

namespace kvlab {

struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool holds = false;
  std::map<std::string, double> context;  // always contains "tol"
};

/// holds iff slack >= -(1e-10 + 1e-8 max(|lhs|, |rhs|))
InequalityReport make_report(std::string name, double lhs, double rhs,
                             std::map<std::string, double> context = {});

/// 2 pi^2 e^{2 lambda} (1 + eps/15) / (1 - 7 eps / 6), eps in (0, 1/10]
double lsi_constant(double lambda, double eps_star);

/// H(rho|e^{-psi}) <= lsi_constant(lambda, eps_star) I(rho|e^{-psi})
InequalityReport verify_lsi(const DensityField& rho, std::span<const double> psi, double eps_star,
                            double lambda);

/// int f^2 e^{-psi} <= 4 pi^2 e^{2 lambda} int f'^2 e^{-psi}, after shifting f
/// to vanish at its sign change.
InequalityReport verify_poincare(const CircleGrid& grid, std::span<const double> f,
                                 std::span<const double> psi, double lambda);

/// I_t <= I_s exp((2 + 2 / min|J|) (t - s)) with min over records s..t.
InequalityReport dissipation_growth_check(const Trajectory& trajectory, int s_index, int t_index);

struct PairSweepSummary {
  long pairs = 0;
  long violations = 0;
  double worst_relative_slack = 0.0;  // min over pairs of slack / max(|rhs|, tiny)
};

/// dissipation_growth_check over every pair s <= t of records.
PairSweepSummary dissipation_growth_sweep(const Trajectory& trajectory);

struct DissipationRateTerms {
  double hessian;    // -2 int u''^2 rho
  double curvature;  // 2 int u'^2 (-cos(theta - phi)) rho
  double momentum;   // (2/|J|)(|a|^2 - (Omega . a)^2), a = int u' omega_perp rho
  double total() const { return hessian + curvature + momentum; }
};

/// Right-hand side of the dI/dt identity, u = log(rho / e^{omega . Omega}).
DissipationRateTerms dissipation_rate_terms(const DensityField& rho, double momentum_tol = 1e-10);

/// |(I_{i+1} - I_{i-1}) / 2h - RHS_i| / max(|RHS_i|, 1e-12)
double didt_identity_residual(const Trajectory& trajectory, int index);

/// Centered dI/dt <= (2 + 2/|J|) I at an interior record.
InequalityReport dissipation_rate_check(const Trajectory& trajectory, int index);

/// sup |rho''/rho + psi' rho'/rho + psi'' - (v'' + v'^2 - psi' v')|, v = log rho + psi.
double laplog_identity_residual(const CircleGrid& grid, std::span<const double> rho,
                                std::span<const double> psi);

struct LsiSample {
  DensityField rho;
  std::vector<double> psi;
  double lambda;  // sup |psi|
  double eps;     // sup |rho e^psi - 1|
};

/// Seeded admissible pair: e^{-psi} a probability density with
/// sup|psi| <= lambda_max, rho = e^{-psi}(1 + eps f), eps in (0, eps_star].
LsiSample random_lsi_sample(GridPtr grid, std::uint64_t seed, double eps_star, double lambda_max);

/// Seeded smooth positive density and band-limited potential.
std::pair<DensityField, std::vector<double>> random_smooth_pair(GridPtr grid, std::uint64_t seed);

/// Seeded trigonometric polynomial of degree <= degree, coefficients ~ U(-1,1)/j.
std::vector<double> random_trig_polynomial(const CircleGrid& grid, std::uint64_t seed, int degree);

}  // namespace kvlab
