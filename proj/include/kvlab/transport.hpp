#pragma once

#include <vector>

#include "kvlab/fields.hpp"
#include "kvlab/solver.hpp"

namespace kvlab {

struct TransportPlanSummary {
  double w2 = 0.0;
  double optimal_cut = 0.0;  // alpha in [-1, 1]
  int iterations = 0;
};

/// W2 on the circle with geodesic cost. Densities are piecewise constant on
/// cells [theta_i - h/2, theta_i + h/2), so quantile functions are piecewise
/// linear and the cost at a fixed cut alpha is integrated exactly. alpha is
/// found by golden-section search.
TransportPlanSummary w2_circle(const DensityField& a, const DensityField& b);

/// Cost int_0^1 |F^{-1}(q) - G^{-1}(q + alpha)|^2 dq with lifted quantiles.
double w2_squared_at_cut(const DensityField& a, const DensityField& b, double alpha);

struct StabilityRecord {
  double t;
  double w2;
  double bound;  // exp((1 + 2/|J0|) t) W2(0)
  bool holds;
};

struct StabilityReport {
  double delta = 0.0;  // |J0|^4 / (2^8 max(H0, H0_bar))
  double j0 = 0.0;
  double h0 = 0.0;
  double h0_bar = 0.0;
  double w2_initial = 0.0;
  std::vector<StabilityRecord> records;
  int violations = 0;
};

double stability_delta(double j0, double max_h0);

/// Runs both solutions up to min(t_end, delta); checks records with t < delta.
/// Throws HypothesisError unless W2(rho0, rho0_bar) <= |J0| / 16.
StabilityReport stability_experiment(const DensityField& rho0, const DensityField& rho0_bar,
                                     const SolverConfig& config);

struct UniquenessRecord {
  double t;
  double diff_l2;
  double grad_diff_l2;
};

struct UniquenessReport {
  double perturbation = 0.0;
  bool twins_bitwise_identical = false;
  std::vector<UniquenessRecord> records;
  double fitted_rate = 0.0;  // max_t log(|D(t)| / |D(0)|) / t
  double fitted_c = 0.0;     // smallest C with d/dt log|D|^2 + |D'|^2/|D|^2 <= C (1 + e^{2t})
  bool gronwall_holds = false;
};

/// Twin runs to t_probe from rho0 and rho0 (1 + 1e-8 sin theta), renormalized.
UniquenessReport uniqueness_experiment(const DensityField& rho0, const SolverConfig& config,
                                       double t_probe, double perturbation = 1e-8);

/// Same, with an explicit second initial datum.
UniquenessReport uniqueness_experiment(const DensityField& rho0, const DensityField& rho0_bar,
                                       const SolverConfig& config, double t_probe);

}  // namespace kvlab
