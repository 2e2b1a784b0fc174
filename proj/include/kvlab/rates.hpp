#pragma once

#include <optional>
#include <vector>

#include "kvlab/trajectory.hpp"

namespace kvlab {

struct RateConstants {
  double c_m = 0.0;
  double m = 0.0;
  double lambda = 0.0;  // 1 + |log C_M|
  double eps_star = 0.0;
  double c_star = 0.0;  // lsi_constant(lambda, eps_star)
  double L = 0.0;       // log 2 / (2 + 4/m)
  double t_star = 0.0;
  std::optional<double> t0;
  double j0 = 0.0;
  double h0 = 0.0;

  // The three arguments of the minimum in T_*.
  double t_star_args[3] = {0.0, 0.0, 0.0};
};

RateConstants compute_constants(double h0, double j0, double eps_star);

/// Threshold of the detection: 1/2 C_M^2 e^{-2} eps_*^2.
double t0_threshold(const RateConstants& c);

/// First record time in [0, min(t_end, t_star)] with I <= threshold.
/// Throws TrajectoryTooShort if none and the run ends before t_star,
/// TheoryViolation if none although the run covers [0, t_star].
double detect_t0(const Trajectory& trajectory, const RateConstants& constants);

RateConstants with_t0(RateConstants constants, double t0);

/// B(t) = [beta_+(t) + C_* exp(kappa (T_0 - t)_+)]^{-1}, kappa = 2 + 2/(j0 e^{-T_0}).
double b_function(double t, const RateConstants& c);

/// int_0^t B, adaptive Gauss-Kronrod on [0, min(t, T_0)], exact beyond T_0.
double b_integral(double t, const RateConstants& c);

/// int_t^infinity exp(-int_0^r B) dr
double b_tail_integral(double t, const RateConstants& c);

struct Envelope {
  double t;
  double h_bound;       // h0 exp(-int_0^t B)
  double l1_bound;      // h0 (exp(-int_0^t B) + C int_t^inf exp(-int_0^r B) dr)
  double ckp_l1_bound;  // sqrt(2 h_bound)
};

std::vector<Envelope> decay_envelopes(const Trajectory& trajectory, const RateConstants& constants,
                                      double tail_constant = 1.0);

/// 1 / (2 pi^2 e^{2 (1 + |log C_M|)}) - eps
double asymptotic_rate_item3(double eps);

struct MomentumStabilization {
  double omega_drift;  // |Omega(t_end) - Omega(t_end/2)|
  double fitted_c;     // max |dJ/dt| / ||rho - M||_1 over interior records
};

MomentumStabilization momentum_stabilization(const Trajectory& trajectory);

}  // namespace kvlab
