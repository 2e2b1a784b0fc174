#include "kvlab/rates.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kvlab/equilibrium.hpp"
#include "kvlab/error.hpp"
#include "kvlab/inequalities.hpp"

namespace kvlab {

namespace {

template <class F>
double integrate(F f, double a, double b) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 10, 1e-12);
}

double require_t0(const RateConstants& c) {
  if (!c.t0) throw InvalidArgument("rate constants: t0 not set");
  return *c.t0;
}

}  // namespace

RateConstants compute_constants(double h0, double j0, double eps_star) {
  if (!(eps_star > 0.0 && eps_star <= 0.1)) {
    throw InvalidArgument("eps_star must satisfy 0 < eps_star <= 1/10");
  }
  if (!(h0 >= 0.0)) throw InvalidArgument("h0 must be >= 0");
  if (!(j0 > 0.0)) throw InvalidArgument("j0 must be > 0");
  RateConstants c;
  c.c_m = normalizer_cm();
  c.m = equilibrium_momentum_m();
  c.lambda = 1.0 + std::abs(std::log(c.c_m));
  c.eps_star = eps_star;
  c.c_star = lsi_constant(c.lambda, eps_star);
  c.L = std::numbers::ln2 / (2.0 + 4.0 / c.m);
  c.j0 = j0;
  c.h0 = h0;
  const double base = c.c_m * c.c_m * std::exp(-2.0) * eps_star * eps_star;
  c.t_star_args[0] = base;
  c.t_star_args[1] = c.L / (2.0 * c.c_star) * base;
  c.t_star_args[2] = c.m / c.c_star;
  const double least = *std::min_element(std::begin(c.t_star_args), std::end(c.t_star_args));
  c.t_star = 2.0 * h0 / least;
  return c;
}

double t0_threshold(const RateConstants& c) {
  return 0.5 * c.c_m * c.c_m * std::exp(-2.0) * c.eps_star * c.eps_star;
}

double detect_t0(const Trajectory& trajectory, const RateConstants& constants) {
  if (constants.h0 == 0.0) return 0.0;
  if (trajectory.size() == 0) throw TrajectoryTooShort("detect_t0: empty trajectory");
  const double threshold = t0_threshold(constants);
  const double limit = constants.t_star * (1.0 + 1e-12);
  for (const auto& r : trajectory.records) {
    if (r.t > limit) break;
    if (r.I <= threshold) return r.t;
  }
  const double t_last = trajectory.records.back().t;
  std::ostringstream os;
  os << "no record with I <= " << threshold << " in [0, " << std::min(t_last, constants.t_star)
     << "]";
  if (t_last < constants.t_star) throw TrajectoryTooShort("detect_t0: " + os.str());
  throw TheoryViolation("detect_t0: " + os.str() + " although the run covers [0, T_*]");
}

RateConstants with_t0(RateConstants constants, double t0) {
  if (!(t0 >= 0.0) || t0 > constants.t_star * (1.0 + 1e-12)) {
    throw InvalidArgument("t0 must lie in [0, t_star]");
  }
  constants.t0 = t0;
  return constants;
}

double b_function(double t, const RateConstants& c) {
  const double t0 = require_t0(c);
  const double a = c.j0 * std::exp(-t0);
  const double kappa = 2.0 + 2.0 / a;
  const double beta = a / (2.0 * a + 2.0) * (std::exp(kappa * t0) - std::exp(kappa * t));
  return 1.0 / (std::max(beta, 0.0) + c.c_star * std::exp(kappa * std::max(t0 - t, 0.0)));
}

double b_integral(double t, const RateConstants& c) {
  const double t0 = require_t0(c);
  if (t <= 0.0) return 0.0;
  const double head = integrate([&](double s) { return b_function(s, c); }, 0.0, std::min(t, t0));
  return head + std::max(t - t0, 0.0) / c.c_star;
}

double b_tail_integral(double t, const RateConstants& c) {
  const double t0 = require_t0(c);
  // beyond T_0 the integrand is exp(-b(T_0) - (r - T_0)/C_*)
  if (t >= t0) return c.c_star * std::exp(-b_integral(t, c));
  const double head = integrate([&](double r) { return std::exp(-b_integral(r, c)); }, t, t0);
  return head + c.c_star * std::exp(-b_integral(t0, c));
}

std::vector<Envelope> decay_envelopes(const Trajectory& trajectory, const RateConstants& constants,
                                      double tail_constant) {
  const double t0 = require_t0(constants);
  const int n = trajectory.size();
  std::vector<Envelope> out;
  if (n == 0) return out;

  // Nodes: 0, T_0 and the record times. int_0^t B accumulates interval by
  // interval; the tail integral accumulates backwards from T_0.
  std::vector<double> nodes{0.0, t0};
  for (const auto& r : trajectory.records) nodes.push_back(std::max(r.t, 0.0));
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  const auto b = [&](double s) { return b_function(s, constants); };
  std::vector<double> cum(nodes.size(), 0.0);
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    const double lo = nodes[k - 1];
    const double hi = nodes[k];
    cum[k] = cum[k - 1] + (lo >= t0 ? (hi - lo) / constants.c_star : integrate(b, lo, hi));
  }
  std::vector<double> tail(nodes.size(), 0.0);
  for (std::size_t k = nodes.size(); k-- > 0;) {
    if (nodes[k] >= t0) {
      tail[k] = constants.c_star * std::exp(-cum[k]);
      continue;
    }
    const double lo = nodes[k];
    const double hi = nodes[k + 1];
    const auto integrand = [&](double r) {
      return std::exp(-cum[k] - boost::math::quadrature::gauss<double, 15>::integrate(b, lo, r));
    };
    tail[k] =
        tail[k + 1] + boost::math::quadrature::gauss<double, 15>::integrate(integrand, lo, hi);
  }

  out.reserve(n);
  for (const auto& r : trajectory.records) {
    const std::size_t k =
        std::lower_bound(nodes.begin(), nodes.end(), std::max(r.t, 0.0)) - nodes.begin();
    const double decay = std::exp(-cum[k]);
    const double hb = constants.h0 * decay;
    out.push_back({r.t, hb, constants.h0 * (decay + tail_constant * tail[k]), std::sqrt(2.0 * hb)});
  }
  return out;
}

double asymptotic_rate_item3(double eps) {
  const double lambda = 1.0 + std::abs(std::log(normalizer_cm()));
  const double base = 1.0 / (2.0 * std::numbers::pi * std::numbers::pi * std::exp(2.0 * lambda));
  if (!(eps < base)) throw InvalidArgument("asymptotic_rate_item3: eps too large");
  return base - eps;
}

MomentumStabilization momentum_stabilization(const Trajectory& trajectory) {
  const auto& rec = trajectory.records;
  const int n = trajectory.size();
  if (n < 3) throw InvalidArgument("momentum_stabilization: need at least 3 records");
  const double t_half = 0.5 * rec.back().t;
  int mid = 0;
  for (int k = 0; k < n; ++k) {
    if (std::abs(rec[k].t - t_half) < std::abs(rec[mid].t - t_half)) mid = k;
  }
  MomentumStabilization out;
  out.omega_drift = (rec.back().omega.vector() - rec[mid].omega.vector()).norm();
  out.fitted_c = 0.0;
  for (int k = 1; k + 1 < n; ++k) {
    const double dt = rec[k + 1].t - rec[k - 1].t;
    const double djdt = std::abs(rec[k + 1].j.magnitude() - rec[k - 1].j.magnitude()) / dt;
    if (rec[k].l1_to_equilibrium > 1e-12) {
      out.fitted_c = std::max(out.fitted_c, djdt / rec[k].l1_to_equilibrium);
    }
  }
  return out;
}

}  // namespace kvlab
