#include "kvlab/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kvlab/diagnostics.hpp"
#include "kvlab/equilibrium.hpp"
#include "kvlab/error.hpp"

namespace kvlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Cumulative cell masses normalized to end exactly at 1.
struct Cdf {
  std::vector<double> cum;   // size n + 1
  std::vector<double> mass;  // normalized cell masses
  double x0;
  double h;
  int n;

  explicit Cdf(const DensityField& rho)
      : cum(rho.size() + 1, 0.0),
        mass(rho.size()),
        x0(-0.5 * rho.grid().spacing()),
        h(rho.grid().spacing()),
        n(rho.size()) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      total += rho[i];
      cum[i + 1] = total;
    }
    for (int i = 0; i <= n; ++i) cum[i] /= total;
    cum[n] = 1.0;
    for (int i = 0; i < n; ++i) mass[i] = cum[i + 1] - cum[i];
  }

  // Cell whose q-range contains r in [0, 1).
  int cell(double r) const {
    auto it = std::upper_bound(cum.begin(), cum.end(), r);
    int i = static_cast<int>(it - cum.begin()) - 1;
    i = std::clamp(i, 0, n - 1);
    while (mass[i] <= 0.0 && i + 1 < n) ++i;
    return i;
  }

  double quantile_in_cell(int i, double r) const { return x0 + h * (i + (r - cum[i]) / mass[i]); }
};

}  // namespace

double w2_squared_at_cut(const DensityField& a, const DensityField& b, double alpha) {
  const Cdf fa(a);
  const Cdf fb(b);

  // Breakpoints in q: cumulative masses of a and those of b shifted by -alpha.
  std::vector<double> qs(fa.cum.begin(), fa.cum.end());
  const int k_lo = static_cast<int>(std::floor(alpha));
  const int k_hi = static_cast<int>(std::floor(1.0 + alpha));
  for (int k = k_lo; k <= k_hi; ++k) {
    for (double c : fb.cum) {
      const double q = c + k - alpha;
      if (q > 0.0 && q < 1.0) qs.push_back(q);
    }
  }
  std::sort(qs.begin(), qs.end());

  double total = 0.0;
  for (std::size_t s = 0; s + 1 < qs.size(); ++s) {
    const double ql = qs[s];
    const double qr = qs[s + 1];
    if (!(qr > ql)) continue;
    const double qm = 0.5 * (ql + qr);
    const int ia = fa.cell(qm);
    const double p = qm + alpha;
    const double k = std::floor(p);
    const int ib = fb.cell(p - k);
    auto diff = [&](double q) {
      const double pb = q + alpha - k;
      return fa.quantile_in_cell(ia, q) - (fb.quantile_in_cell(ib, pb) + kTwoPi * k);
    };
    const double dl = diff(ql);
    const double dr = diff(qr);
    total += (qr - ql) * (dl * dl + dl * dr + dr * dr) / 3.0;
  }
  return total;
}

TransportPlanSummary w2_circle(const DensityField& a, const DensityField& b) {
  if (!(a.grid() == b.grid())) throw InvalidArgument("w2_circle: grid mismatch");
  if (std::abs(a.mass() - b.mass()) > 1e-10) throw InvalidArgument("w2_circle: mass mismatch");

  auto cost = [&](double alpha) { return w2_squared_at_cut(a, b, alpha); };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = -1.0;
  double hi = 1.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = cost(x1);
  double f2 = cost(x2);
  int iterations = 0;
  while (hi - lo > 1e-10) {
    ++iterations;
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = cost(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = cost(x2);
    }
  }
  double best_alpha = f1 <= f2 ? x1 : x2;
  double best = std::min(f1, f2);

  // The cost is piecewise quadratic in alpha; one parabolic step through the
  // final bracket removes the residual bracket error.
  const double fl = cost(lo);
  const double fh = cost(hi);
  const double fm = cost(0.5 * (lo + hi));
  const double denom = fl - 2.0 * fm + fh;
  if (denom > 0.0) {
    const double xv = 0.5 * (lo + hi) + 0.25 * (hi - lo) * (fl - fh) / denom;
    if (xv >= lo && xv <= hi) {
      const double fv = cost(xv);
      if (fv < best) {
        best = fv;
        best_alpha = xv;
      }
    }
  }
  for (auto [x, f] : {std::pair{lo, fl}, std::pair{hi, fh}, std::pair{0.5 * (lo + hi), fm}}) {
    if (f < best) {
      best = f;
      best_alpha = x;
    }
  }
  return {std::sqrt(std::max(best, 0.0)), best_alpha, iterations};
}

double stability_delta(double j0, double max_h0) {
  if (!(max_h0 > 0.0)) return std::numeric_limits<double>::infinity();
  return std::pow(j0, 4) / (256.0 * max_h0);
}

namespace {

double entropy_to_equilibrium(const DensityField& rho, double tol) {
  return relative_entropy(rho, fisher_von_mises(rho.grid_ptr(), mean_direction(rho, tol)));
}

}  // namespace

StabilityReport stability_experiment(const DensityField& rho0, const DensityField& rho0_bar,
                                     const SolverConfig& config) {
  StabilityReport rep;
  rep.j0 = momentum(rho0).magnitude();
  rep.h0 = entropy_to_equilibrium(rho0, config.momentum_tol);
  rep.h0_bar = entropy_to_equilibrium(rho0_bar, config.momentum_tol);
  rep.w2_initial = w2_circle(rho0, rho0_bar).w2;
  if (rep.w2_initial > rep.j0 / 16.0) {
    throw HypothesisError("W2(rho0, rho0_bar) <= |J0|/16");
  }
  rep.delta = stability_delta(rep.j0, std::max(rep.h0, rep.h0_bar));

  SolverConfig cfg = config;
  cfg.t_end = std::min(config.t_end, rep.delta);
  const Trajectory a = run(rho0, cfg);
  const Trajectory b = run(rho0_bar, cfg);
  const double rate = 1.0 + 2.0 / rep.j0;
  for (int k = 0; k < a.size(); ++k) {
    const double t = a.records[k].t;
    if (!(t < rep.delta)) break;
    const double w2 = w2_circle(a.states[k].rho, b.states[k].rho).w2;
    const double bound = std::exp(rate * t) * rep.w2_initial;
    const bool holds = w2 <= bound + 1e-10 + 1e-8 * bound;
    if (!holds) ++rep.violations;
    rep.records.push_back({t, w2, bound, holds});
  }
  return rep;
}

namespace {

bool bitwise_equal(const Trajectory& x, const Trajectory& y) {
  if (x.size() != y.size()) return false;
  for (int k = 0; k < x.size(); ++k) {
    auto u = x.states[k].rho.values();
    auto v = y.states[k].rho.values();
    if (!std::equal(u.begin(), u.end(), v.begin())) return false;
  }
  return true;
}

}  // namespace

UniquenessReport uniqueness_experiment(const DensityField& rho0, const DensityField& rho0_bar,
                                       const SolverConfig& config, double t_probe) {
  if (!(t_probe > 0.0)) throw InvalidArgument("t_probe must be > 0");
  SolverConfig cfg = config;
  cfg.t_end = t_probe;

  UniquenessReport rep;
  const Trajectory base = run(rho0, cfg);
  rep.twins_bitwise_identical = bitwise_equal(base, run(rho0, cfg));
  const Trajectory other = run(rho0_bar, cfg);
  rep.perturbation = distance(rho0, rho0_bar, Norm::L2);

  const CircleGrid& grid = rho0.grid();
  for (int k = 0; k < base.size(); ++k) {
    const auto u = base.states[k].rho.values();
    const auto v = other.states[k].rho.values();
    std::vector<double> d(u.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = u[i] - v[i];
    std::vector<double> g = deriv(grid, d, 1);
    for (double& x : d) x *= x;
    for (double& x : g) x *= x;
    rep.records.push_back(
        {base.records[k].t, std::sqrt(quadrature(grid, d)), std::sqrt(quadrature(grid, g))});
  }

  const double d0 = rep.records.front().diff_l2;
  rep.fitted_rate = 0.0;
  rep.fitted_c = 0.0;
  if (d0 > 0.0) {
    for (std::size_t k = 1; k < rep.records.size(); ++k) {
      const auto& r = rep.records[k];
      if (r.diff_l2 > 0.0) {
        rep.fitted_rate = std::max(rep.fitted_rate, std::log(r.diff_l2 / d0) / r.t);
      }
      const auto& p = rep.records[k - 1];
      if (p.diff_l2 > 0.0 && r.diff_l2 > 0.0) {
        const double dlog = 2.0 * std::log(r.diff_l2 / p.diff_l2) / (r.t - p.t);
        const double grad = 0.5 * (r.grad_diff_l2 * r.grad_diff_l2 / (r.diff_l2 * r.diff_l2) +
                                   p.grad_diff_l2 * p.grad_diff_l2 / (p.diff_l2 * p.diff_l2));
        const double tm = 0.5 * (r.t + p.t);
        rep.fitted_c = std::max(rep.fitted_c, (dlog + grad) / (1.0 + std::exp(2.0 * tm)));
      }
    }
  }
  rep.gronwall_holds = std::isfinite(rep.fitted_c) && std::isfinite(rep.fitted_rate);
  return rep;
}

UniquenessReport uniqueness_experiment(const DensityField& rho0, const SolverConfig& config,
                                       double t_probe, double perturbation) {
  std::vector<double> v(rho0.values().begin(), rho0.values().end());
  const auto sn = rho0.grid().sin_nodes();
  for (int i = 0; i < rho0.size(); ++i) v[i] *= 1.0 + perturbation * sn[i];
  return uniqueness_experiment(rho0, DensityField::normalized(rho0.grid_ptr(), std::move(v)),
                               config, t_probe);
}

}  // namespace kvlab
