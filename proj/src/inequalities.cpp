#include "kvlab/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "kvlab/diagnostics.hpp"
#include "kvlab/equilibrium.hpp"
#include "kvlab/error.hpp"

namespace kvlab {

namespace {
constexpr double kAbsTol = 1e-10;
constexpr double kRelTol = 1e-8;
constexpr double kHypothesisTol = 1e-12;

double tolerance(double lhs, double rhs) {
  return kAbsTol + kRelTol * std::max(std::abs(lhs), std::abs(rhs));
}

double sup_abs(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

void require_size(const CircleGrid& grid, std::span<const double> v, const char* what) {
  if (static_cast<int>(v.size()) != grid.size()) {
    throw InvalidArgument(std::string(what) + ": size does not match grid");
  }
}
}  // namespace

InequalityReport make_report(std::string name, double lhs, double rhs,
                             std::map<std::string, double> context) {
  if (!std::isfinite(lhs) || !std::isfinite(rhs)) {
    throw Error(name + ": non-finite side in inequality report");
  }
  InequalityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  const double tol = tolerance(lhs, rhs);
  r.holds = r.slack >= -tol;
  r.context = std::move(context);
  r.context["tol"] = tol;
  return r;
}

double lsi_constant(double lambda, double eps_star) {
  if (!(eps_star > 0.0 && eps_star <= 0.1)) {
    throw InvalidArgument("eps_star must satisfy 0 < eps_star <= 1/10");
  }
  if (!(lambda >= 0.0)) throw InvalidArgument("lambda must be >= 0");
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return 2.0 * pi2 * std::exp(2.0 * lambda) * (1.0 + eps_star / 15.0) /
         (1.0 - 7.0 * eps_star / 6.0);
}

InequalityReport verify_lsi(const DensityField& rho, std::span<const double> psi, double eps_star,
                            double lambda) {
  const CircleGrid& grid = rho.grid();
  require_size(grid, psi, "verify_lsi");
  if (!(eps_star > 0.0 && eps_star <= 0.1)) {
    throw HypothesisError("0 < eps_star <= 1/10");
  }
  const int n = grid.size();
  std::vector<double> ref(n);
  for (int i = 0; i < n; ++i) ref[i] = std::exp(-psi[i]);
  const double ref_mass = quadrature(grid, ref);
  if (std::abs(ref_mass - 1.0) > 1e-10) {
    throw HypothesisError("e^{-psi} has unit mass");
  }
  const double sup_psi = sup_abs(psi);
  if (sup_psi > lambda + kHypothesisTol) throw HypothesisError("sup|psi| <= lambda");
  double ratio = 0.0;
  for (int i = 0; i < n; ++i) ratio = std::max(ratio, std::abs(rho[i] / ref[i] - 1.0));
  if (ratio > eps_star + kHypothesisTol) {
    throw HypothesisError("sup|rho e^{psi} - 1| <= eps_star");
  }

  const double h = relative_entropy(grid, rho.values(), ref);
  const double info = fisher_information(grid, rho.values(), ref);
  const double c = lsi_constant(lambda, eps_star);
  return make_report("lsi", h, c * info,
                     {{"lambda", lambda},
                      {"eps_star", eps_star},
                      {"sup_psi", sup_psi},
                      {"sup_ratio", ratio},
                      {"constant", c},
                      {"H", h},
                      {"I", info},
                      {"n_cells", static_cast<double>(n)}});
}

InequalityReport verify_poincare(const CircleGrid& grid, std::span<const double> f,
                                 std::span<const double> psi, double lambda) {
  require_size(grid, f, "verify_poincare");
  require_size(grid, psi, "verify_poincare");
  const int n = grid.size();
  const double sup_psi = sup_abs(psi);
  if (sup_psi > lambda + kHypothesisTol) throw HypothesisError("sup|psi| <= lambda");

  int zero_cell = -1;
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const bool crossing = f[i] == 0.0 || (f[i] < 0.0) != (f[j] < 0.0);
    if (!crossing) continue;
    const int cand = (f[i] == 0.0 || std::abs(f[i]) <= std::abs(f[j])) ? i : j;
    if (zero_cell < 0 || std::abs(f[cand]) < std::abs(f[zero_cell])) zero_cell = cand;
  }
  if (zero_cell < 0) throw HypothesisError("f has a zero or a sign change");

  std::vector<double> g(f.begin(), f.end());
  const double shift = f[zero_cell];
  for (double& x : g) x -= shift;
  const std::vector<double> dg = deriv(grid, g, 1);
  std::vector<double> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    const double w = std::exp(-psi[i]);
    a[i] = g[i] * g[i] * w;
    b[i] = dg[i] * dg[i] * w;
  }
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double c = 4.0 * pi2 * std::exp(2.0 * lambda);
  return make_report(
      "poincare", quadrature(grid, a), c * quadrature(grid, b),
      {{"lambda", lambda}, {"constant", c}, {"shift", shift}, {"n_cells", static_cast<double>(n)}});
}

InequalityReport dissipation_growth_check(const Trajectory& trajectory, int s_index, int t_index) {
  const int n = trajectory.size();
  if (s_index < 0 || t_index >= n || s_index > t_index) {
    throw InvalidArgument("dissipation_growth_check: need 0 <= s <= t < records");
  }
  const auto& rec = trajectory.records;
  double min_j = std::numeric_limits<double>::infinity();
  for (int k = s_index; k <= t_index; ++k) min_j = std::min(min_j, rec[k].j.magnitude());
  const double c = 2.0 + 2.0 / min_j;
  const double dt = rec[t_index].t - rec[s_index].t;
  return make_report("dissipation_growth", rec[t_index].I, rec[s_index].I * std::exp(c * dt),
                     {{"s", rec[s_index].t}, {"t", rec[t_index].t}, {"min_J", min_j}, {"C", c}});
}

PairSweepSummary dissipation_growth_sweep(const Trajectory& trajectory) {
  PairSweepSummary out;
  out.worst_relative_slack = std::numeric_limits<double>::infinity();
  const auto& rec = trajectory.records;
  const int n = trajectory.size();
  for (int s = 0; s < n; ++s) {
    double min_j = rec[s].j.magnitude();
    for (int t = s; t < n; ++t) {
      min_j = std::min(min_j, rec[t].j.magnitude());
      const double lhs = rec[t].I;
      const double rhs = rec[s].I * std::exp((2.0 + 2.0 / min_j) * (rec[t].t - rec[s].t));
      const double slack = rhs - lhs;
      ++out.pairs;
      if (slack < -tolerance(lhs, rhs)) ++out.violations;
      const double scale = std::max(std::abs(rhs), 1e-300);
      out.worst_relative_slack = std::min(out.worst_relative_slack, slack / scale);
    }
  }
  return out;
}

DissipationRateTerms dissipation_rate_terms(const DensityField& rho, double momentum_tol) {
  const CircleGrid& grid = rho.grid();
  const int n = grid.size();
  const Momentum j = momentum(rho);
  const Direction omega = mean_direction(rho, momentum_tol);
  const auto cs = grid.cos_nodes();
  const auto sn = grid.sin_nodes();

  std::vector<double> u(n), align(n);
  for (int i = 0; i < n; ++i) {
    if (!(rho[i] > 0.0)) throw InvalidArgument("dissipation_rate_terms: density must be positive");
    align[i] = cs[i] * omega.x() + sn[i] * omega.y();
    u[i] = std::log(rho[i]) - align[i];
  }
  const std::vector<double> du = deriv(grid, u, 1);
  const std::vector<double> d2u = deriv(grid, u, 2);

  std::vector<double> hess(n), curv(n), ax(n), ay(n);
  for (int i = 0; i < n; ++i) {
    hess[i] = d2u[i] * d2u[i] * rho[i];
    curv[i] = du[i] * du[i] * (-align[i]) * rho[i];
    ax[i] = -sn[i] * du[i] * rho[i];
    ay[i] = cs[i] * du[i] * rho[i];
  }
  const Vec2 a{quadrature(grid, ax), quadrature(grid, ay)};
  const double along = a.dot(omega.vector());
  DissipationRateTerms t;
  t.hessian = -2.0 * quadrature(grid, hess);
  t.curvature = 2.0 * quadrature(grid, curv);
  t.momentum = 2.0 / j.magnitude() * (a.dot(a) - along * along);
  return t;
}

double didt_identity_residual(const Trajectory& trajectory, int index) {
  const double h = centered_spacing(trajectory, index);
  const auto& rec = trajectory.records;
  const double fd = (rec[index + 1].I - rec[index - 1].I) / (2.0 * h);
  const double rhs = dissipation_rate_terms(trajectory.states[index].rho).total();
  return std::abs(fd - rhs) / std::max(std::abs(rhs), 1e-12);
}

InequalityReport dissipation_rate_check(const Trajectory& trajectory, int index) {
  const double h = centered_spacing(trajectory, index);
  const auto& rec = trajectory.records;
  const double fd = (rec[index + 1].I - rec[index - 1].I) / (2.0 * h);
  const double jm = rec[index].j.magnitude();
  return make_report("dissipation_rate", fd, (2.0 + 2.0 / jm) * rec[index].I,
                     {{"t", rec[index].t}, {"J", jm}, {"h", h}});
}

double laplog_identity_residual(const CircleGrid& grid, std::span<const double> rho,
                                std::span<const double> psi) {
  require_size(grid, rho, "laplog_identity_residual");
  require_size(grid, psi, "laplog_identity_residual");
  const int n = grid.size();
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) {
    if (!(rho[i] > 0.0)) throw InvalidArgument("laplog_identity_residual: nonpositive density");
    v[i] = std::log(rho[i]) + psi[i];
  }
  const auto r1 = deriv(grid, rho, 1);
  const auto r2 = deriv(grid, rho, 2);
  const auto p1 = deriv(grid, psi, 1);
  const auto p2 = deriv(grid, psi, 2);
  const auto v1 = deriv(grid, v, 1);
  const auto v2 = deriv(grid, v, 2);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double lhs = r2[i] / rho[i] + p1[i] * r1[i] / rho[i] + p2[i];
    const double rhs = v2[i] + v1[i] * v1[i] - p1[i] * v1[i];
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

std::vector<double> random_trig_polynomial(const CircleGrid& grid, std::uint64_t seed, int degree) {
  std::mt19937_64 rng(seed);
  std::vector<double> p(grid.size(), 0.0);
  for (int j = 1; j <= degree; ++j) {
    const double a = (2.0 * unit_uniform(rng()) - 1.0) / j;
    const double b = (2.0 * unit_uniform(rng()) - 1.0) / j;
    for (int i = 0; i < grid.size(); ++i) {
      const double x = j * grid.node(i);
      p[i] += a * std::cos(x) + b * std::sin(x);
    }
  }
  return p;
}

namespace {
void scale_to_unit_sup(std::vector<double>& v) {
  const double s = sup_abs(v);
  if (s > 0.0) {
    for (double& x : v) x /= s;
  }
}
}  // namespace

LsiSample random_lsi_sample(GridPtr grid, std::uint64_t seed, double eps_star, double lambda_max) {
  const int n = grid->size();
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const int degree_psi = 1 + static_cast<int>(rng() % 4);
  const int degree_f = 1 + static_cast<int>(rng() % 6);
  double amp = 0.6 * unit_uniform(rng());
  const double eps = eps_star * (0.05 + 0.95 * unit_uniform(rng()));

  std::vector<double> shape = random_trig_polynomial(*grid, rng(), degree_psi);
  scale_to_unit_sup(shape);

  std::vector<double> psi(n), ref(n);
  double lambda = 0.0;
  for (;;) {
    for (int i = 0; i < n; ++i) ref[i] = std::exp(-amp * shape[i]);
    const double z = std::log(quadrature(*grid, ref));
    for (int i = 0; i < n; ++i) {
      psi[i] = amp * shape[i] + z;
      ref[i] = std::exp(-psi[i]);
    }
    lambda = sup_abs(psi);
    if (lambda <= lambda_max) break;
    amp *= 0.8;
  }

  std::vector<double> f = random_trig_polynomial(*grid, rng(), degree_f);
  std::vector<double> fw(n);
  for (int i = 0; i < n; ++i) fw[i] = f[i] * ref[i];
  const double mean = quadrature(*grid, fw) / quadrature(*grid, ref);
  for (double& x : f) x -= mean;
  scale_to_unit_sup(f);

  std::vector<double> rho(n);
  for (int i = 0; i < n; ++i) rho[i] = ref[i] * (1.0 + eps * f[i]);
  return LsiSample{DensityField::normalized(grid, std::move(rho)), std::move(psi), lambda, eps};
}

std::pair<DensityField, std::vector<double>> random_smooth_pair(GridPtr grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x5851f42d4c957f2dULL);
  std::vector<double> logr = random_trig_polynomial(*grid, rng(), 5);
  std::vector<double> psi = random_trig_polynomial(*grid, rng(), 5);
  scale_to_unit_sup(logr);
  for (double& x : logr) x = std::exp(0.8 * x);
  return {DensityField::normalized(grid, std::move(logr)), std::move(psi)};
}

}  // namespace kvlab
