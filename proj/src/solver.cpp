#include "kvlab/solver.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "kvlab/equilibrium.hpp"
#include "kvlab/error.hpp"

namespace kvlab {

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be > 0");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw InvalidArgument("t_end must be >= 0");
  if (record_every < 1) throw InvalidArgument("record_every must be >= 1");
  if (!(momentum_tol >= 0.0)) throw InvalidArgument("momentum_tol must be >= 0");
  if (!(theta >= 0.5 && theta <= 1.0)) throw InvalidArgument("theta must lie in [0.5, 1]");
  CircleGrid check(n_cells);
  (void)check;
}

double bernoulli(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x / 2.0 + x * x / 12.0;
  return x / std::expm1(x);
}

FluxStencil flux_stencil(const CircleGrid& grid, const Direction& omega, FluxScheme scheme) {
  const int n = grid.size();
  const double h = grid.spacing();
  const double c = omega.x();
  const double s = omega.y();
  const auto cn = grid.cos_nodes();
  const auto sn = grid.sin_nodes();
  const auto cf = grid.cos_faces();
  const auto sf = grid.sin_faces();
  // cos(theta - phi) at node i
  auto align = [&](int i) { return cn[i] * c + sn[i] * s; };

  FluxStencil st;
  switch (scheme) {
    case FluxScheme::exponential_fitting: {
      st.first = 0;
      st.width = 2;
      st.coeffs.resize(2 * n);
      for (int f = 0; f < n; ++f) {
        // U = -cos(theta - phi), s = U_{f+1} - U_f
        const double ds = align(f) - align((f + 1) % n);
        const double bp = bernoulli(ds);
        st.coeffs[2 * f] = bp / h;
        st.coeffs[2 * f + 1] = -(bp + ds) / h;  // B(-s) = B(s) + s
      }
      break;
    }
    case FluxScheme::central: {
      st.first = 0;
      st.width = 2;
      st.coeffs.resize(2 * n);
      for (int f = 0; f < n; ++f) {
        const double u = -(sf[f] * c - cf[f] * s);  // -sin(theta_{f+1/2} - phi)
        st.coeffs[2 * f] = 1.0 / h + 0.5 * u;
        st.coeffs[2 * f + 1] = -1.0 / h + 0.5 * u;
      }
      break;
    }
    case FluxScheme::fourth_order: {
      // F_f = -W_f (g_{f-1} - 27 g_f + 27 g_{f+1} - g_{f+2}) / (24h), g = rho / M.
      // The conservative flux is (-F_{f-1} + 26 F_f - F_{f+1}) / 24.
      std::vector<double> inv_m(n), w(n);
      for (int i = 0; i < n; ++i) {
        inv_m[i] = std::exp(-align(i));
        w[i] = std::exp(cf[i] * c + sf[i] * s);
      }
      static constexpr double kGrad[4] = {1.0, -27.0, 27.0, -1.0};
      static constexpr double kAvg[3] = {-1.0, 26.0, -1.0};
      st.first = -2;
      st.width = 6;
      st.coeffs.assign(6 * n, 0.0);
      for (int f = 0; f < n; ++f) {
        for (int d = -1; d <= 1; ++d) {
          const int face = ((f + d) % n + n) % n;
          const double scale = -kAvg[d + 1] / 24.0 * w[face] / (24.0 * h);
          for (int q = 0; q < 4; ++q) {
            const int node = f + d - 1 + q;  // relative slot node - (f - 2)
            const int wrapped = ((node % n) + n) % n;
            st.coeffs[6 * f + (node - (f - 2))] += scale * kGrad[q] * inv_m[wrapped];
          }
        }
      }
      break;
    }
  }
  return st;
}

std::vector<double> face_fluxes(const FluxStencil& st, std::span<const double> rho) {
  const int n = static_cast<int>(rho.size());
  std::vector<double> flux(n);
  for (int f = 0; f < n; ++f) {
    double v = 0.0;
    for (int k = 0; k < st.width; ++k) {
      const int j = ((f + st.first + k) % n + n) % n;
      v += st.coeffs[f * st.width + k] * rho[j];
    }
    flux[f] = v;
  }
  return flux;
}

CyclicBandedMatrix assemble_operator(const CircleGrid& grid, const FluxStencil& st) {
  const int n = grid.size();
  const double h = grid.spacing();
  const int bw = std::max(-st.first + 1, st.first + st.width - 1);
  CyclicBandedMatrix a(n, bw);
  for (int i = 0; i < n; ++i) {
    const int prev = (i - 1 + n) % n;
    for (int k = 0; k < st.width; ++k) {
      a.at(i, st.first + k) -= st.coeffs[i * st.width + k] / h;
      a.at(i, st.first + k - 1) += st.coeffs[prev * st.width + k] / h;
    }
  }
  return a;
}

namespace {

std::vector<double> divergence_update(const FluxStencil& st, std::span<const double> rho,
                                      double h) {
  const int n = static_cast<int>(rho.size());
  const std::vector<double> flux = face_fluxes(st, rho);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = -(flux[i] - flux[(i - 1 + n) % n]) / h;
  return out;
}

double explicit_bound(const CircleGrid& grid, const Direction& omega, FluxScheme scheme) {
  const double h = grid.spacing();
  if (scheme != FluxScheme::fourth_order) return h * h / (2.0 + h);
  const CyclicBandedMatrix a = assemble_operator(grid, flux_stencil(grid, omega, scheme));
  return 2.0 / a.max_abs_row_sum();
}

}  // namespace

SimulationState initial_state(const DensityField& rho0, double momentum_tol) {
  return SimulationState{0.0, rho0, mean_direction(rho0, momentum_tol), 0};
}

SimulationState step(const SimulationState& state, const SolverConfig& config) {
  const DensityField& rho = state.rho;
  const CircleGrid& grid = rho.grid();
  const int n = grid.size();
  const double h = grid.spacing();
  const double dt = config.dt;

  const Momentum j = momentum(rho);
  if (!(j.magnitude() > config.momentum_tol)) {
    throw VanishingMomentum(j.magnitude(), config.momentum_tol);
  }
  const Direction omega = Direction::from_vector(j.j);
  const FluxStencil st = flux_stencil(grid, omega, config.flux_scheme);
  const std::vector<double> arho = divergence_update(st, rho.values(), h);

  std::vector<double> next(n);
  if (config.stepping == Stepping::explicit_euler) {
    const double bound = explicit_bound(grid, omega, config.flux_scheme);
    if (dt > bound) {
      std::ostringstream os;
      os << "explicit step dt = " << dt << " exceeds stability bound " << bound;
      throw CflViolation(os.str());
    }
    for (int i = 0; i < n; ++i) next[i] = rho[i] + dt * arho[i];
  } else {
    CyclicBandedMatrix a = assemble_operator(grid, st);
    const double th = config.theta;
    for (int i = 0; i < n; ++i) {
      for (int k = -a.bandwidth(); k <= a.bandwidth(); ++k) a.at(i, k) *= -th * dt;
      a.at(i, 0) += 1.0;
    }
    std::vector<double> rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = rho[i] + (1.0 - th) * dt * arho[i];
    next = a.solve(rhs);
  }

  DensityField updated(rho.grid_ptr(), std::move(next));
  Direction new_omega = mean_direction(updated, config.momentum_tol);
  return SimulationState{state.t + dt, std::move(updated), new_omega, state.step_index + 1};
}

namespace {

[[noreturn]] void rethrow_with_time(double t) {
  const std::string where = "at t = " + std::to_string(t) + ": ";
  try {
    throw;
  } catch (const VanishingMomentum& e) {
    throw VanishingMomentum(e.magnitude(), 0.0, where);
  } catch (const CflViolation& e) {
    throw CflViolation(where + e.what());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(where + e.what());
  } catch (const Error& e) {
    throw Error(where + e.what());
  }
}

}  // namespace

Trajectory run(const DensityField& rho0, const SolverConfig& config) {
  config.validate();
  if (rho0.size() != config.n_cells) {
    throw InvalidArgument("run: initial field has " + std::to_string(rho0.size()) +
                          " cells, config expects " + std::to_string(config.n_cells));
  }

  const double dt = config.dt;
  long n_steps = static_cast<long>(std::ceil(config.t_end / dt - 1e-9));
  if (n_steps < 0) n_steps = 0;

  Trajectory traj;
  SimulationState state = initial_state(rho0, config.momentum_tol);
  auto record = [&](const SimulationState& s) {
    traj.records.push_back(make_record(s.t, s.rho, config.momentum_tol));
    traj.states.push_back(s);
  };
  record(state);

  SolverConfig cfg = config;
  for (long k = 1; k <= n_steps; ++k) {
    const double t_next = (k == n_steps) ? config.t_end : static_cast<double>(k) * dt;
    cfg.dt = t_next - state.t;
    try {
      state = step(state, cfg);
    } catch (const Error&) {
      rethrow_with_time(state.t);
    }
    state.t = t_next;
    if (k % config.record_every == 0 || k == n_steps) record(state);
  }
  return traj;
}

double max_stable_dt(const SolverConfig& config, const SimulationState& state) {
  if (config.stepping == Stepping::semi_implicit) return config.t_end;
  return explicit_bound(state.rho.grid(), state.omega, config.flux_scheme);
}

const char* to_string(FluxScheme scheme) {
  switch (scheme) {
    case FluxScheme::exponential_fitting:
      return "exponential_fitting";
    case FluxScheme::central:
      return "central";
    case FluxScheme::fourth_order:
      return "fourth_order";
  }
  return "?";
}

const char* to_string(Stepping stepping) {
  return stepping == Stepping::semi_implicit ? "semi_implicit" : "explicit";
}

}  // namespace kvlab
