#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "approx.hpp"
#include "kvlab/diagnostics.hpp"
#include "kvlab/equilibrium.hpp"
#include "kvlab/error.hpp"
#include "oracles.hpp"

using namespace kvlab;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("normalizer C_M") {
  const double quad =
      1.0 / oracle::adaptive([](double t) { return std::exp(std::cos(t)); }, 0.0, 2 * kPi);
  CHECK(normalizer_cm() == rel(quad).epsilon(1e-11));
  CHECK(normalizer_cm() == rel(0.125708).epsilon(5e-7 / 0.125708));
  CHECK(std::abs(compute_normalizer_cm(Direction::from_angle(kPi / 2)) - normalizer_cm()) <= 1e-13);
  CHECK(std::abs(2 * kPi * normalizer_cm() * oracle::bessel_i(0, 1.0) - 1.0) <= 1e-10);
}

TEST_CASE("equilibrium momentum m") {
  const double cm = oracle::cm();
  const double quad = oracle::adaptive(
      [&](double t) { return std::cos(t) * cm * std::exp(std::cos(t)); }, 0.0, 2 * kPi);
  CHECK(equilibrium_momentum_m() == rel(quad).epsilon(1e-11));
  CHECK(equilibrium_momentum_m() == rel(oracle::m()).epsilon(1e-11));
  CHECK(equilibrium_momentum_m() == rel(0.446390).epsilon(1e-6));
  const auto g = build_grid(4096);
  const auto fvm = fisher_von_mises(g, Direction::from_angle(1.1));
  CHECK(std::abs(momentum(fvm).magnitude() - equilibrium_momentum_m()) <= 1e-10);
  CHECK(equilibrium_momentum_m() > 0.0);
  CHECK(equilibrium_momentum_m() < 1.0);
}

TEST_CASE("momentum examples") {
  const auto g = build_grid(256);
  CHECK(momentum(make_uniform(g)).magnitude() <= 1e-14);
  const auto j = momentum(fisher_von_mises(g, Direction::from_angle(0.0)));
  CHECK(j.j.x == rel(oracle::m()).epsilon(1e-12));
  CHECK(std::abs(j.j.y) <= 1e-14);

  // Rotation by a whole number of cells is an exact relabelling of the nodes.
  std::mt19937_64 rng(5);
  const auto rho = make_perturbed_equilibrium(g, Direction::from_angle(0.4), 0.3, 3, 17);
  for (int shift : {1, 17, 100}) {
    std::vector<double> rot(256);
    for (int i = 0; i < 256; ++i) rot[(i + shift) % 256] = rho[i];
    const double a = shift * g->spacing();
    const auto jr = momentum(DensityField(g, rot)).j;
    const auto j0 = momentum(rho).j;
    CHECK(std::abs(jr.x - (std::cos(a) * j0.x - std::sin(a) * j0.y)) <= 1e-12);
    CHECK(std::abs(jr.y - (std::sin(a) * j0.x + std::cos(a) * j0.y)) <= 1e-12);
  }
}

TEST_CASE("momentum magnitude never exceeds one") {
  const auto g = build_grid(64);
  std::vector<double> spike(64, 0.0);
  spike[5] = 1.0 / g->spacing();
  CHECK(momentum(DensityField(g, spike)).magnitude() <= 1.0 + 1e-15);
}

TEST_CASE("mean_direction") {
  const auto g = build_grid(256);
  const auto up = mean_direction(fisher_von_mises(g, Direction::from_vector({0.0, 1.0})));
  CHECK(std::abs(up.x()) <= 1e-12);
  CHECK(std::abs(up.y() - 1.0) <= 1e-12);
  CHECK_THROWS_AS(mean_direction(make_uniform(g)), VanishingMomentum);

  const auto m = fisher_von_mises(g, Direction::from_angle(0.0));
  const auto u = make_uniform(g);
  std::vector<double> mix(256);
  for (int i = 0; i < 256; ++i) mix[i] = 0.9 * m[i] + 0.1 * u[i];
  const auto d = mean_direction(DensityField(g, mix));
  CHECK(std::abs(d.x() - 1.0) <= 1e-12);
  CHECK(std::abs(d.y()) <= 1e-12);
}

TEST_CASE("VanishingMomentum carries the magnitude") {
  const auto g = build_grid(32);
  try {
    mean_direction(make_uniform(g), 1e-6);
    FAIL("expected VanishingMomentum");
  } catch (const VanishingMomentum& e) {
    CHECK(e.magnitude() <= 1e-6);
  }
}

TEST_CASE("fisher_von_mises") {
  const auto g = build_grid(256);
  const auto m = fisher_von_mises(g, Direction::from_angle(0.0));
  CHECK(m[128] == rel(oracle::cm() * std::exp(-1.0)).epsilon(1e-12));
  CHECK(m[128] == rel(0.046245).epsilon(5e-7 / 0.046245));
  CHECK(std::abs(relative_entropy(m, m)) <= 1e-13);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
  for (int k = 0; k < 100; ++k) {
    const auto f = fisher_von_mises(g, Direction::from_angle(ang(rng)));
    CHECK(std::abs(f.mass() - 1.0) <= 1e-12);
    const auto again = fisher_von_mises(g, mean_direction(f));
    for (int i = 0; i < 256; ++i) REQUIRE(std::abs(again[i] - f[i]) <= 1e-12);
  }
}

TEST_CASE("free energy is minimised by the equilibrium in the test family") {
  const auto g = build_grid(512);
  const auto dir = Direction::from_angle(0.7);
  const double em = free_energy(fisher_von_mises(g, dir));
  CHECK(em < free_energy(make_uniform(g)));
  for (double eps : {0.05, 0.1, 0.3, -0.2}) {
    for (int mode : {1, 2, 5}) {
      CHECK(em < free_energy(make_perturbed_equilibrium(g, dir, eps, mode, 0)));
    }
  }
}
