#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "kvlab/banded.hpp"
#include "kvlab/error.hpp"
#include "oracles.hpp"

using namespace kvlab;

namespace {

CyclicBandedMatrix random_matrix(int n, int b, std::mt19937_64& rng, double diag_boost) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CyclicBandedMatrix a(n, b);
  for (int i = 0; i < n; ++i) {
    for (int k = -b; k <= b; ++k) a.at(i, k) = u(rng);
    a.at(i, 0) += diag_boost;
  }
  return a;
}

std::vector<std::vector<double>> to_dense(const CyclicBandedMatrix& a) {
  const int n = a.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int k = -a.bandwidth(); k <= a.bandwidth(); ++k) d[i][((i + k) % n + n) % n] += a.at(i, k);
  }
  return d;
}

}  // namespace

TEST_CASE("cyclic banded solve agrees with dense elimination") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int b : {1, 2, 3}) {
    for (int n : {16, 37, 128}) {
      for (double boost : {2.0 * b + 1.5, 1.5 * b + 1.0}) {
        const auto a = random_matrix(n, b, rng, boost);
        std::vector<double> rhs(n);
        for (double& x : rhs) x = u(rng);
        const auto x = a.solve(rhs);
        const auto ref = oracle::dense_solve(to_dense(a), rhs);
        double scale = 0.0;
        for (double r : ref) scale = std::max(scale, std::abs(r));
        for (int i = 0; i < n; ++i) CHECK(std::abs(x[i] - ref[i]) <= 1e-10 * std::max(1.0, scale));
      }
    }
  }
}

TEST_CASE("multiply matches dense product and inverts solve") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto a = random_matrix(40, 2, rng, 6.0);
  const auto d = to_dense(a);
  std::vector<double> x(40);
  for (double& v : x) v = u(rng);
  const auto ax = a.multiply(x);
  for (int i = 0; i < 40; ++i) {
    double s = 0.0;
    for (int j = 0; j < 40; ++j) s += d[i][j] * x[j];
    CHECK(std::abs(ax[i] - s) <= 1e-13);
  }
  const auto back = a.solve(ax);
  for (int i = 0; i < 40; ++i) CHECK(std::abs(back[i] - x[i]) <= 1e-12);
}

TEST_CASE("max_abs_row_sum") {
  CyclicBandedMatrix a(16, 1);
  for (int i = 0; i < 16; ++i) {
    a.at(i, -1) = 1.0;
    a.at(i, 0) = -2.0;
    a.at(i, 1) = 1.0;
  }
  a.at(5, 1) = -3.0;
  CHECK(a.max_abs_row_sum() == 6.0);
}

TEST_CASE("constructor and size checks") {
  CHECK_THROWS_AS(CyclicBandedMatrix(4, 2), InvalidArgument);
  CyclicBandedMatrix a(16, 1);
  for (int i = 0; i < 16; ++i) a.at(i, 0) = 1.0;
  CHECK_THROWS_AS(a.solve(std::vector<double>(15, 0.0)), InvalidArgument);
}
