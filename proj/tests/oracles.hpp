#pragma once

// Independent reference computations used only by the tests.

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "kvlab/fields.hpp"

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

// Modified Bessel function of the first kind by its power series.
inline double bessel_i(int nu, double x) {
  double term = std::pow(x / 2.0, nu);
  for (int k = 1; k <= nu; ++k) term /= k;
  double sum = term;
  for (int k = 1; k < 60; ++k) {
    term *= (x / 2.0) * (x / 2.0) / (k * static_cast<double>(k + nu));
    sum += term;
  }
  return sum;
}

inline double cm() { return 1.0 / (2.0 * kPi * bessel_i(0, 1.0)); }
inline double m() { return bessel_i(1, 1.0) / bessel_i(0, 1.0); }

template <class F>
double adaptive(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

template <class F>
double simpson(F f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Gaussian elimination with partial pivoting on a dense copy.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int r = k + 1; r < n; ++r) {
      if (std::abs(a[r][k]) > std::abs(a[p][k])) p = r;
    }
    std::swap(a[k], a[p]);
    std::swap(b[k], b[p]);
    for (int r = k + 1; r < n; ++r) {
      const double l = a[r][k] / a[k][k];
      for (int c = k; c < n; ++c) a[r][c] -= l * a[k][c];
      b[r] -= l * b[k];
    }
  }
  std::vector<double> x(n);
  for (int k = n - 1; k >= 0; --k) {
    double v = b[k];
    for (int c = k + 1; c < n; ++c) v -= a[k][c] * x[c];
    x[k] = v / a[k][k];
  }
  return x;
}

// Lifted quantile of the piecewise-constant density on cells
// [theta_i - h/2, theta_i + h/2): G(p) = G0(p - k) + 2 pi k for k = floor(p).
struct Quantile {
  std::vector<double> cum;
  double h;

  explicit Quantile(const kvlab::DensityField& rho)
      : cum(rho.size() + 1, 0.0), h(rho.grid().spacing()) {
    for (int i = 0; i < rho.size(); ++i) cum[i + 1] = cum[i] + rho[i] * h;
    for (double& c : cum) c /= cum.back();
  }

  double operator()(double p) const {
    const double k = std::floor(p);
    const double r = p - k;
    const int n = static_cast<int>(cum.size()) - 1;
    int i = 0;
    while (i < n - 1 && !(cum[i + 1] > r)) ++i;
    const double m = cum[i + 1] - cum[i];
    const double frac = m > 0.0 ? (r - cum[i]) / m : 0.0;
    return -0.5 * h + h * (i + frac) + 2.0 * kPi * k;
  }
};

// Cost of the cyclic monotone coupling q -> q + alpha. Both quantiles are
// linear between consecutive breakpoints, where 7-point Gauss is exact.
inline double cut_cost(const Quantile& qa, const Quantile& qb, double alpha) {
  std::vector<double> br(qa.cum.begin(), qa.cum.end());
  for (int k = -2; k <= 2; ++k) {
    for (double c : qb.cum) {
      const double q = c + k - alpha;
      if (q > 0.0 && q < 1.0) br.push_back(q);
    }
  }
  std::sort(br.begin(), br.end());
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < br.size(); ++s) {
    if (!(br[s + 1] > br[s])) continue;
    total += boost::math::quadrature::gauss<double, 7>::integrate(
        [&](double q) {
          const double d = qa(q) - qb(q + alpha);
          return d * d;
        },
        br[s], br[s + 1]);
  }
  return total;
}

// Brute-force W2: exhaustive search over a uniform grid of cut parameters in
// [-1, 1], repeated on successively finer grids around the best cut.
inline double brute_force_w2(const kvlab::DensityField& a, const kvlab::DensityField& b) {
  const Quantile qa(a);
  const Quantile qb(b);
  double center = 0.0;
  double radius = 1.0;
  double best = std::numeric_limits<double>::infinity();
  for (int level = 0; level < 4; ++level) {
    constexpr int kPoints = 400;
    double best_alpha = center;
    for (int k = -kPoints; k <= kPoints; ++k) {
      const double alpha = center + radius * k / kPoints;
      const double c = cut_cost(qa, qb, alpha);
      if (c < best) {
        best = c;
        best_alpha = alpha;
      }
    }
    center = best_alpha;
    radius *= 4.0 / kPoints;
  }
  return std::sqrt(std::max(best, 0.0));
}

}  // namespace oracle
