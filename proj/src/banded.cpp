#include "kvlab/banded.hpp"

#include <algorithm>
#include <cmath>

#include "kvlab/error.hpp"

namespace kvlab {

CyclicBandedMatrix::CyclicBandedMatrix(int n, int bandwidth) : n_(n), b_(bandwidth) {
  if (bandwidth < 1 || n < 2 * bandwidth + 2) {
    throw InvalidArgument("CyclicBandedMatrix: n too small for bandwidth");
  }
  data_.assign(static_cast<std::size_t>(n) * width(), 0.0);
}

std::vector<double> CyclicBandedMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    for (int k = -b_; k <= b_; ++k) s += at(i, k) * x[((i + k) % n_ + n_) % n_];
    y[i] = s;
  }
  return y;
}

double CyclicBandedMatrix::max_abs_row_sum() const {
  double best = 0.0;
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    for (int k = -b_; k <= b_; ++k) s += std::abs(at(i, k));
    best = std::max(best, s);
  }
  return best;
}

std::vector<double> CyclicBandedMatrix::solve(std::span<const double> rhs) const {
  if (static_cast<int>(rhs.size()) != n_) throw InvalidArgument("solve: rhs size mismatch");
  const int b = b_;
  const int w = width();
  const int m = n_ - b;

  // A11 in band storage, A12 (m x b), A21 (b x m), A22 (b x b)
  std::vector<double> a11(static_cast<std::size_t>(m) * w, 0.0);
  std::vector<double> a12(static_cast<std::size_t>(m) * b, 0.0);
  std::vector<double> a21(static_cast<std::size_t>(b) * m, 0.0);
  std::vector<double> a22(static_cast<std::size_t>(b) * b, 0.0);
  for (int i = 0; i < n_; ++i) {
    for (int k = -b; k <= b; ++k) {
      const int j = ((i + k) % n_ + n_) % n_;
      const double v = at(i, k);
      if (i < m && j < m) {
        a11[i * w + (j - i) + b] = v;
      } else if (i < m) {
        a12[i * b + (j - m)] += v;
      } else if (j < m) {
        a21[(i - m) * m + j] += v;
      } else {
        a22[(i - m) * b + (j - m)] += v;
      }
    }
  }

  auto band = [&](int i, int j) -> double& { return a11[i * w + (j - i) + b]; };

  for (int k = 0; k < m; ++k) {
    const double pivot = band(k, k);
    if (pivot == 0.0 || !std::isfinite(pivot)) throw Error("solve: zero pivot in banded block");
    const int last = std::min(k + b, m - 1);
    for (int i = k + 1; i <= last; ++i) {
      const double l = band(i, k) / pivot;
      band(i, k) = l;
      for (int j = k + 1; j <= last; ++j) band(i, j) -= l * band(k, j);
    }
  }

  auto lu_solve = [&](std::vector<double>& x, int stride, int col) {
    for (int i = 0; i < m; ++i) {
      double s = x[i * stride + col];
      for (int j = std::max(0, i - b); j < i; ++j) s -= band(i, j) * x[j * stride + col];
      x[i * stride + col] = s;
    }
    for (int i = m - 1; i >= 0; --i) {
      double s = x[i * stride + col];
      const int last = std::min(i + b, m - 1);
      for (int j = i + 1; j <= last; ++j) s -= band(i, j) * x[j * stride + col];
      x[i * stride + col] = s / band(i, i);
    }
  };

  std::vector<double> y(rhs.begin(), rhs.begin() + m);
  lu_solve(y, 1, 0);
  std::vector<double> x12 = a12;
  for (int c = 0; c < b; ++c) lu_solve(x12, b, c);

  // Schur complement S = A22 - A21 X12 and z = r2 - A21 y
  std::vector<double> s = a22;
  std::vector<double> z(rhs.begin() + m, rhs.end());
  for (int r = 0; r < b; ++r) {
    for (int j = 0; j < m; ++j) {
      const double a = a21[r * m + j];
      if (a == 0.0) continue;
      z[r] -= a * y[j];
      for (int c = 0; c < b; ++c) s[r * b + c] -= a * x12[j * b + c];
    }
  }

  for (int k = 0; k < b; ++k) {
    int p = k;
    for (int r = k + 1; r < b; ++r) {
      if (std::abs(s[r * b + k]) > std::abs(s[p * b + k])) p = r;
    }
    if (s[p * b + k] == 0.0) throw Error("solve: singular Schur complement");
    if (p != k) {
      for (int c = 0; c < b; ++c) std::swap(s[k * b + c], s[p * b + c]);
      std::swap(z[k], z[p]);
    }
    for (int r = k + 1; r < b; ++r) {
      const double l = s[r * b + k] / s[k * b + k];
      for (int c = k; c < b; ++c) s[r * b + c] -= l * s[k * b + c];
      z[r] -= l * z[k];
    }
  }
  std::vector<double> x2(b);
  for (int k = b - 1; k >= 0; --k) {
    double v = z[k];
    for (int c = k + 1; c < b; ++c) v -= s[k * b + c] * x2[c];
    x2[k] = v / s[k * b + k];
  }

  std::vector<double> x(n_);
  for (int i = 0; i < m; ++i) {
    double v = y[i];
    for (int c = 0; c < b; ++c) v -= x12[i * b + c] * x2[c];
    x[i] = v;
  }
  for (int c = 0; c < b; ++c) x[m + c] = x2[c];
  return x;
}

}  // namespace kvlab
