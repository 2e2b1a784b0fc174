#include "kvlab/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "kvlab/error.hpp"
#include "spectral.hpp"

namespace kvlab {

CircleGrid::CircleGrid(int n_cells) : n_(n_cells) {
  if (n_cells < 16 || n_cells % 2 != 0) {
    throw InvalidArgument("n_cells must be even and >= 16, got " + std::to_string(n_cells));
  }
  h_ = 2.0 * std::numbers::pi / n_;
  nodes_.resize(n_);
  cos_.resize(n_);
  sin_.resize(n_);
  cos_face_.resize(n_);
  sin_face_.resize(n_);
  for (int i = 0; i < n_; ++i) nodes_[i] = i * h_;

  // Tables are filled on the upper half and mirrored, so reflection about
  // theta = 0 is exact in floating point.
  for (int i = 0; i <= n_ / 2; ++i) {
    cos_[i] = std::cos(nodes_[i]);
    sin_[i] = std::sin(nodes_[i]);
  }
  sin_[0] = 0.0;
  sin_[n_ / 2] = 0.0;
  for (int i = n_ / 2 + 1; i < n_; ++i) {
    cos_[i] = cos_[n_ - i];
    sin_[i] = -sin_[n_ - i];
  }
  // face i sits at (i + 1/2) h; its mirror image is face n - 1 - i
  for (int i = 0; i < n_ / 2; ++i) {
    const double x = (i + 0.5) * h_;
    cos_face_[i] = std::cos(x);
    sin_face_[i] = std::sin(x);
    cos_face_[n_ - 1 - i] = cos_face_[i];
    sin_face_[n_ - 1 - i] = -sin_face_[i];
  }
}

GridPtr build_grid(int n_cells) { return std::make_shared<const CircleGrid>(n_cells); }

double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double c = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      c += (sum - t) + v;
    } else {
      c += (v - t) + sum;
    }
    sum = t;
  }
  return sum + c;
}

double quadrature(const CircleGrid& grid, std::span<const double> values) {
  if (static_cast<int>(values.size()) != grid.size()) {
    throw InvalidArgument("quadrature: value count does not match grid");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("quadrature: non-finite value");
  }
  return grid.spacing() * compensated_sum(values);
}

std::vector<double> deriv(const CircleGrid& grid, std::span<const double> values, int order,
                          DiffBackend backend) {
  const int n = grid.size();
  if (static_cast<int>(values.size()) != n) {
    throw InvalidArgument("deriv: value count does not match grid");
  }
  if (order != 1 && order != 2) throw InvalidArgument("deriv: order must be 1 or 2");
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("deriv: non-finite value");
  }

  std::vector<double> out(n);
  if (backend == DiffBackend::spectral) {
    detail::spectral_derivative(values, order, out);
    return out;
  }

  const double h = grid.spacing();
  auto at = [&](int i) { return values[(i % n + n) % n]; };
  for (int i = 0; i < n; ++i) {
    if (order == 1) {
      out[i] = (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) / (12.0 * h);
    } else {
      out[i] = (-at(i - 2) + 16.0 * at(i - 1) - 30.0 * at(i) + 16.0 * at(i + 1) - at(i + 2)) /
               (12.0 * h * h);
    }
  }
  return out;
}

}  // namespace kvlab
