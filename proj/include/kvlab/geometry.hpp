#pragma once

#include <memory>
#include <span>
#include <vector>

namespace kvlab {

/// Uniform cell-centered grid on the circle, theta_i = i * 2pi / n.
class CircleGrid {
 public:
  explicit CircleGrid(int n_cells);

  int size() const { return n_; }
  double spacing() const { return h_; }
  double node(int i) const { return nodes_[i]; }

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> cos_nodes() const { return cos_; }
  std::span<const double> sin_nodes() const { return sin_; }
  // cos/sin at the faces theta_i + h/2
  std::span<const double> cos_faces() const { return cos_face_; }
  std::span<const double> sin_faces() const { return sin_face_; }

  bool operator==(const CircleGrid& other) const { return n_ == other.n_; }

 private:
  int n_;
  double h_;
  std::vector<double> nodes_, cos_, sin_, cos_face_, sin_face_;
};

using GridPtr = std::shared_ptr<const CircleGrid>;

/// Throws InvalidArgument unless n_cells >= 16 and even.
GridPtr build_grid(int n_cells);

/// Midpoint rule, h * sum(values). Compensated summation.
double quadrature(const CircleGrid& grid, std::span<const double> values);

enum class DiffBackend { spectral, stencil };

/// Periodic derivative of order 1 or 2.
/// spectral: exact for trigonometric polynomials of degree < n/2; the Nyquist
/// mode is dropped for order 1.
/// stencil: 4th-order central difference.
std::vector<double> deriv(const CircleGrid& grid, std::span<const double> values, int order,
                          DiffBackend backend = DiffBackend::spectral);

/// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values);

}  // namespace kvlab
