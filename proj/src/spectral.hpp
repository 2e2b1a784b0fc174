#pragma once

#include <span>

namespace kvlab::detail {

// Derivative of order 1 or 2 of a 2pi-periodic sample vector (integer wavenumbers).
void spectral_derivative(std::span<const double> in, int order, std::span<double> out);

}  // namespace kvlab::detail
