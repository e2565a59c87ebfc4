#pragma once

#include <cstddef>
#include <vector>

#include "wigflow/grid.hpp"

namespace wigflow {

enum class Axis { X, P };

/// FFT-based derivative of the given order along one axis.
///
/// The field is treated as compactly supported; a warning is emitted when the edge
/// amplitude along the axis exceeds 1e-8 of the field maximum. Rejects order > n/2.
/// order == 0 returns the input unchanged.
ScalarField spectral_derivative(const ScalarField& f, Axis axis, std::size_t order);

/// Same operator for a single sampled line with spacing h.
std::vector<double> spectral_derivative_1d(const std::vector<double>& f, double h,
                                           std::size_t order);

}  // namespace wigflow
