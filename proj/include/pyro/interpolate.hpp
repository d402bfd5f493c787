#pragma once

#include "pyro/grid.hpp"

namespace pyro {

/// Linear interpolation at physical coordinate x on a cell-centered 1D field,
/// constant (edge-value) extrapolation outside the outermost cell centers.
double sample_linear(const Field& f, const Grid& g, double x);

/// Bilinear interpolation at (x, y), constant extrapolation outside.
double sample_bilinear(const Field& f, const Grid& g, double x, double y);

/// Resample a field from grid src onto grid dst (same physical domain assumed).
Field resample(const Field& f, const Grid& src, const Grid& dst);

}  // namespace pyro
