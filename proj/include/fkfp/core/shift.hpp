#pragma once

#include "fkfp/core/field.hpp"

namespace fkfp {

enum class AxisKind { X, V };

// axis index for (kind, component); component < d
int axis_of(const TorusGrid& g, AxisKind k, int component);

// spectral translation f(.) -> f(. - a) along one axis (exact on the torus)
void shift_axis(SpectralField& f, int axis, double a);

// delta_a f = f - f(. - a), multiplier (1 - e^{-i k a})
SpectralField finite_difference_spectral(const SpectralField& f, int axis, double a);

// delta by whole cells via array roll (exact; no transforms)
PhaseField roll_difference(const PhaseField& f, int axis, int cells);

// delta_a along (kind, component). On-lattice shifts (a an integer number of
// cells to 1 ulp) take the exact roll path, everything else the spectral one.
PhaseField finite_difference(const PhaseField& f, AxisKind kind, int component, double a);

// multiply a mixed-domain array (x axes spectral, v axes physical) by the
// characteristic phase e^{-i t (xi . v)}; composes the exact shift
// u(x,v) -> u(x - t v, v) when followed by the x-axis inverse transform
void characteristic_phase(std::vector<cplx>& mixed, const TorusGrid& g, double t);

}  // namespace fkfp
