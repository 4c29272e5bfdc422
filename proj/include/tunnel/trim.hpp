#pragma once

#include "tunnel/aircraft.hpp"

namespace tunnel {

struct TrimResult {
    AircraftState state;  // integrators set so the FLCS holds the trim surfaces
    ControlRequest request;
    SurfaceDeflections surfaces;
    double residual = 0.0;  // 2-norm of the non-position derivative components
};

inline constexpr double kTrimTolerance = 1e-4;

/// Norm of the derivative components that must vanish in steady flight
/// (everything except pn, pe, h and the integrators).
double trim_residual(const AircraftState& state, const SurfaceDeflections& surfaces);

/// Wings-level, constant-altitude trim at heading north, pn = pe = 0.
///
/// Solves for (alpha, elevator, throttle) with a bounded damped Newton
/// iteration from several starting points. Throws TrimError carrying the
/// best residual when no start converges below kTrimTolerance.
TrimResult trim_solve(double vt_target, double h_target);

}  // namespace tunnel
