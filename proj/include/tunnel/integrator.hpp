#pragma once

#include "tunnel/aircraft.hpp"

namespace tunnel {

/// One classical RK4 step of the 13 dynamic states with the surfaces held
/// constant. Integrator components are copied through unchanged.
AircraftState rk4_hold(const AircraftState& state, const SurfaceDeflections& surfaces, double h);

/// Open-loop integration over `steps` RK4 steps of size duration/steps.
AircraftState integrate_open_loop(const AircraftState& state, const SurfaceDeflections& surfaces,
                                  double duration, int steps);

/// Closed-loop step: `substeps` RK4 substeps of dt/substeps, each with the
/// FLCS sampled once at the start of the substep (zero-order hold).
///
/// Throws DynamicsDiverged naming the substep when any component turns
/// non-finite.
AircraftState step_rk4(const AircraftState& state, const ControlRequest& request, double dt, int substeps);

}  // namespace tunnel
