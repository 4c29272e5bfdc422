// Inner-loop flight control system: maps pilot-level requests to surface
// deflections with state feedback, command feedforward and integral action
// on the (nz, ps, ny_r) tracking errors.
//
// The integrators carry the trim offset, so a trimmed AircraftState (see
// trim.hpp) together with its trim request reproduces the trim deflections.
#pragma once

#include "tunnel/aircraft.hpp"

#include <array>

namespace tunnel::flcs {

// Gains were designed by LQR on the 500 ft/s, 1000 ft trim point with the
// integrators as augmented states. Units: deg per rad, deg per rad/s, deg
// per integrated g or rad/s.
struct Gains {
    // elevator = -(alpha, q, i_nz) . longitudinal + nz_feedforward * nz_cmd
    std::array<double, 3> longitudinal{-102.0, -24.85, -10.0};
    double nz_feedforward = -5.634;
    // [aileron, rudder] = -K (beta, p, r, i_ps, i_ny) + F (ps_cmd, ny_r_cmd)
    std::array<double, 5> aileron{43.11, -15.27, -6.12, -138.9, -10.25};
    std::array<double, 5> rudder{-23.29, 3.38, -15.15, 26.47, -53.80};
    std::array<double, 2> aileron_feedforward{-19.58, -14.06};
    std::array<double, 2> rudder_feedforward{6.85, -80.13};
};

inline constexpr Gains kGains{};

struct Output {
    SurfaceDeflections surfaces;
    double i_nz = 0.0;
    double i_ps = 0.0;
    double i_ny = 0.0;
    bool elevator_saturated = false;
    bool aileron_saturated = false;
    bool rudder_saturated = false;
};

/// Static control law: surfaces from the current state and (clamped)
/// request using the state's integrator values. No integration.
SurfaceDeflections control_law(const AircraftState& state, const ControlRequest& request);

/// One FLCS sample of length dt: evaluates the control law, then advances
/// the integrators by the tracking errors times dt. An integrator is held
/// while its surface sits on a limit.
Output flcs(const AircraftState& state, const ControlRequest& request, double dt);

/// Integrator values that make `control_law` return `surfaces` at `state`
/// (with zero sideslip and body rates) for the given request.
std::array<double, 3> integrators_for(const AircraftState& state, const ControlRequest& request,
                                      const SurfaceDeflections& surfaces);

}  // namespace tunnel::flcs
