// Nonlinear F-16-class rigid-body model: 12 flat-earth 6-DOF equations plus
// a first-order engine lag (13 dynamic states).
//
// Aerodynamics are global polynomial fits in (alpha, beta, surface
// deflections, non-dimensional rates), restricted to the terms that are
// mirror-symmetric in the lateral-directional axes. Engine thrust is a
// smooth quadratic in power scaled by a density lapse. Valid for the
// subsonic envelope (Mach < 0.6, alpha in [-10, 45] deg).
#pragma once

#include "tunnel/aircraft.hpp"

namespace tunnel::f16 {

/// Mass and geometry of the airframe.
struct Airframe {
    double weight = 20500.0;  // lb
    double wing_area = 300.0;  // ft^2
    double span = 30.0;        // ft (aerodynamic reference)
    double chord = 11.32;      // ft
    double jx = 9496.0;        // slug ft^2
    double jy = 55814.0;
    double jz = 63100.0;
    double jxz = 982.0;
    double pilot_station = 15.0;  // ft ahead of the cg, where nz/ny are sensed

    double mass() const { return weight / kGravity; }
};

inline constexpr Airframe kAirframe{};

/// Engine power rate constant, 1/s: pow_dot = rate * (commanded - pow).
inline constexpr double kEngineRate = 1.0;

struct AirData {
    double density;  // slug/ft^3
    double mach;
    double qbar;  // lb/ft^2
};

AirData air_data(double vt, double altitude);

/// Sea-level static thrust (lb) at the given power percentage.
double sea_level_thrust(double power);

/// Installed thrust (lb) at altitude.
double thrust(double power, double altitude);

/// Commanded engine power (percent) for a throttle fraction.
double commanded_power(double throttle);

/// Body-axis force and moment coefficients.
struct AeroCoefficients {
    double cx, cy, cz;  // forces
    double cl, cm, cn;  // roll, pitch, yaw moments
};

AeroCoefficients aero_coefficients(const AircraftState& state, const SurfaceDeflections& surfaces);

/// Everything the model produces in one evaluation.
struct ModelOutput {
    StateDerivative xdot{};
    double nz = 0.0;    // normal load factor minus one at the pilot station, g
    double ny = 0.0;    // lateral acceleration, g
    double ps = 0.0;    // stability-axis roll rate, rad/s
    double ny_r = 0.0;  // ny + r
    AirData air{};
};

/// Full evaluation. Integrator components of `xdot` are zero: the FLCS
/// advances them discretely.
///
/// Throws NonFiniteInput naming the first non-finite field.
ModelOutput evaluate(const AircraftState& state, const SurfaceDeflections& surfaces);

/// Time derivative of all 16 state components.
StateDerivative derivatives(const AircraftState& state, const SurfaceDeflections& surfaces);

}  // namespace tunnel::f16
