// Aircraft state, pilot-level requests and control-surface types shared by
// the dynamics, the flight control system and the environments.
//
// Units: feet, feet/second, radians, seconds; accelerations in g.
// Body axes: x out the nose, y out the right wing, z down.
#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <string_view>

namespace tunnel {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kRadToDeg = 180.0 / kPi;
inline constexpr double kGravity = 32.17;  // ft/s^2

inline constexpr std::size_t kStateSize = 16;
inline constexpr std::size_t kDynamicStateSize = 13;

/// 13 rigid-body/engine states followed by the 3 FLCS integrators.
struct AircraftState {
    double vt = 0.0;     // true airspeed, ft/s
    double alpha = 0.0;  // angle of attack, rad
    double beta = 0.0;   // sideslip, rad
    double phi = 0.0;    // roll, rad
    double theta = 0.0;  // pitch, rad
    double psi = 0.0;    // yaw (heading), rad
    double p = 0.0;      // body roll rate, rad/s
    double q = 0.0;      // body pitch rate, rad/s
    double r = 0.0;      // body yaw rate, rad/s
    double pn = 0.0;     // north, ft
    double pe = 0.0;     // east, ft
    double h = 0.0;      // altitude, ft
    double pow = 0.0;    // engine power, percent
    double i_nz = 0.0;   // integral of (nz - nz_cmd)
    double i_ps = 0.0;   // integral of (ps - ps_cmd)
    double i_ny = 0.0;   // integral of (ny_r - ny_r_cmd)

    std::array<double, kStateSize> to_array() const {
        return {vt, alpha, beta, phi, theta, psi, p, q, r, pn, pe, h, pow, i_nz, i_ps, i_ny};
    }

    static AircraftState from_array(const std::array<double, kStateSize>& a) {
        return {a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7],
                a[8], a[9], a[10], a[11], a[12], a[13], a[14], a[15]};
    }

    bool operator==(const AircraftState&) const = default;
};

/// Field names in `to_array()` order.
inline constexpr std::array<std::string_view, kStateSize> kStateFieldNames = {
    "vt", "alpha", "beta", "phi", "theta", "psi", "p", "q",
    "r", "pn", "pe", "h", "pow", "i_nz", "i_ps", "i_ny"};

/// Time derivative of every AircraftState component, same layout.
using StateDerivative = std::array<double, kStateSize>;

/// Pilot-level request consumed by the FLCS.
///
/// nz_cmd is the normal load factor minus one (0 in level 1 g flight),
/// ps_cmd the stability-axis roll rate and ny_r_cmd the blend of lateral
/// acceleration (g) and yaw rate (rad/s).
struct ControlRequest {
    double nz_cmd = 0.0;
    double ps_cmd = 0.0;
    double ny_r_cmd = 0.0;
    double throttle = 0.0;

    bool operator==(const ControlRequest&) const = default;
};

struct RequestLimits {
    double nz_min = -2.0;
    double nz_max = 6.0;
    double ps_max = kPi;
    double ny_r_max = 2.0;
};

inline constexpr RequestLimits kRequestLimits{};

/// Deflections in degrees; positive elevator is trailing edge down (nose
/// down), positive aileron rolls left and positive rudder yaws left.
struct SurfaceDeflections {
    double elevator = 0.0;
    double aileron = 0.0;
    double rudder = 0.0;
    double throttle = 0.0;

    bool operator==(const SurfaceDeflections&) const = default;
};

inline constexpr double kElevatorLimitDeg = 25.0;
inline constexpr double kAileronLimitDeg = 21.5;
inline constexpr double kRudderLimitDeg = 30.0;

/// Clamp each request channel to kRequestLimits and throttle to [0, 1].
ControlRequest clamp_request(const ControlRequest& request);

}  // namespace tunnel
