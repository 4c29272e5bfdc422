#include "tunnel/flcs.hpp"

#include "tunnel/error.hpp"
#include "tunnel/f16_model.hpp"

#include <algorithm>
#include <cmath>

namespace tunnel::flcs {

namespace {

struct Unsaturated {
    double elevator;
    double aileron;
    double rudder;
};

Unsaturated raw_law(const AircraftState& s, const ControlRequest& req) {
    const auto& k = kGains;
    const double elevator = -(k.longitudinal[0] * s.alpha + k.longitudinal[1] * s.q + k.longitudinal[2] * s.i_nz) +
                            k.nz_feedforward * req.nz_cmd;
    const std::array<double, 5> lat{s.beta, s.p, s.r, s.i_ps, s.i_ny};
    double aileron = k.aileron_feedforward[0] * req.ps_cmd + k.aileron_feedforward[1] * req.ny_r_cmd;
    double rudder = k.rudder_feedforward[0] * req.ps_cmd + k.rudder_feedforward[1] * req.ny_r_cmd;
    for (std::size_t i = 0; i < lat.size(); ++i) {
        aileron -= k.aileron[i] * lat[i];
        rudder -= k.rudder[i] * lat[i];
    }
    return {elevator, aileron, rudder};
}

}  // namespace

SurfaceDeflections control_law(const AircraftState& state, const ControlRequest& request) {
    const auto req = clamp_request(request);
    const auto raw = raw_law(state, req);
    return {std::clamp(raw.elevator, -kElevatorLimitDeg, kElevatorLimitDeg),
            std::clamp(raw.aileron, -kAileronLimitDeg, kAileronLimitDeg),
            std::clamp(raw.rudder, -kRudderLimitDeg, kRudderLimitDeg), req.throttle};
}

Output flcs(const AircraftState& state, const ControlRequest& request, double dt) {
    if (!(dt > 0.0)) throw UsageError("flcs: dt must be positive");
    for (double v : {request.nz_cmd, request.ps_cmd, request.ny_r_cmd, request.throttle}) {
        if (!std::isfinite(v)) throw NonFiniteInput("request");
    }
    const auto req = clamp_request(request);
    const auto raw = raw_law(state, req);

    Output out;
    out.surfaces = {std::clamp(raw.elevator, -kElevatorLimitDeg, kElevatorLimitDeg),
                    std::clamp(raw.aileron, -kAileronLimitDeg, kAileronLimitDeg),
                    std::clamp(raw.rudder, -kRudderLimitDeg, kRudderLimitDeg), req.throttle};
    out.elevator_saturated = std::abs(raw.elevator) >= kElevatorLimitDeg;
    out.aileron_saturated = std::abs(raw.aileron) >= kAileronLimitDeg;
    out.rudder_saturated = std::abs(raw.rudder) >= kRudderLimitDeg;

    const auto model = f16::evaluate(state, out.surfaces);
    out.i_nz = state.i_nz + (out.elevator_saturated ? 0.0 : (model.nz - req.nz_cmd) * dt);
    out.i_ps = state.i_ps + (out.aileron_saturated ? 0.0 : (model.ps - req.ps_cmd) * dt);
    out.i_ny = state.i_ny + (out.rudder_saturated ? 0.0 : (model.ny_r - req.ny_r_cmd) * dt);
    return out;
}

std::array<double, 3> integrators_for(const AircraftState& s, const ControlRequest& request,
                                      const SurfaceDeflections& surfaces) {
    const auto& k = kGains;
    const auto req = clamp_request(request);
    // elevator = -(ka alpha + kq q + ki i_nz) + ff nz_cmd, solved for i_nz.
    const double i_nz =
        (-surfaces.elevator - k.longitudinal[0] * s.alpha - k.longitudinal[1] * s.q + k.nz_feedforward * req.nz_cmd) /
        k.longitudinal[2];

    // Lateral: solve the 2x2 system in (i_ps, i_ny).
    const double ail_rest = k.aileron_feedforward[0] * req.ps_cmd + k.aileron_feedforward[1] * req.ny_r_cmd -
                            k.aileron[0] * s.beta - k.aileron[1] * s.p - k.aileron[2] * s.r - surfaces.aileron;
    const double rud_rest = k.rudder_feedforward[0] * req.ps_cmd + k.rudder_feedforward[1] * req.ny_r_cmd -
                            k.rudder[0] * s.beta - k.rudder[1] * s.p - k.rudder[2] * s.r - surfaces.rudder;
    // k.aileron[3] i_ps + k.aileron[4] i_ny = ail_rest, same for rudder.
    const double det = k.aileron[3] * k.rudder[4] - k.aileron[4] * k.rudder[3];
    const double i_ps = (ail_rest * k.rudder[4] - k.aileron[4] * rud_rest) / det;
    const double i_ny = (k.aileron[3] * rud_rest - ail_rest * k.rudder[3]) / det;
    return {i_nz + 0.0, i_ps + 0.0, i_ny + 0.0};
}

}  // namespace tunnel::flcs
