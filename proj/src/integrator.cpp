#include "tunnel/integrator.hpp"

#include "tunnel/error.hpp"
#include "tunnel/f16_model.hpp"
#include "tunnel/flcs.hpp"

#include <cmath>

namespace tunnel {

namespace {

using Vec = std::array<double, kStateSize>;

Vec axpy(const Vec& x, const Vec& k, double a) {
    Vec out = x;
    for (std::size_t i = 0; i < kDynamicStateSize; ++i) out[i] = x[i] + a * k[i];
    return out;
}

void check_finite(const AircraftState& s, long step) {
    const auto v = s.to_array();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) throw DynamicsDiverged(step, std::string(kStateFieldNames[i]));
    }
}

}  // namespace

AircraftState rk4_hold(const AircraftState& state, const SurfaceDeflections& surfaces, double h) {
    const Vec x = state.to_array();
    auto f = [&](const Vec& v) { return f16::derivatives(AircraftState::from_array(v), surfaces); };
    const Vec k1 = f(x);
    const Vec k2 = f(axpy(x, k1, 0.5 * h));
    const Vec k3 = f(axpy(x, k2, 0.5 * h));
    const Vec k4 = f(axpy(x, k3, h));
    Vec out = x;
    for (std::size_t i = 0; i < kDynamicStateSize; ++i) {
        out[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return AircraftState::from_array(out);
}

AircraftState integrate_open_loop(const AircraftState& state, const SurfaceDeflections& surfaces,
                                  double duration, int steps) {
    if (steps < 1) throw UsageError("integrate_open_loop: steps must be >= 1");
    const double h = duration / steps;
    AircraftState x = state;
    for (int i = 0; i < steps; ++i) {
        x = rk4_hold(x, surfaces, h);
        check_finite(x, i);
    }
    return x;
}

AircraftState step_rk4(const AircraftState& state, const ControlRequest& request, double dt, int substeps) {
    if (!(dt > 0.0)) throw UsageError("step_rk4: dt must be positive");
    if (substeps < 1) throw UsageError("step_rk4: substeps must be >= 1");
    const double h = dt / substeps;
    AircraftState x = state;
    for (int i = 0; i < substeps; ++i) {
        AircraftState next;
        try {
            const auto ctrl = flcs::flcs(x, request, h);
            next = rk4_hold(x, ctrl.surfaces, h);
            next.i_nz = ctrl.i_nz;
            next.i_ps = ctrl.i_ps;
            next.i_ny = ctrl.i_ny;
        } catch (const NonFiniteInput& e) {
            throw DynamicsDiverged(i, e.field());
        }
        check_finite(next, i);
        x = next;
    }
    return x;
}

}  // namespace tunnel
