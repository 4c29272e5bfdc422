#include "tunnel/trim.hpp"

#include "tunnel/error.hpp"
#include "tunnel/f16_model.hpp"
#include "tunnel/flcs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tunnel {

namespace {

struct Unknowns {
    double alpha;     // rad
    double elevator;  // deg
    double throttle;
};

constexpr double kAlphaMin = -10.0 * kDegToRad;
constexpr double kAlphaMax = 45.0 * kDegToRad;

Unknowns project(Unknowns x) {
    x.alpha = std::clamp(x.alpha, kAlphaMin, kAlphaMax);
    x.elevator = std::clamp(x.elevator, -kElevatorLimitDeg, kElevatorLimitDeg);
    x.throttle = std::clamp(x.throttle, 0.0, 1.0);
    return x;
}

AircraftState level_state(double vt, double h, const Unknowns& x) {
    AircraftState s;
    s.vt = vt;
    s.alpha = x.alpha;
    s.theta = x.alpha;
    s.h = h;
    s.pow = f16::commanded_power(x.throttle);
    return s;
}

SurfaceDeflections level_surfaces(const Unknowns& x) { return {x.elevator, 0.0, 0.0, x.throttle}; }

std::array<double, 3> longitudinal_residual(double vt, double h, const Unknowns& x) {
    const auto d = f16::derivatives(level_state(vt, h, x), level_surfaces(x));
    return {d[0], d[1], d[7]};
}

double norm3(const std::array<double, 3>& r) { return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]); }

bool solve3(const double (&a)[3][3], const std::array<double, 3>& b, std::array<double, 3>& x) {
    auto det = [](const double (&m)[3][3]) {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    const double d = det(a);
    if (!std::isfinite(d) || std::abs(d) < 1e-300) return false;
    for (int k = 0; k < 3; ++k) {
        double m[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m[i][j] = (j == k) ? b[i] : a[i][j];
        x[k] = det(m) / d;
    }
    return true;
}

Unknowns newton(double vt, double h, Unknowns x, double& best) {
    constexpr std::array<double, 3> kStep{1e-7, 1e-5, 1e-7};
    auto r = longitudinal_residual(vt, h, x);
    double norm = norm3(r);
    for (int iter = 0; iter < 60 && norm > 1e-13; ++iter) {
        double jac[3][3];
        for (int j = 0; j < 3; ++j) {
            Unknowns xp = x;
            (&xp.alpha)[j] += kStep[j];
            const auto rp = longitudinal_residual(vt, h, xp);
            for (int i = 0; i < 3; ++i) jac[i][j] = (rp[i] - r[i]) / kStep[j];
        }
        std::array<double, 3> delta{};
        if (!solve3(jac, {-r[0], -r[1], -r[2]}, delta)) break;

        // Backtracking on the projected step.
        double lambda = 1.0;
        bool improved = false;
        for (int ls = 0; ls < 30; ++ls) {
            const Unknowns trial =
                project({x.alpha + lambda * delta[0], x.elevator + lambda * delta[1], x.throttle + lambda * delta[2]});
            const auto rt = longitudinal_residual(vt, h, trial);
            const double nt = norm3(rt);
            if (std::isfinite(nt) && nt < norm) {
                x = trial;
                r = rt;
                norm = nt;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved) break;
    }
    best = norm;
    return x;
}

}  // namespace

double trim_residual(const AircraftState& state, const SurfaceDeflections& surfaces) {
    const auto d = f16::derivatives(state, surfaces);
    double sum = 0.0;
    for (std::size_t i : {0u, 1u, 2u, 3u, 4u, 5u, 6u, 7u, 8u, 12u}) sum += d[i] * d[i];
    return std::sqrt(sum);
}

TrimResult trim_solve(double vt_target, double h_target) {
    if (!(vt_target > 0.0) || !std::isfinite(vt_target) || !std::isfinite(h_target)) {
        throw TrimError(std::numeric_limits<double>::infinity(), "airspeed must be positive and finite");
    }
    double best_residual = std::numeric_limits<double>::infinity();
    Unknowns best{};
    for (double alpha_deg : {2.0, 6.0, 12.0, 20.0, 30.0, 40.0}) {
        double residual = 0.0;
        const Unknowns x = newton(vt_target, h_target, {alpha_deg * kDegToRad, -2.0, 0.2}, residual);
        const double full = trim_residual(level_state(vt_target, h_target, x), level_surfaces(x));
        if (std::isfinite(full) && full < best_residual) {
            best_residual = full;
            best = x;
        }
        if (best_residual < 1e-10) break;
    }
    if (!(best_residual < kTrimTolerance)) {
        throw TrimError(best_residual, "no level-flight solution at " + std::to_string(vt_target) + " ft/s");
    }

    TrimResult out;
    out.state = level_state(vt_target, h_target, best);
    out.surfaces = level_surfaces(best);
    out.request = {f16::evaluate(out.state, out.surfaces).nz, 0.0, 0.0, best.throttle};
    const auto integ = flcs::integrators_for(out.state, out.request, out.surfaces);
    out.state.i_nz = integ[0];
    out.state.i_ps = integ[1];
    out.state.i_ny = integ[2];
    out.residual = best_residual;
    return out;
}

}  // namespace tunnel
