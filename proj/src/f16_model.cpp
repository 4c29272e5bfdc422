#include "tunnel/f16_model.hpp"

#include "tunnel/error.hpp"

#include <algorithm>
#include <cmath>

namespace tunnel {

ControlRequest clamp_request(const ControlRequest& request) {
    const auto& lim = kRequestLimits;
    return {std::clamp(request.nz_cmd, lim.nz_min, lim.nz_max),
            std::clamp(request.ps_cmd, -lim.ps_max, lim.ps_max),
            std::clamp(request.ny_r_cmd, -lim.ny_r_max, lim.ny_r_max),
            std::clamp(request.throttle, 0.0, 1.0)};
}

namespace f16 {

namespace {

void require_finite(const AircraftState& state, const SurfaceDeflections& surfaces) {
    const auto values = state.to_array();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw NonFiniteInput(std::string(kStateFieldNames[i]));
        }
    }
    if (!std::isfinite(surfaces.elevator)) throw NonFiniteInput("elevator");
    if (!std::isfinite(surfaces.aileron)) throw NonFiniteInput("aileron");
    if (!std::isfinite(surfaces.rudder)) throw NonFiniteInput("rudder");
    if (!std::isfinite(surfaces.throttle)) throw NonFiniteInput("throttle");
}

}  // namespace

AirData air_data(double vt, double altitude) {
    constexpr double kSeaLevelDensity = 2.377e-3;
    const double tfac = 1.0 - 0.703e-5 * altitude;
    const double temperature = altitude >= 35000.0 ? 390.0 : 519.0 * tfac;  // Rankine
    const double density = kSeaLevelDensity * std::pow(tfac, 4.14);
    const double mach = vt / std::sqrt(1.4 * 1716.3 * temperature);
    return {density, mach, 0.5 * density * vt * vt};
}

// Net thrust at cruise Mach: 400 lb idle, ~5900 lb military (50 %) and
// 20000 lb full afterburner (100 %).
double sea_level_thrust(double power) {
    return 400.0 + 24.0 * power + 1.72 * power * power;
}

double thrust(double power, double altitude) {
    constexpr double kSeaLevelDensity = 2.377e-3;
    const double sigma = air_data(0.0, altitude).density / kSeaLevelDensity;
    return sea_level_thrust(power) * std::pow(sigma, 0.8);
}

double commanded_power(double throttle) { return 100.0 * std::clamp(throttle, 0.0, 1.0); }

AeroCoefficients aero_coefficients(const AircraftState& s, const SurfaceDeflections& u) {
    const auto& af = kAirframe;
    const double a = s.alpha;
    const double b = s.beta;
    const double de = u.elevator * kDegToRad;
    const double da = u.aileron * kDegToRad;
    const double dr = u.rudder * kDegToRad;
    const double a2 = a * a;
    const double a3 = a2 * a;
    const double a4 = a3 * a;
    const double a5 = a4 * a;
    const double b2 = b * b;

    const double phat = s.p * af.span / (2.0 * s.vt);
    const double qhat = s.q * af.chord / (2.0 * s.vt);
    const double rhat = s.r * af.span / (2.0 * s.vt);

    const double cx0 = -1.943367e-2 + 2.136104e-1 * a - 2.903457e-1 * de * de - 3.348641e-3 * de -
                       2.060504e-1 * a * de + 6.988016e-1 * a2 - 9.035381e-1 * a3;
    const double cxq = 4.833383e-1 + 8.644627 * a + 1.131098e1 * a2 - 7.422961e1 * a3 + 6.075776e1 * a4;

    const double cy0 = -1.145916 * b + 6.016057e-2 * da + 1.642479e-1 * dr;
    const double cyp = -1.006733e-1 + 8.679799e-1 * a + 4.260586 * a2 - 6.923267 * a3;
    const double cyr = 8.071648e-1 + 1.189633e-1 * a + 3.075095 * a2 - 4.424924e-1 * a3 - 6.033309e-1 * a4;

    const double cz0 = (-1.378278e-1 - 4.211369 * a + 4.775187 * a2 - 1.026225e1 * a3 + 8.399763 * a4) *
                           (1.0 - b2) -
                       4.354000e-1 * de;
    const double czq = -3.054956e1 - 4.132305e1 * a + 3.292788e2 * a2 - 6.848038e2 * a3 + 4.080244e2 * a4;

    const double cl0 = b * (-1.05853e-1 - 5.776677e-1 * a - 1.672435e-2 * a2 + 3.464156 * a3 - 2.835451 * a4);
    const double clp = -4.126806e-1 - 1.189974e-1 * a + 1.247721 * a2 - 7.391132e-1 * a3;
    const double clr = 6.250437e-2 + 6.067723e-1 * a - 1.101964 * a2 + 9.100087 * a3 - 1.192672e1 * a4;
    const double clda = -1.463144e-1 - 4.07391e-2 * a + 4.851209e-1 * a2 - 3.213068e-1 * a3;
    const double cldr = 2.635729e-2 - 2.192910e-2 * a - 1.579864e-2 * b2;

    const double cm0 = -2.029370e-2 + 4.660702e-2 * a - 6.012308e-1 * de - 8.062977e-2 * a * de +
                       8.320429e-2 * de * de + 5.018538e-1 * a2 * de + 6.378864e-1 * de * de * de +
                       4.226356e-1 * a * de * de;
    const double cmq = -5.19153 - 3.554716 * a - 3.598636e1 * a2 + 2.247355e2 * a3 - 4.120991e2 * a4 +
                       2.411750e2 * a5;

    const double cn0 = b * (2.993363e-1 + 6.594004e-2 * a - 2.107885 * a2 + 8.476901e-1 * a3);
    const double cnp = 2.677652e-2 - 3.298246e-1 * a + 1.926178e-1 * a2 + 4.013325 * a3 - 4.404302 * a4;
    const double cnr = -3.698756e-1 - 1.167551e-1 * a - 7.641297e-1 * a2;
    const double cnda = -3.348717e-2 + 4.276655e-2 * a + 2.302543e-1 * a2 - 2.512876e-1 * a3;
    const double cndr = -8.115894e-2 - 1.156580e-2 * a + 1.004297e-1 * a2;

    AeroCoefficients c{};
    c.cx = cx0 + cxq * qhat;
    c.cy = cy0 + cyp * phat + cyr * rhat;
    c.cz = cz0 + czq * qhat;
    c.cl = cl0 + clp * phat + clr * rhat + clda * da + cldr * dr;
    c.cm = cm0 + cmq * qhat;
    c.cn = cn0 + cnp * phat + cnr * rhat + cnda * da + cndr * dr;
    return c;
}

ModelOutput evaluate(const AircraftState& s, const SurfaceDeflections& u) {
    require_finite(s, u);
    const auto& af = kAirframe;
    const double g = kGravity;
    const double mass = af.mass();

    ModelOutput out;
    out.air = air_data(s.vt, s.h);
    const double qs = out.air.qbar * af.wing_area;
    const double t = thrust(s.pow, s.h);
    const auto c = aero_coefficients(s, u);

    const double cbta = std::cos(s.beta);
    const double u_b = s.vt * std::cos(s.alpha) * cbta;
    const double v_b = s.vt * std::sin(s.beta);
    const double w_b = s.vt * std::sin(s.alpha) * cbta;

    const double sth = std::sin(s.theta);
    const double cth = std::cos(s.theta);
    const double sph = std::sin(s.phi);
    const double cph = std::cos(s.phi);
    const double spsi = std::sin(s.psi);
    const double cpsi = std::cos(s.psi);

    // Specific aerodynamic forces, ft/s^2.
    const double ax = (qs * c.cx + t) / mass;
    const double ay = qs * c.cy / mass;
    const double az = qs * c.cz / mass;

    const double udot = s.r * v_b - s.q * w_b - g * sth + ax;
    const double vdot = s.p * w_b - s.r * u_b + g * cth * sph + ay;
    const double wdot = s.q * u_b - s.p * v_b + g * cth * cph + az;

    auto& xd = out.xdot;
    const double uw2 = u_b * u_b + w_b * w_b;
    xd[0] = (u_b * udot + v_b * vdot + w_b * wdot) / s.vt;
    xd[1] = (u_b * wdot - w_b * udot) / uw2;
    xd[2] = (s.vt * vdot - v_b * xd[0]) * cbta / uw2;

    // Euler kinematics.
    const double q_sph = s.q * sph;
    xd[3] = s.p + (sth / cth) * (q_sph + s.r * cph);
    xd[4] = s.q * cph - s.r * sph;
    xd[5] = (q_sph + s.r * cph) / cth;

    // Moment equations with the cross-product of inertia.
    const double gam = af.jx * af.jz - af.jxz * af.jxz;
    const double xpq = af.jxz * (af.jx - af.jy + af.jz);
    const double xqr = af.jz * (af.jy - af.jz) - af.jxz * af.jxz;
    const double zpq = (af.jx - af.jy) * af.jx + af.jxz * af.jxz;
    const double ypr = af.jz - af.jx;
    const double roll = qs * af.span * c.cl;
    const double pitch = qs * af.chord * c.cm;
    const double yaw = qs * af.span * c.cn;
    xd[6] = ((xpq * s.p + xqr * s.r) * s.q + af.jz * roll + af.jxz * yaw) / gam;
    xd[7] = (ypr * s.p * s.r - af.jxz * (s.p * s.p - s.r * s.r) + pitch) / af.jy;
    xd[8] = ((zpq * s.p - xpq * s.r) * s.q + af.jxz * roll + af.jx * yaw) / gam;

    // Navigation: body velocity rotated into north/east/up.
    const double t1 = sph * cpsi;
    const double t2 = cph * sth;
    const double t3 = sph * spsi;
    const double s1 = cth * cpsi;
    const double s2 = cth * spsi;
    const double s3 = t1 * sth - cph * spsi;
    const double s4 = t3 * sth + cph * cpsi;
    const double s5 = sph * cth;
    const double s6 = t2 * cpsi + t3;
    const double s7 = t2 * spsi - t1;
    const double s8 = cph * cth;
    xd[9] = u_b * s1 + v_b * s3 + w_b * s6;
    xd[10] = u_b * s2 + v_b * s4 + w_b * s7;
    xd[11] = u_b * sth - v_b * s5 - w_b * s8;

    xd[12] = kEngineRate * (commanded_power(u.throttle) - s.pow);
    xd[13] = xd[14] = xd[15] = 0.0;

    // Accelerations sensed at the pilot station.
    const double az_pilot = az - af.pilot_station * xd[7];
    const double ay_pilot = ay + af.pilot_station * xd[8];
    out.nz = -az_pilot / g - 1.0;
    out.ny = ay_pilot / g;
    out.ps = s.p * std::cos(s.alpha) + s.r * std::sin(s.alpha);
    out.ny_r = out.ny + s.r;
    return out;
}

StateDerivative derivatives(const AircraftState& state, const SurfaceDeflections& surfaces) {
    return evaluate(state, surfaces).xdot;
}

}  // namespace f16
}  // namespace tunnel
