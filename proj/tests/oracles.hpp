// Independent reference implementations shared by the unit tests and the
// acceptance suite. Deliberately naive; none of them reuse library internals.
#pragma once

#include "tunnel/aircraft.hpp"
#include "tunnel/planner.hpp"
#include "tunnel/tunnel_world.hpp"

#include <cmath>
#include <optional>
#include <queue>
#include <vector>

namespace tunnel::oracle {

inline double dynamic_distance(const AircraftState& a, const AircraftState& b) {
    const auto x = a.to_array();
    const auto y = b.to_array();
    double sum = 0.0;
    for (std::size_t i = 0; i < kDynamicStateSize; ++i) sum += (x[i] - y[i]) * (x[i] - y[i]);
    return std::sqrt(sum);
}

// Independent oracle: build the attitude from elementary rotations and
// march along the ray in 0.01 ft increments until it leaves the corridor.
struct V3 {
    double x, y, z;
};

inline V3 rot_x(double a, V3 v) { return {v.x, std::cos(a) * v.y - std::sin(a) * v.z, std::sin(a) * v.y + std::cos(a) * v.z}; }
inline V3 rot_y(double a, V3 v) { return {std::cos(a) * v.x + std::sin(a) * v.z, v.y, -std::sin(a) * v.x + std::cos(a) * v.z}; }
inline V3 rot_z(double a, V3 v) { return {std::cos(a) * v.x - std::sin(a) * v.y, std::sin(a) * v.x + std::cos(a) * v.y, v.z}; }

inline double marched_distance(const Position& p, const Attitude& att, double az_deg, double el_deg,
                        const TunnelWorld& w, double max_range) {
    const double az = az_deg * kPi / 180.0;
    const double el = el_deg * kPi / 180.0;
    V3 body{std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), -std::sin(el)};
    // body -> NED is Rz(psi) Ry(theta) Rx(phi)
    const V3 ned = rot_z(att.psi, rot_y(att.theta, rot_x(att.phi, body)));
    constexpr double kStep = 0.01;
    for (long k = 1;; ++k) {
        const double t = k * kStep;
        if (t >= max_range) return max_range;
        const double n = p.pn + t * ned.x;
        const double e = p.pe + t * ned.y;
        const double h = p.h - t * ned.z;
        const bool inside = std::abs(e) <= w.half_width() && std::abs(h - w.center_altitude()) <= w.half_height() &&
                            n <= w.length();
        if (!inside) return t - 0.5 * kStep;
    }
}

// Independent oracle: plain Dijkstra on (orthogonal, diagonal) step counts,
// ordered by their real value, with the same no-corner-cutting rule.
struct OracleCost {
    int orth = 0;
    int diag = 0;
    double value() const { return orth + diag * std::sqrt(2.0); }
};

inline std::optional<OracleCost> dijkstra(const PlanGrid& g, Cell s, Cell t) {
    if (g.blocked(s) || g.blocked(t)) return std::nullopt;
    const int R = g.rows(), C = g.cols();
    std::vector<std::optional<OracleCost>> best(static_cast<std::size_t>(R * C));
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    best[static_cast<std::size_t>(s.row * C + s.col)] = OracleCost{};
    pq.push({0.0, s.row * C + s.col});
    std::vector<bool> done(static_cast<std::size_t>(R * C), false);
    while (!pq.empty()) {
        const int u = pq.top().second;
        pq.pop();
        if (done[static_cast<std::size_t>(u)]) continue;
        done[static_cast<std::size_t>(u)] = true;
        const int ur = u / C, uc = u % C;
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                if (dr == 0 && dc == 0) continue;
                const int vr = ur + dr, vc = uc + dc;
                if (vr < 0 || vr >= R || vc < 0 || vc >= C || g.blocked({vr, vc})) continue;
                if (dr != 0 && dc != 0 && (g.blocked({ur, vc}) || g.blocked({vr, uc}))) continue;
                OracleCost cand = *best[static_cast<std::size_t>(u)];
                (dr != 0 && dc != 0 ? cand.diag : cand.orth) += 1;
                auto& slot = best[static_cast<std::size_t>(vr * C + vc)];
                if (!slot || cand.value() < slot->value() - 1e-12) {
                    slot = cand;
                    pq.push({cand.value(), vr * C + vc});
                }
            }
        }
    }
    return best[static_cast<std::size_t>(t.row * C + t.col)];
}

}  // namespace tunnel::oracle
