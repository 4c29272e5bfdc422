#include "tunnel/tunnel_world.hpp"

#include "tunnel/error.hpp"
#include "tunnel/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tunnel {

TunnelWorld::TunnelWorld(const TunnelConfig& config) : config_(config) {
    if (!(config.length > 0.0) || !std::isfinite(config.length)) throw ConfigError("length", "must be positive");
    if (!(config.wingspan > 0.0) || !std::isfinite(config.wingspan)) throw ConfigError("wingspan", "must be positive");
    if (!std::isfinite(config.center_altitude)) throw ConfigError("center_altitude", "must be finite");
    half_width_ = 2.0 * config.wingspan;
    half_height_ = 2.0 * config.wingspan;
    if (!(config.aircraft_radius > 0.0) || !(config.aircraft_radius < half_width_)) {
        throw ConfigError("aircraft_radius", "must be positive and smaller than the half width");
    }
    if (config.gate_count < 0) throw ConfigError("gate_count", "must be non-negative");
    if (!std::isfinite(config.gate_reward_step)) throw ConfigError("gate_reward_step", "must be finite");

    gates_.reserve(static_cast<std::size_t>(config.gate_count));
    for (int k = 0; k < config.gate_count; ++k) {
        gates_.push_back({config.length * static_cast<double>(k + 1) / config.gate_count,
                          static_cast<double>(k + 1) * config.gate_reward_step});
    }
}

double TunnelWorld::total_gate_reward() const {
    double sum = 0.0;
    for (const auto& g : gates_) sum += g.reward;
    return sum;
}

bool TunnelWorld::contains(const Position& p) const {
    return std::abs(p.pe) < half_width_ && std::abs(p.h - config_.center_altitude) < half_height_ &&
           p.pn < config_.length;
}

double TunnelWorld::centerline_offset(const Position& p) const {
    return std::hypot(p.pe, p.h - config_.center_altitude);
}

TunnelWorld make_tunnel(const TunnelConfig& config) { return TunnelWorld(config); }

Direction ray_direction(const Attitude& a, double az_deg, double el_deg) {
    const double az = az_deg * kDegToRad;
    const double el = el_deg * kDegToRad;
    const double bx = std::cos(el) * std::cos(az);
    const double by = std::cos(el) * std::sin(az);
    const double bz = -std::sin(el);

    const double sph = std::sin(a.phi), cph = std::cos(a.phi);
    const double sth = std::sin(a.theta), cth = std::cos(a.theta);
    const double sps = std::sin(a.psi), cps = std::cos(a.psi);

    const double north = cth * cps * bx + (sph * sth * cps - cph * sps) * by + (cph * sth * cps + sph * sps) * bz;
    const double east = cth * sps * bx + (sph * sth * sps + cph * cps) * by + (cph * sth * sps - sph * cps) * bz;
    const double down = -sth * bx + sph * cth * by + cph * cth * bz;
    return {north, east, -down};
}

double ray_distance(const Position& position, const Attitude& attitude, double az_deg, double el_deg,
                    const TunnelWorld& world, double max_range) {
    if (!world.contains(position)) throw GeometryError("ray origin outside the corridor");
    const auto d = ray_direction(attitude, az_deg, el_deg);
    double t = max_range;

    // Slab exits: each axis contributes the plane the ray is moving toward.
    const double rel_e = position.pe;
    const double rel_h = position.h - world.center_altitude();
    if (d.east > 0.0) t = std::min(t, (world.half_width() - rel_e) / d.east);
    if (d.east < 0.0) t = std::min(t, (-world.half_width() - rel_e) / d.east);
    if (d.up > 0.0) t = std::min(t, (world.half_height() - rel_h) / d.up);
    if (d.up < 0.0) t = std::min(t, (-world.half_height() - rel_h) / d.up);
    if (d.north > 0.0) t = std::min(t, (world.length() - position.pn) / d.north);
    return t;
}

bool collision_check(const Position& p, const TunnelWorld& world) {
    const double r = world.aircraft_radius();
    const double to_east = world.half_width() - p.pe;
    const double to_west = world.half_width() + p.pe;
    const double rel_h = p.h - world.center_altitude();
    const double to_ceiling = world.half_height() - rel_h;
    const double to_floor = world.half_height() + rel_h;
    return std::min({to_east, to_west, to_ceiling, to_floor}) < r;
}

std::vector<std::size_t> gates_passed(double prev_pn, double new_pn, const TunnelWorld& world) {
    std::vector<std::size_t> out;
    if (!(new_pn > prev_pn)) return out;
    const auto& gates = world.gates();
    auto first = std::upper_bound(gates.begin(), gates.end(), prev_pn,
                                  [](double v, const Gate& g) { return v < g.pn; });
    for (auto it = first; it != gates.end() && it->pn <= new_pn; ++it) {
        out.push_back(static_cast<std::size_t>(it - gates.begin()));
    }
    return out;
}

std::vector<std::size_t> GateLedger::claim(double prev_pn, double new_pn, const TunnelWorld& world) {
    if (claimed_.size() != world.gates().size()) throw UsageError("GateLedger sized for a different tunnel");
    std::vector<std::size_t> fresh;
    for (std::size_t idx : gates_passed(prev_pn, new_pn, world)) {
        if (claimed_[idx]) continue;
        claimed_[idx] = true;
        total_ += world.gates()[idx].reward;
        ++count_;
        fresh.push_back(idx);
    }
    return fresh;
}

namespace {

bool divides(double span, double step) {
    const double n = span / step;
    return std::abs(n - std::round(n)) < 1e-9;
}

}  // namespace

void SensorConfig::validate() const {
    for (double v : {az_min, az_max, el_min, el_max, az_step, el_step, max_range}) {
        if (!std::isfinite(v)) throw ConfigError("sensor", "values must be finite");
    }
    if (!(az_max >= az_min)) throw ConfigError("sensor.az_max", "must be >= az_min");
    if (!(el_max >= el_min)) throw ConfigError("sensor.el_max", "must be >= el_min");
    if (!(az_step > 0.0)) throw ConfigError("sensor.az_step", "must be positive");
    if (!(el_step > 0.0)) throw ConfigError("sensor.el_step", "must be positive");
    if (!divides(az_max - az_min, az_step)) throw ConfigError("sensor.az_step", "must divide the azimuth span");
    if (!divides(el_max - el_min, el_step)) throw ConfigError("sensor.el_step", "must divide the elevation span");
    if (!(max_range > 0.0)) throw ConfigError("sensor.max_range", "must be positive");
    if (history_len < 1) throw ConfigError("sensor.history_len", "must be >= 1");
}

std::size_t SensorConfig::az_nodes() const {
    return static_cast<std::size_t>(std::llround((az_max - az_min) / az_step)) + 1;
}

std::size_t SensorConfig::el_nodes() const {
    return static_cast<std::size_t>(std::llround((el_max - el_min) / el_step)) + 1;
}

RangeImage sensor_scan(const AircraftState& state, const SensorConfig& config, const TunnelWorld& world) {
    RangeImage img;
    img.rows = config.el_nodes();
    img.cols = config.az_nodes();
    img.ranges.resize(img.rows * img.cols);
    const Position pos{state.pn, state.pe, state.h};
    const Attitude att{state.phi, state.theta, state.psi};
    for (std::size_t row = 0; row < img.rows; ++row) {
        for (std::size_t col = 0; col < img.cols; ++col) {
            img.ranges[row * img.cols + col] =
                ray_distance(pos, att, config.azimuth(col), config.elevation(row), world, config.max_range);
        }
    }
    return img;
}

}  // namespace tunnel
