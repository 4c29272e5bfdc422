// Straight rectangular corridor running north from pn = 0 to an end wall,
// with reward gates at regular north positions and body-axis ray casting
// ("LiDAR") against its walls.
//
// Sensor angles: elevation is positive up from the nose, azimuth is
// positive to the RIGHT of the nose. Both are body-fixed and in degrees.
#pragma once

#include "tunnel/aircraft.hpp"

#include <cstddef>
#include <vector>

namespace tunnel {

inline constexpr double kWingspan = 32.8;  // ft
inline constexpr double kNauticalMile = 6076.0;  // ft
inline constexpr double kDefaultTunnelLength = 1.5 * kNauticalMile;
inline constexpr double kDefaultMaxRange = 10000.0;  // ft

struct TunnelConfig {
    double length = kDefaultTunnelLength;
    double wingspan = kWingspan;  // cross-section is 4 wingspans square
    double center_altitude = 1000.0;
    double aircraft_radius = kWingspan / 2.0;
    int gate_count = 380;
    double gate_reward_step = 100.0;  // gate k (0-based) pays (k + 1) * step
};

struct Gate {
    double pn;
    double reward;
};

struct Position {
    double pn = 0.0;
    double pe = 0.0;
    double h = 0.0;
};

struct Attitude {
    double phi = 0.0;
    double theta = 0.0;
    double psi = 0.0;
};

/// Immutable corridor. The centre line is pe = 0 at center_altitude.
class TunnelWorld {
public:
    /// Throws ConfigError naming the offending field.
    explicit TunnelWorld(const TunnelConfig& config);

    const TunnelConfig& config() const { return config_; }
    double length() const { return config_.length; }
    double half_width() const { return half_width_; }
    double half_height() const { return half_height_; }
    double center_altitude() const { return config_.center_altitude; }
    double aircraft_radius() const { return config_.aircraft_radius; }
    const std::vector<Gate>& gates() const { return gates_; }
    double total_gate_reward() const;

    /// Strictly inside the walls and short of the end wall.
    bool contains(const Position& p) const;

    /// Distance from the cross-section centre (east/altitude plane).
    double centerline_offset(const Position& p) const;

private:
    TunnelConfig config_;
    double half_width_;
    double half_height_;
    std::vector<Gate> gates_;
};

TunnelWorld make_tunnel(const TunnelConfig& config = {});

/// Exact distance along the body-axis ray to the nearest wall plane (four
/// side walls and the end wall), clipped to max_range.
///
/// Throws GeometryError when `position` is not inside the corridor.
double ray_distance(const Position& position, const Attitude& attitude, double az_deg, double el_deg,
                    const TunnelWorld& world, double max_range = kDefaultMaxRange);

/// True when the aircraft circle reaches a side wall or the position is
/// outside the corridor cross-section.
bool collision_check(const Position& position, const TunnelWorld& world);

/// Indices of gates with prev_pn < gate.pn <= new_pn, ascending.
std::vector<std::size_t> gates_passed(double prev_pn, double new_pn, const TunnelWorld& world);

/// Per-episode gate bookkeeping: each gate pays at most once, so flying
/// back and re-crossing earns nothing.
class GateLedger {
public:
    explicit GateLedger(std::size_t gate_count = 0) : claimed_(gate_count, false) {}

    /// Newly claimed gate indices for a move from prev_pn to new_pn.
    std::vector<std::size_t> claim(double prev_pn, double new_pn, const TunnelWorld& world);
    double total() const { return total_; }
    std::size_t claimed_count() const { return count_; }

private:
    std::vector<bool> claimed_;
    double total_ = 0.0;
    std::size_t count_ = 0;
};

/// Body-to-earth direction of a sensor ray as (north, east, up).
struct Direction {
    double north, east, up;
};
Direction ray_direction(const Attitude& attitude, double az_deg, double el_deg);

}  // namespace tunnel
