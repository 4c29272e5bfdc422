#pragma once

#include "tunnel/tunnel_world.hpp"

#include <cstddef>
#include <vector>

namespace tunnel {

/// Regular body-axis grid of rays, degrees.
struct SensorConfig {
    double az_min = -45.0;
    double az_max = 45.0;
    double el_min = -45.0;
    double el_max = 45.0;
    double az_step = 3.0;
    double el_step = 3.0;
    double max_range = kDefaultMaxRange;
    int history_len = 1;  // frame-stack depth

    /// Throws ConfigError when a step does not divide its span exactly or a
    /// bound is non-positive.
    void validate() const;

    std::size_t az_nodes() const;
    std::size_t el_nodes() const;
    std::size_t ray_count() const { return az_nodes() * el_nodes(); }
    double azimuth(std::size_t column) const { return az_min + static_cast<double>(column) * az_step; }
    double elevation(std::size_t row) const { return el_min + static_cast<double>(row) * el_step; }

    /// -45..45 every 3 degrees on both axes.
    static SensorConfig dense() { return {}; }
    /// 3 x 3 rays at -60, 0 and 60 degrees.
    static SensorConfig sparse() { return {-60.0, 60.0, -60.0, 60.0, 60.0, 60.0, kDefaultMaxRange, 4}; }
};

/// Ranges in feet, row-major [elevation][azimuth]; row 0 is the lowest
/// elevation and column 0 the leftmost azimuth.
struct RangeImage {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> ranges;

    double at(std::size_t row, std::size_t col) const { return ranges[row * cols + col]; }
    bool operator==(const RangeImage&) const = default;
};

RangeImage sensor_scan(const AircraftState& state, const SensorConfig& config, const TunnelWorld& world);

}  // namespace tunnel
