// Standalone SVG frames. Output bytes depend only on the inputs.
#pragma once

#include "tunnel/mission.hpp"
#include "tunnel/tunnel_world.hpp"

#include <string>
#include <vector>

namespace tunnel {

/// Rear view of the cross-section (walls, aircraft symbol rolled by phi
/// with a red exhaust disc, collision-radius circle) above a bird's-eye
/// progress strip with the gates.
std::string render_frame(const AircraftState& state, const TunnelWorld& world, int step);

struct MissionFrame {
    AircraftState state;
    std::vector<Vec2> footprint;
    std::vector<Vec2> path;
    int step = 0;
};

/// Top-down scene, north up: terrain, red true zones, blue perceived
/// circles, green camera footprint, white goal, planned path, aircraft.
std::string render_frame(const MissionFrame& frame, const MissionWorld& world);

}  // namespace tunnel
