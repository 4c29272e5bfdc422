// Top-down mission scene: terrain, true and perceived threat zones, a goal
// circle, a forward-looking camera footprint and an onboard A* planner.
//
// Horizontal coordinates are (pn, pe) in feet; altitude is handled by a
// terrain-height check only.
#pragma once

#include "tunnel/env.hpp"
#include "tunnel/experts.hpp"
#include "tunnel/planner.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace tunnel {

struct Vec2 {
    double pn = 0.0;
    double pe = 0.0;
    bool operator==(const Vec2&) const = default;
};

struct Bounds {
    double pn_min = 0.0;
    double pn_max = 60000.0;
    double pe_min = -20000.0;
    double pe_max = 20000.0;
    bool contains(Vec2 p) const { return p.pn >= pn_min && p.pn <= pn_max && p.pe >= pe_min && p.pe <= pe_max; }
    bool operator==(const Bounds&) const = default;
};

struct Circle {
    Vec2 center;
    double radius = 0.0;
    bool contains(Vec2 p) const;
    bool operator==(const Circle&) const = default;
};

struct TerrainPolygon {
    std::vector<Vec2> vertices;
    double height = 0.0;  // ft, top of the terrain
    bool operator==(const TerrainPolygon&) const = default;
};

struct EngagementZone {
    int id = 0;
    Vec2 center;
    double radius = 0.0;
    bool active = true;
    bool operator==(const EngagementZone&) const = default;
};

struct ZoneSpec {
    Vec2 center;
    double radius = 0.0;
};

struct ForwardSensor {
    double half_angle = 30.0;  // deg
    double range = 12000.0;    // ft
    int arc_segments = 8;
    void validate() const;
};

struct RangeFinder {
    double az_min = -180.0;
    double az_max = 150.0;
    double az_step = 30.0;
    double max_range = 5000.0;
    std::size_t ray_count() const;
    void validate() const;
};

/// Optional disturbance on the autopilot's carrot: sinusoidal altitude and
/// heading offsets. Zero amplitudes (the default) leave the carrot alone.
struct StressProfile {
    double altitude_amplitude = 0.0;     // ft
    double heading_amplitude_deg = 0.0;  // rotation of the carrot about the aircraft
    double period = 20.0;                // s

    bool active() const { return altitude_amplitude != 0.0 || heading_amplitude_deg != 0.0; }
};

/// Carrot perturbed by `profile` at episode time t.
Waypoint apply_stress(const StressProfile& profile, const Waypoint& carrot, Vec2 position, double t);

struct MissionConfig {
    // Scene.
    Bounds bounds;
    double grid_resolution = 500.0;
    std::vector<TerrainPolygon> terrain = default_terrain();
    std::vector<ZoneSpec> zones{{{20000.0, -5000.0}, 5000.0}, {{36000.0, 5000.0}, 5000.0}};
    Circle goal{{55000.0, 0.0}, 2500.0};
    Vec2 start{3000.0, 0.0};
    double zone_jitter = 1000.0;          // ft, uniform per axis, seeded
    double start_jitter = 2000.0;         // ft on pe, seeded
    double perceived_offset_radii = 1.5;  // stale-EOB displacement, in zone radii

    // Flight and episode.
    double altitude = 1000.0;
    double initial_speed = 500.0;
    double dt = 1.0 / 30.0;
    int substeps = 3;
    int max_steps = 6000;
    double aircraft_radius = kWingspan / 2.0;

    // Sensing and planning.
    ForwardSensor forward_sensor;
    RangeFinder range_finder;
    double plan_margin = 1500.0;    // ft added to radius + aircraft_radius
    double terrain_margin = 1000.0;  // ft
    double lookahead = 3000.0;       // ft, path-following carrot distance
    bool gps_denied = false;
    StressProfile stress;

    static std::vector<TerrainPolygon> default_terrain();
    void validate() const;
};

struct MissionWorld {
    std::vector<TerrainPolygon> terrain;
    std::vector<EngagementZone> true_eob;
    std::vector<EngagementZone> perceived_eob;  // same ids and order as true_eob
    Circle goal;
    Bounds bounds;
    double grid_resolution = 500.0;
    Vec2 start;

    void validate() const;
    bool operator==(const MissionWorld&) const = default;
};

/// Deterministic from (config, seed): jitters true zone centres and the start,
/// and displaces each perceived zone by perceived_offset_radii * radius in a
/// seeded direction. Throws ConfigError when the goal or start overlaps a zone.
MissionWorld build_mission(const MissionConfig& config, std::uint64_t seed);

bool point_in_polygon(Vec2 p, const std::vector<Vec2>& polygon);
double distance_to_polygon(Vec2 p, const std::vector<Vec2>& polygon);  // 0 inside

/// Ground track of the forward camera: apex at the aircraft, an arc of
/// `range` between heading +- half_angle.
std::vector<Vec2> sensor_footprint(Vec2 position, double heading, const ForwardSensor& sensor);

/// Copies every active true zone whose centre lies in the footprint into the
/// perceived list. Returns true when anything changed.
bool update_perception(const std::vector<Vec2>& footprint, const std::vector<EngagementZone>& true_eob,
                       std::vector<EngagementZone>& perceived_eob);

/// Sets each zone's active flag. Throws UsageError on a length mismatch.
void adversary_step(std::vector<EngagementZone>& zones, const std::vector<bool>& action);

/// Horizontal ranges against terrain polygons and the scene bounds, clipped
/// to max_range. Azimuth is relative to the heading, positive right.
std::vector<double> range_scan(Vec2 position, double heading, const MissionWorld& world, const RangeFinder& finder);

/// Maps the scene onto a planning grid. A cell is blocked when its centre
/// is within terrain_margin of terrain taller than `altitude`, or within
/// radius + aircraft_radius + plan_margin of an active perceived zone.
struct GridFrame {
    Bounds bounds;
    double resolution = 500.0;
    int rows = 0;  // along pn
    int cols = 0;  // along pe
    Cell cell_of(Vec2 p) const;
    Vec2 center_of(Cell c) const;
};

GridFrame grid_frame(const MissionWorld& world);
PlanGrid build_plan_grid(const MissionWorld& world, const MissionConfig& config);

/// Nearest free cell by centre distance (ties: lower index); nullopt if none.
std::optional<Cell> nearest_free_cell(const PlanGrid& grid, Cell from);

struct MissionPath {
    PlanResult plan;
    std::vector<Vec2> waypoints;  // current position, cell centres, goal centre
};

/// Plans from the aircraft position to the goal; a blocked start cell is
/// replaced by the nearest free cell.
MissionPath plan_mission(const MissionWorld& world, const MissionConfig& config, Vec2 position);

struct MissionAction {
    bool autopilot = true;
    Action agent;                  // pitch, roll, rudder, throttle in [-1, 1] when !autopilot
    std::vector<bool> adversary;  // empty keeps the zone flags
};

struct MissionInfo {
    int step = 0;
    bool success = false;
    bool trespass = false;
    int trespass_zone = -1;
    bool terrain_collision = false;
    bool out_of_bounds = false;
    bool diverged = false;
    bool perception_changed = false;
    bool replanned = false;
    AircraftState state;
    Action action;  // as applied; the autopilot's request mapped into action space
    ControlRequest request;
};

struct MissionStepResult {
    Observation observation;
    double reward = 0.0;
    bool terminated = false;
    bool truncated = false;
    MissionInfo info;
};

struct MissionReset {
    Observation observation;
    MissionInfo info;
};

/// Reward: 1e-3 per ft of goal-distance reduction, +100 on success and -100
/// on any failure.
class MissionEnv {
public:
    explicit MissionEnv(MissionConfig config);

    MissionReset reset(std::uint64_t seed);
    MissionStepResult step(const MissionAction& action);

    const MissionConfig& config() const { return config_; }
    const MissionWorld& world() const { return world_; }
    const MissionPath& path() const { return path_; }
    const AircraftState& state() const { return state_; }
    const TrimResult& trim() const { return trim_; }
    std::vector<Vec2> footprint() const;
    int step_count() const { return steps_; }
    int replans() const { return replans_; }

    std::size_t observation_size() const;
    Space observation_space() const;
    Space action_space() const;

private:
    Observation observe() const;
    Waypoint carrot();
    ControlRequest agent_request(const Action& action) const;

    MissionConfig config_;
    TrimResult trim_;
    MissionWorld world_;
    MissionPath path_;
    std::size_t path_index_ = 0;
    AircraftState state_;
    ControlRequest last_request_;
    int steps_ = 0;
    int replans_ = 0;
    bool started_ = false;
    bool done_ = false;
};

}  // namespace tunnel
