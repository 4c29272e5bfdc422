#include "tunnel/mission.hpp"

#include "tunnel/error.hpp"
#include "tunnel/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tunnel {

bool Circle::contains(Vec2 p) const { return std::hypot(p.pn - center.pn, p.pe - center.pe) < radius; }

namespace {

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

std::vector<Vec2> rect(double pn0, double pe0, double pn1, double pe1) {
    return {{pn0, pe0}, {pn1, pe0}, {pn1, pe1}, {pn0, pe1}};
}

double dist(Vec2 a, Vec2 b) { return std::hypot(a.pn - b.pn, a.pe - b.pe); }

}  // namespace

void ForwardSensor::validate() const {
    if (!(half_angle > 0.0 && half_angle < 90.0)) throw ConfigError("forward_sensor.half_angle", "must be in (0, 90)");
    if (!finite_positive(range)) throw ConfigError("forward_sensor.range", "must be positive");
    if (arc_segments < 1) throw ConfigError("forward_sensor.arc_segments", "must be >= 1");
}

std::size_t RangeFinder::ray_count() const {
    return static_cast<std::size_t>(std::llround((az_max - az_min) / az_step)) + 1;
}

void RangeFinder::validate() const {
    if (!finite_positive(az_step)) throw ConfigError("range_finder.az_step", "must be positive");
    if (!(az_max >= az_min) || !std::isfinite(az_min) || !std::isfinite(az_max)) {
        throw ConfigError("range_finder.az_max", "must be >= az_min");
    }
    const double n = (az_max - az_min) / az_step;
    if (std::abs(n - std::round(n)) > 1e-9) throw ConfigError("range_finder.az_step", "must divide the span");
    if (!finite_positive(max_range)) throw ConfigError("range_finder.max_range", "must be positive");
}

std::vector<TerrainPolygon> MissionConfig::default_terrain() {
    return {
        {rect(0.0, -20000.0, 60000.0, -14000.0), 3000.0},   // west ridge
        {rect(0.0, 14000.0, 60000.0, 20000.0), 3000.0},     // east ridge
        {rect(44000.0, -14000.0, 47000.0, -7000.0), 2500.0},  // west spur
        {rect(10000.0, 8000.0, 13000.0, 14000.0), 2500.0},    // east spur
        {{{27000.0, 9000.0}, {29000.0, 8500.0}, {30000.0, 10500.0}, {28000.0, 12000.0}, {26500.0, 10500.0}},
         400.0},  // low hill, below the flight altitude
    };
}

void MissionConfig::validate() const {
    if (!(bounds.pn_max > bounds.pn_min) || !(bounds.pe_max > bounds.pe_min)) {
        throw ConfigError("bounds", "max must exceed min on both axes");
    }
    if (!finite_positive(grid_resolution)) throw ConfigError("grid_resolution", "must be positive");
    if (!finite_positive(stress.period)) throw ConfigError("stress.period", "must be positive");
    if (!std::isfinite(stress.altitude_amplitude) || !std::isfinite(stress.heading_amplitude_deg)) {
        throw ConfigError("stress", "amplitudes must be finite");
    }
    for (const auto& t : terrain) {
        if (t.vertices.size() < 3) throw ConfigError("terrain", "polygons need at least 3 vertices");
        if (!std::isfinite(t.height)) throw ConfigError("terrain", "height must be finite");
    }
    for (const auto& z : zones) {
        if (!finite_positive(z.radius)) throw ConfigError("zones", "radius must be positive");
        if (!bounds.contains(z.center)) throw ConfigError("zones", "centre outside the bounds");
    }
    if (!finite_positive(goal.radius)) throw ConfigError("goal.radius", "must be positive");
    if (!bounds.contains(goal.center)) throw ConfigError("goal", "centre outside the bounds");
    if (!bounds.contains(start)) throw ConfigError("start", "outside the bounds");
    if (!(zone_jitter >= 0.0)) throw ConfigError("zone_jitter", "must be >= 0");
    if (!(start_jitter >= 0.0)) throw ConfigError("start_jitter", "must be >= 0");
    if (!(perceived_offset_radii >= 0.0)) throw ConfigError("perceived_offset_radii", "must be >= 0");
    if (!std::isfinite(altitude)) throw ConfigError("altitude", "must be finite");
    if (!finite_positive(initial_speed)) throw ConfigError("initial_speed", "must be positive");
    if (!finite_positive(dt)) throw ConfigError("dt", "must be positive");
    if (substeps < 1) throw ConfigError("substeps", "must be >= 1");
    if (max_steps < 1) throw ConfigError("max_steps", "must be >= 1");
    if (!finite_positive(aircraft_radius)) throw ConfigError("aircraft_radius", "must be positive");
    forward_sensor.validate();
    range_finder.validate();
    if (!(plan_margin >= 0.0)) throw ConfigError("plan_margin", "must be >= 0");
    if (!(terrain_margin >= 0.0)) throw ConfigError("terrain_margin", "must be >= 0");
    if (!finite_positive(lookahead)) throw ConfigError("lookahead", "must be positive");
}

void MissionWorld::validate() const {
    if (!finite_positive(grid_resolution)) throw ConfigError("grid_resolution", "must be positive");
    if (!bounds.contains(goal.center)) throw ConfigError("goal", "centre outside the bounds");
    if (perceived_eob.size() != true_eob.size()) throw ConfigError("perceived_eob", "must mirror true_eob");
    for (std::size_t i = 0; i < true_eob.size(); ++i) {
        if (!finite_positive(true_eob[i].radius)) throw ConfigError("zones", "radius must be positive");
        if (!bounds.contains(true_eob[i].center)) throw ConfigError("zones", "centre outside the bounds");
        if (perceived_eob[i].id != true_eob[i].id) throw ConfigError("perceived_eob", "ids must match true_eob");
    }
}

MissionWorld build_mission(const MissionConfig& config, std::uint64_t seed) {
    config.validate();
    std::mt19937_64 rng(seed);
    auto symmetric = [&](double half) { return half * (2.0 * uniform01(rng) - 1.0); };
    auto clamp_in = [&](Vec2 p) {
        return Vec2{std::clamp(p.pn, config.bounds.pn_min, config.bounds.pn_max),
                    std::clamp(p.pe, config.bounds.pe_min, config.bounds.pe_max)};
    };

    MissionWorld w;
    w.terrain = config.terrain;
    w.goal = config.goal;
    w.bounds = config.bounds;
    w.grid_resolution = config.grid_resolution;
    for (std::size_t i = 0; i < config.zones.size(); ++i) {
        const auto& zs = config.zones[i];
        EngagementZone truth{static_cast<int>(i), zs.center, zs.radius, true};
        truth.center.pn += symmetric(config.zone_jitter);
        truth.center.pe += symmetric(config.zone_jitter);
        truth.center = clamp_in(truth.center);
        const double angle = 2.0 * kPi * uniform01(rng);
        const double offset = config.perceived_offset_radii * zs.radius;
        EngagementZone seen = truth;
        seen.center = clamp_in({truth.center.pn + offset * std::cos(angle), truth.center.pe + offset * std::sin(angle)});
        w.true_eob.push_back(truth);
        w.perceived_eob.push_back(seen);
    }
    w.start = clamp_in({config.start.pn, config.start.pe + symmetric(config.start_jitter)});

    for (const auto& z : w.true_eob) {
        if (dist(z.center, w.goal.center) < z.radius + w.goal.radius) {
            throw ConfigError("zones", "zone " + std::to_string(z.id) + " overlaps the goal");
        }
        if (dist(z.center, w.start) < z.radius + config.aircraft_radius) {
            throw ConfigError("zones", "zone " + std::to_string(z.id) + " covers the start");
        }
    }
    w.validate();
    return w;
}

bool point_in_polygon(Vec2 p, const std::vector<Vec2>& poly) {
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Vec2 a = poly[i], b = poly[j];
        if ((a.pe > p.pe) != (b.pe > p.pe)) {
            const double x = a.pn + (p.pe - a.pe) * (b.pn - a.pn) / (b.pe - a.pe);
            if (p.pn < x) inside = !inside;
        }
    }
    return inside;
}

double distance_to_polygon(Vec2 p, const std::vector<Vec2>& poly) {
    if (point_in_polygon(p, poly)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Vec2 a = poly[j], b = poly[i];
        const double dn = b.pn - a.pn, de = b.pe - a.pe;
        const double len2 = dn * dn + de * de;
        double t = len2 > 0.0 ? ((p.pn - a.pn) * dn + (p.pe - a.pe) * de) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        best = std::min(best, dist(p, {a.pn + t * dn, a.pe + t * de}));
    }
    return best;
}

std::vector<Vec2> sensor_footprint(Vec2 position, double heading, const ForwardSensor& sensor) {
    std::vector<Vec2> poly{position};
    const double half = sensor.half_angle * kDegToRad;
    for (int k = 0; k <= sensor.arc_segments; ++k) {
        const double a = heading - half + 2.0 * half * k / sensor.arc_segments;
        poly.push_back({position.pn + sensor.range * std::cos(a), position.pe + sensor.range * std::sin(a)});
    }
    return poly;
}

bool update_perception(const std::vector<Vec2>& footprint, const std::vector<EngagementZone>& true_eob,
                       std::vector<EngagementZone>& perceived_eob) {
    bool changed = false;
    for (const auto& z : true_eob) {
        if (!z.active || !point_in_polygon(z.center, footprint)) continue;
        auto it = std::find_if(perceived_eob.begin(), perceived_eob.end(),
                               [&](const EngagementZone& p) { return p.id == z.id; });
        if (it == perceived_eob.end()) {
            perceived_eob.push_back(z);
            changed = true;
        } else if (!(*it == z)) {
            *it = z;
            changed = true;
        }
    }
    return changed;
}

void adversary_step(std::vector<EngagementZone>& zones, const std::vector<bool>& action) {
    if (action.size() != zones.size()) {
        throw UsageError("adversary action has " + std::to_string(action.size()) + " entries for " +
                         std::to_string(zones.size()) + " zones");
    }
    for (std::size_t i = 0; i < zones.size(); ++i) zones[i].active = action[i];
}

namespace {

// Distance along the ray to segment ab, or +inf.
double ray_segment(Vec2 o, double dn, double de, Vec2 a, Vec2 b) {
    const double sn = b.pn - a.pn, se = b.pe - a.pe;
    const double denom = dn * se - de * sn;
    if (std::abs(denom) < 1e-12) return std::numeric_limits<double>::infinity();
    const double qn = a.pn - o.pn, qe = a.pe - o.pe;
    const double t = (qn * se - qe * sn) / denom;
    const double u = (qn * de - qe * dn) / denom;
    if (t > 0.0 && u >= 0.0 && u <= 1.0) return t;
    return std::numeric_limits<double>::infinity();
}

}  // namespace

std::vector<double> range_scan(Vec2 position, double heading, const MissionWorld& world, const RangeFinder& finder) {
    const auto& b = world.bounds;
    const std::vector<Vec2> box = rect(b.pn_min, b.pe_min, b.pn_max, b.pe_max);
    std::vector<double> out;
    out.reserve(finder.ray_count());
    for (std::size_t k = 0; k < finder.ray_count(); ++k) {
        const double a = heading + (finder.az_min + static_cast<double>(k) * finder.az_step) * kDegToRad;
        const double dn = std::cos(a), de = std::sin(a);
        double t = finder.max_range;
        auto scan_poly = [&](const std::vector<Vec2>& poly) {
            for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
                t = std::min(t, ray_segment(position, dn, de, poly[j], poly[i]));
            }
        };
        for (const auto& terrain : world.terrain) scan_poly(terrain.vertices);
        scan_poly(box);
        out.push_back(t);
    }
    return out;
}

Cell GridFrame::cell_of(Vec2 p) const {
    const int r = static_cast<int>(std::floor((p.pn - bounds.pn_min) / resolution));
    const int c = static_cast<int>(std::floor((p.pe - bounds.pe_min) / resolution));
    return {std::clamp(r, 0, rows - 1), std::clamp(c, 0, cols - 1)};
}

Vec2 GridFrame::center_of(Cell c) const {
    return {bounds.pn_min + (c.row + 0.5) * resolution, bounds.pe_min + (c.col + 0.5) * resolution};
}

GridFrame grid_frame(const MissionWorld& world) {
    GridFrame f;
    f.bounds = world.bounds;
    f.resolution = world.grid_resolution;
    f.rows = static_cast<int>(std::ceil((world.bounds.pn_max - world.bounds.pn_min) / f.resolution - 1e-9));
    f.cols = static_cast<int>(std::ceil((world.bounds.pe_max - world.bounds.pe_min) / f.resolution - 1e-9));
    return f;
}

PlanGrid build_plan_grid(const MissionWorld& world, const MissionConfig& config) {
    const auto f = grid_frame(world);
    PlanGrid grid(f.rows, f.cols);
    for (int r = 0; r < f.rows; ++r) {
        for (int c = 0; c < f.cols; ++c) {
            const Vec2 p = f.center_of({r, c});
            bool blocked = false;
            for (const auto& t : world.terrain) {
                if (t.height >= config.altitude &&
                    distance_to_polygon(p, t.vertices) <= config.terrain_margin + config.aircraft_radius) {
                    blocked = true;
                    break;
                }
            }
            for (const auto& z : world.perceived_eob) {
                if (blocked) break;
                if (z.active && dist(p, z.center) <= z.radius + config.aircraft_radius + config.plan_margin) {
                    blocked = true;
                }
            }
            grid.set_blocked({r, c}, blocked);
        }
    }
    return grid;
}

std::optional<Cell> nearest_free_cell(const PlanGrid& grid, Cell from) {
    std::optional<Cell> best;
    double best_d = std::numeric_limits<double>::infinity();
    for (int r = 0; r < grid.rows(); ++r) {
        for (int c = 0; c < grid.cols(); ++c) {
            if (grid.blocked({r, c})) continue;
            const double d = std::hypot(r - from.row, c - from.col);
            if (d < best_d) {
                best_d = d;
                best = Cell{r, c};
            }
        }
    }
    return best;
}

MissionPath plan_mission(const MissionWorld& world, const MissionConfig& config, Vec2 position) {
    const auto frame = grid_frame(world);
    const auto grid = build_plan_grid(world, config);
    MissionPath out;
    Cell start = frame.cell_of(position);
    if (grid.blocked(start)) {
        if (auto free = nearest_free_cell(grid, start)) start = *free;
    }
    out.plan = astar_plan(grid, start, frame.cell_of(world.goal.center));
    out.waypoints.push_back(position);
    for (const auto& c : out.plan.cells) out.waypoints.push_back(frame.center_of(c));
    out.waypoints.push_back(world.goal.center);
    return out;
}

MissionEnv::MissionEnv(MissionConfig config)
    : config_((config.validate(), std::move(config))), trim_(trim_solve(config_.initial_speed, config_.altitude)) {}

std::vector<Vec2> MissionEnv::footprint() const {
    return sensor_footprint({state_.pn, state_.pe}, state_.psi, config_.forward_sensor);
}

std::size_t MissionEnv::observation_size() const {
    return (config_.gps_denied ? kStateSize - 2 : kStateSize) + config_.range_finder.ray_count() + 2 +
           4 * config_.zones.size();
}

Space MissionEnv::observation_space() const {
    const std::size_t n = observation_size();
    const double inf = std::numeric_limits<double>::infinity();
    return {{n}, std::vector<double>(n, -inf), std::vector<double>(n, inf)};
}

Space MissionEnv::action_space() const { return {{4}, std::vector<double>(4, -1.0), std::vector<double>(4, 1.0)}; }

Observation MissionEnv::observe() const {
    const auto& b = world_.bounds;
    const double extent = std::max(b.pn_max - b.pn_min, b.pe_max - b.pe_min);
    Observation obs = normalized_state(state_, extent);
    if (config_.gps_denied) obs.erase(obs.begin() + 9, obs.begin() + 11);  // pn, pe
    for (double r : range_scan({state_.pn, state_.pe}, state_.psi, world_, config_.range_finder)) {
        obs.push_back(r / config_.range_finder.max_range);
    }
    obs.push_back((world_.goal.center.pn - state_.pn) / extent);
    obs.push_back((world_.goal.center.pe - state_.pe) / extent);
    for (const auto& z : world_.perceived_eob) {
        obs.push_back((z.center.pn - state_.pn) / extent);
        obs.push_back((z.center.pe - state_.pe) / extent);
        obs.push_back(z.radius / extent);
        obs.push_back(z.active ? 1.0 : 0.0);
    }
    return obs;
}

MissionReset MissionEnv::reset(std::uint64_t seed) {
    world_ = build_mission(config_, seed);
    state_ = trim_.state;
    state_.pn = world_.start.pn;
    state_.pe = world_.start.pe;
    state_.h = config_.altitude;
    last_request_ = trim_.request;
    steps_ = 0;
    replans_ = 0;
    started_ = true;
    done_ = false;
    update_perception(footprint(), world_.true_eob, world_.perceived_eob);
    path_ = plan_mission(world_, config_, {state_.pn, state_.pe});
    path_index_ = 0;

    MissionReset out;
    out.observation = observe();
    out.info.state = state_;
    out.info.request = last_request_;
    return out;
}

Waypoint apply_stress(const StressProfile& sp, const Waypoint& c, Vec2 pos, double t) {
    if (!sp.active()) return c;
    const double phase = std::sin(2.0 * kPi * t / sp.period);
    const double a = sp.heading_amplitude_deg * kDegToRad * phase;
    const double dn = c.pn - pos.pn, de = c.pe - pos.pe;
    return {pos.pn + dn * std::cos(a) - de * std::sin(a), pos.pe + dn * std::sin(a) + de * std::cos(a),
            c.h + sp.altitude_amplitude * phase};
}

Waypoint MissionEnv::carrot() {
    const auto& wps = path_.waypoints;
    const Vec2 p{state_.pn, state_.pe};
    // Closest point on the next few segments; never moves backwards.
    std::size_t best_k = path_index_;
    double best_t = 0.0, best_d = std::numeric_limits<double>::infinity();
    const std::size_t last = std::min(wps.size() - 1, path_index_ + 24);
    for (std::size_t k = path_index_; k < last; ++k) {
        const Vec2 a = wps[k], b = wps[k + 1];
        const double dn = b.pn - a.pn, de = b.pe - a.pe;
        const double len2 = dn * dn + de * de;
        const double t = len2 > 0.0 ? std::clamp(((p.pn - a.pn) * dn + (p.pe - a.pe) * de) / len2, 0.0, 1.0) : 1.0;
        const double d = dist(p, {a.pn + t * dn, a.pe + t * de});
        if (d < best_d) {
            best_d = d;
            best_k = k;
            best_t = t;
        }
    }
    path_index_ = best_k;

    double remaining = config_.lookahead;
    Vec2 from = wps[best_k];
    if (best_k + 1 < wps.size()) {
        const Vec2 b = wps[best_k + 1];
        from = {from.pn + best_t * (b.pn - from.pn), from.pe + best_t * (b.pe - from.pe)};
    }
    for (std::size_t k = best_k + 1; k < wps.size(); ++k) {
        const double seg = dist(from, wps[k]);
        if (seg >= remaining) {
            const double s = remaining / seg;
            from = {from.pn + s * (wps[k].pn - from.pn), from.pe + s * (wps[k].pe - from.pe)};
            return {from.pn, from.pe, config_.altitude};
        }
        remaining -= seg;
        from = wps[k];
    }
    return {wps.back().pn, wps.back().pe, config_.altitude};
}

namespace {
const std::vector<ActionDim> kMissionDims{ActionDim::Pitch, ActionDim::Roll, ActionDim::Rudder, ActionDim::Throttle};
}  // namespace

ControlRequest MissionEnv::agent_request(const Action& action) const {
    return request_from_action(kMissionDims, action, trim_.request);
}

MissionStepResult MissionEnv::step(const MissionAction& action) {
    if (!started_) throw UsageError("step() called before reset()");
    if (done_) throw UsageError("step() called after the episode ended; call reset()");

    MissionStepResult out;
    auto& info = out.info;
    if (!action.adversary.empty()) adversary_step(world_.true_eob, action.adversary);

    info.perception_changed = update_perception(footprint(), world_.true_eob, world_.perceived_eob);
    if (info.perception_changed) {
        path_ = plan_mission(world_, config_, {state_.pn, state_.pe});
        path_index_ = 0;
        ++replans_;
        info.replanned = true;
    }

    // The autopilot goes through the agent's action mapping too, so a
    // recorded action tape replays the episode exactly.
    info.action = action.autopilot
                      ? action_from_request(kMissionDims, waypoint_autopilot(state_,
                                                          apply_stress(config_.stress, carrot(), {state_.pn, state_.pe},
                                                                       steps_ * config_.dt),
                                                          trim_), trim_.request)
                      : action.agent;
    const ControlRequest request = agent_request(info.action);
    last_request_ = request;
    const Vec2 before{state_.pn, state_.pe};

    try {
        state_ = step_rk4(state_, request, config_.dt, config_.substeps);
    } catch (const DynamicsDiverged&) {
        info.diverged = true;
    }
    if (std::abs(state_.theta) >= 85.0 * kDegToRad || state_.vt < 100.0 || std::abs(state_.alpha) > 45.0 * kDegToRad) {
        info.diverged = true;
    }
    ++steps_;

    const Vec2 pos{state_.pn, state_.pe};
    info.success = world_.goal.contains(pos);
    for (const auto& z : world_.true_eob) {
        if (z.active && dist(pos, z.center) < z.radius) {
            info.trespass = true;
            info.trespass_zone = z.id;
            break;
        }
    }
    for (const auto& t : world_.terrain) {
        if (state_.h < t.height && point_in_polygon(pos, t.vertices)) info.terrain_collision = true;
    }
    info.out_of_bounds = !world_.bounds.contains(pos);

    const bool failed = info.trespass || info.terrain_collision || info.out_of_bounds || info.diverged;
    out.reward = 1e-3 * (dist(before, world_.goal.center) - dist(pos, world_.goal.center));
    if (failed) out.reward -= 100.0;
    else if (info.success) out.reward += 100.0;
    out.terminated = failed || info.success;
    out.truncated = !out.terminated && steps_ >= config_.max_steps;
    done_ = out.terminated || out.truncated;

    info.step = steps_;
    info.state = state_;
    info.request = request;
    out.observation = observe();
    return out;
}

}  // namespace tunnel
