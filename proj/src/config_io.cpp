#include "tunnel/config_io.hpp"

#include "tunnel/error.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace tunnel {

namespace detail {

ObjectReader::ObjectReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
}

const Json* ObjectReader::get(const std::string& key) {
    used_.push_back(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
}

void ObjectReader::read(const std::string& key, double& out) {
    if (const Json* v = get(key)) {
        if (!v->is_number()) throw ConfigError(field(key), "expected a number");
        out = v->get<double>();
    }
}

void ObjectReader::read(const std::string& key, int& out) {
    if (const Json* v = get(key)) {
        if (!v->is_number_integer()) throw ConfigError(field(key), "expected an integer");
        const auto x = v->get<long long>();
        if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
            throw ConfigError(field(key), "integer out of range");
        }
        out = static_cast<int>(x);
    }
}

void ObjectReader::read(const std::string& key, std::uint64_t& out) {
    if (const Json* v = get(key)) {
        if (!v->is_number_integer() || (v->is_number_integer() && !v->is_number_unsigned() && v->get<long long>() < 0)) {
            throw ConfigError(field(key), "expected a non-negative integer");
        }
        out = v->get<std::uint64_t>();
    }
}

void ObjectReader::read(const std::string& key, bool& out) {
    if (const Json* v = get(key)) {
        if (!v->is_boolean()) throw ConfigError(field(key), "expected true or false");
        out = v->get<bool>();
    }
}

void ObjectReader::read(const std::string& key, std::string& out) {
    if (const Json* v = get(key)) {
        if (!v->is_string()) throw ConfigError(field(key), "expected a string");
        out = v->get<std::string>();
    }
}

void ObjectReader::finish() {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
        if (std::find(used_.begin(), used_.end(), it.key()) == used_.end()) {
            throw ConfigError(field(it.key()), "unknown key");
        }
    }
}

}  // namespace detail

using detail::ObjectReader;

Json to_json(const TunnelConfig& c) {
    return {{"length", c.length},
            {"wingspan", c.wingspan},
            {"center_altitude", c.center_altitude},
            {"aircraft_radius", c.aircraft_radius},
            {"gate_count", c.gate_count},
            {"gate_reward_step", c.gate_reward_step}};
}

Json to_json(const SensorConfig& c) {
    return {{"az_min", c.az_min}, {"az_max", c.az_max}, {"el_min", c.el_min},       {"el_max", c.el_max},
            {"az_step", c.az_step}, {"el_step", c.el_step}, {"max_range", c.max_range}};
}

Json to_json(const EnvConfig& c) {
    Json dims = Json::array();
    for (auto d : c.action_dims) dims.push_back(to_string(d));
    return {{"tunnel", to_json(c.tunnel)},
            {"sensor", to_json(c.sensor)},
            {"frame_stack", c.sensor.history_len},
            {"reward_mode", to_string(c.reward_mode)},
            {"observation_mode", to_string(c.observation_mode)},
            {"action_dims", dims},
            {"init_randomization", to_string(c.init_randomization)},
            {"ring_displacement_factor", c.ring_displacement_factor},
            {"initial_speed", c.initial_speed},
            {"dt", c.dt},
            {"substeps", c.substeps},
            {"max_steps", c.max_steps},
            {"seed", c.seed}};
}

TunnelConfig tunnel_config_from_json(const Json& j, const std::string& path) {
    TunnelConfig c;
    ObjectReader r(j, path);
    r.read("length", c.length);
    r.read("wingspan", c.wingspan);
    r.read("center_altitude", c.center_altitude);
    r.read("aircraft_radius", c.aircraft_radius);
    r.read("gate_count", c.gate_count);
    r.read("gate_reward_step", c.gate_reward_step);
    r.finish();
    return c;
}

SensorConfig sensor_config_from_json(const Json& j, const std::string& path) {
    SensorConfig c;
    ObjectReader r(j, path);
    std::string preset;
    r.read("preset", preset);
    if (preset == "sparse") {
        c = SensorConfig::sparse();
    } else if (!preset.empty() && preset != "dense") {
        throw ConfigError(r.field("preset"), "expected \"dense\" or \"sparse\"");
    }
    r.read("az_min", c.az_min);
    r.read("az_max", c.az_max);
    r.read("el_min", c.el_min);
    r.read("el_max", c.el_max);
    r.read("az_step", c.az_step);
    r.read("el_step", c.el_step);
    r.read("max_range", c.max_range);
    r.finish();
    return c;
}

namespace {

template <class E, std::size_t N>
E parse_enum(const std::string& field, const std::string& text, const std::array<E, N>& values) {
    std::string allowed;
    for (E v : values) {
        if (to_string(v) == text) return v;
        allowed += (allowed.empty() ? "" : ", ") + to_string(v);
    }
    throw ConfigError(field, "unknown value \"" + text + "\" (expected one of: " + allowed + ")");
}

}  // namespace

EnvConfig env_config_from_json(const Json& j, const std::string& path) {
    EnvConfig c;
    ObjectReader r(j, path);
    if (const Json* t = r.get("tunnel")) c.tunnel = tunnel_config_from_json(*t, r.field("tunnel"));
    // A sparse preset brings its own stack depth; an explicit frame_stack wins.
    if (const Json* s = r.get("sensor")) c.sensor = sensor_config_from_json(*s, r.field("sensor"));
    r.read("frame_stack", c.sensor.history_len);
    if (c.sensor.history_len < 1) throw ConfigError(r.field("frame_stack"), "must be >= 1");

    if (const Json* v = r.get("reward_mode")) {
        if (!v->is_string()) throw ConfigError(r.field("reward_mode"), "expected a string");
        c.reward_mode = parse_enum(r.field("reward_mode"), v->get<std::string>(),
                                   std::array{RewardMode::CenterlinePenalty, RewardMode::TargetGates});
    }
    if (const Json* v = r.get("observation_mode")) {
        if (!v->is_string()) throw ConfigError(r.field("observation_mode"), "expected a string");
        c.observation_mode =
            parse_enum(r.field("observation_mode"), v->get<std::string>(),
                       std::array{ObservationMode::SensorOnly, ObservationMode::SensorPlusState,
                                  ObservationMode::StateOnly, ObservationMode::ZeroMasked});
    }
    if (const Json* v = r.get("action_dims")) {
        if (!v->is_array()) throw ConfigError(r.field("action_dims"), "expected an array of strings");
        c.action_dims.clear();
        for (const auto& e : *v) {
            if (!e.is_string()) throw ConfigError(r.field("action_dims"), "expected an array of strings");
            c.action_dims.push_back(
                parse_enum(r.field("action_dims"), e.get<std::string>(),
                           std::array{ActionDim::Pitch, ActionDim::Roll, ActionDim::Rudder, ActionDim::Throttle}));
        }
    }
    if (const Json* v = r.get("init_randomization")) {
        if (!v->is_string()) throw ConfigError(r.field("init_randomization"), "expected a string");
        c.init_randomization = parse_enum(r.field("init_randomization"), v->get<std::string>(),
                                          std::array{InitRandomization::None, InitRandomization::Ring});
    }
    r.read("ring_displacement_factor", c.ring_displacement_factor);
    r.read("initial_speed", c.initial_speed);
    r.read("dt", c.dt);
    r.read("substeps", c.substeps);
    r.read("max_steps", c.max_steps);
    r.read("seed", c.seed);
    r.finish();

    try {
        TunnelWorld check(c.tunnel);
    } catch (const ConfigError& e) {
        throw ConfigError(r.field("tunnel." + e.field()), e.reason());
    }
    try {
        c.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(r.field(e.field()), e.reason());
    }
    return c;
}

namespace {

Json vec_json(Vec2 v) { return Json::array({v.pn, v.pe}); }

Vec2 vec_from(const Json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ConfigError(field, "expected [pn, pe]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

Json to_json(const MissionConfig& c) {
    Json terrain = Json::array();
    for (const auto& t : c.terrain) {
        Json verts = Json::array();
        for (const auto& v : t.vertices) verts.push_back(vec_json(v));
        terrain.push_back({{"vertices", verts}, {"height", t.height}});
    }
    Json zones = Json::array();
    for (const auto& z : c.zones) zones.push_back({{"center", vec_json(z.center)}, {"radius", z.radius}});
    return {{"bounds",
             {{"pn_min", c.bounds.pn_min},
              {"pn_max", c.bounds.pn_max},
              {"pe_min", c.bounds.pe_min},
              {"pe_max", c.bounds.pe_max}}},
            {"grid_resolution", c.grid_resolution},
            {"terrain", terrain},
            {"zones", zones},
            {"goal", {{"center", vec_json(c.goal.center)}, {"radius", c.goal.radius}}},
            {"start", vec_json(c.start)},
            {"zone_jitter", c.zone_jitter},
            {"start_jitter", c.start_jitter},
            {"perceived_offset_radii", c.perceived_offset_radii},
            {"altitude", c.altitude},
            {"initial_speed", c.initial_speed},
            {"dt", c.dt},
            {"substeps", c.substeps},
            {"max_steps", c.max_steps},
            {"aircraft_radius", c.aircraft_radius},
            {"forward_sensor",
             {{"half_angle", c.forward_sensor.half_angle},
              {"range", c.forward_sensor.range},
              {"arc_segments", c.forward_sensor.arc_segments}}},
            {"range_finder",
             {{"az_min", c.range_finder.az_min},
              {"az_max", c.range_finder.az_max},
              {"az_step", c.range_finder.az_step},
              {"max_range", c.range_finder.max_range}}},
            {"plan_margin", c.plan_margin},
            {"terrain_margin", c.terrain_margin},
            {"lookahead", c.lookahead},
            {"gps_denied", c.gps_denied},
            {"stress",
             {{"altitude_amplitude", c.stress.altitude_amplitude},
              {"heading_amplitude_deg", c.stress.heading_amplitude_deg},
              {"period", c.stress.period}}}};
}

MissionConfig mission_config_from_json(const Json& j, const std::string& path) {
    MissionConfig c;
    ObjectReader r(j, path);
    if (const Json* b = r.get("bounds")) {
        ObjectReader br(*b, r.field("bounds"));
        br.read("pn_min", c.bounds.pn_min);
        br.read("pn_max", c.bounds.pn_max);
        br.read("pe_min", c.bounds.pe_min);
        br.read("pe_max", c.bounds.pe_max);
        br.finish();
    }
    r.read("grid_resolution", c.grid_resolution);
    if (const Json* t = r.get("terrain")) {
        if (!t->is_array()) throw ConfigError(r.field("terrain"), "expected an array");
        c.terrain.clear();
        for (std::size_t i = 0; i < t->size(); ++i) {
            const std::string f = r.field("terrain[" + std::to_string(i) + "]");
            ObjectReader tr((*t)[i], f);
            TerrainPolygon poly;
            if (const Json* v = tr.get("vertices")) {
                if (!v->is_array()) throw ConfigError(tr.field("vertices"), "expected an array");
                for (const auto& e : *v) poly.vertices.push_back(vec_from(e, tr.field("vertices")));
            }
            tr.read("height", poly.height);
            tr.finish();
            c.terrain.push_back(std::move(poly));
        }
    }
    if (const Json* z = r.get("zones")) {
        if (!z->is_array()) throw ConfigError(r.field("zones"), "expected an array");
        c.zones.clear();
        for (std::size_t i = 0; i < z->size(); ++i) {
            ObjectReader zr((*z)[i], r.field("zones[" + std::to_string(i) + "]"));
            ZoneSpec zs;
            if (const Json* v = zr.get("center")) zs.center = vec_from(*v, zr.field("center"));
            zr.read("radius", zs.radius);
            zr.finish();
            c.zones.push_back(zs);
        }
    }
    if (const Json* g = r.get("goal")) {
        ObjectReader gr(*g, r.field("goal"));
        if (const Json* v = gr.get("center")) c.goal.center = vec_from(*v, gr.field("center"));
        gr.read("radius", c.goal.radius);
        gr.finish();
    }
    if (const Json* v = r.get("start")) c.start = vec_from(*v, r.field("start"));
    r.read("zone_jitter", c.zone_jitter);
    r.read("start_jitter", c.start_jitter);
    r.read("perceived_offset_radii", c.perceived_offset_radii);
    r.read("altitude", c.altitude);
    r.read("initial_speed", c.initial_speed);
    r.read("dt", c.dt);
    r.read("substeps", c.substeps);
    r.read("max_steps", c.max_steps);
    r.read("aircraft_radius", c.aircraft_radius);
    if (const Json* f = r.get("forward_sensor")) {
        ObjectReader fr(*f, r.field("forward_sensor"));
        fr.read("half_angle", c.forward_sensor.half_angle);
        fr.read("range", c.forward_sensor.range);
        fr.read("arc_segments", c.forward_sensor.arc_segments);
        fr.finish();
    }
    if (const Json* f = r.get("range_finder")) {
        ObjectReader fr(*f, r.field("range_finder"));
        fr.read("az_min", c.range_finder.az_min);
        fr.read("az_max", c.range_finder.az_max);
        fr.read("az_step", c.range_finder.az_step);
        fr.read("max_range", c.range_finder.max_range);
        fr.finish();
    }
    r.read("plan_margin", c.plan_margin);
    r.read("terrain_margin", c.terrain_margin);
    r.read("lookahead", c.lookahead);
    r.read("gps_denied", c.gps_denied);
    if (const Json* st = r.get("stress")) {
        ObjectReader sr(*st, r.field("stress"));
        sr.read("altitude_amplitude", c.stress.altitude_amplitude);
        sr.read("heading_amplitude_deg", c.stress.heading_amplitude_deg);
        sr.read("period", c.stress.period);
        sr.finish();
    }
    r.finish();
    try {
        c.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(r.field(e.field()), e.reason());
    }
    return c;
}

std::string to_string(EnvironmentKind kind) { return kind == EnvironmentKind::Mission ? "mission" : "tunnel"; }

Json to_json(const RunConfig& c) {
    return {{"environment", to_string(c.environment)},
            {"env", to_json(c.env)},
            {"mission", to_json(c.mission)},
            {"expert", c.expert},
            {"episodes", c.episodes},
            {"seed", c.seed},
            {"output", {{"trajectory", c.trajectory_path}, {"dataset", c.dataset_path}, {"frames_dir", c.frames_dir}}},
            {"render", c.render},
            {"render_every", c.render_every}};
}

RunConfig run_config_from_json(const Json& j) {
    RunConfig c;
    ObjectReader r(j, "");
    std::string env_kind = to_string(c.environment);
    r.read("environment", env_kind);
    if (env_kind == "tunnel") c.environment = EnvironmentKind::Tunnel;
    else if (env_kind == "mission") c.environment = EnvironmentKind::Mission;
    else throw ConfigError("environment", "expected \"tunnel\" or \"mission\"");
    if (const Json* e = r.get("env")) c.env = env_config_from_json(*e, "env");
    if (const Json* m = r.get("mission")) c.mission = mission_config_from_json(*m, "mission");
    r.read("expert", c.expert);
    r.read("episodes", c.episodes);
    r.read("seed", c.seed);
    if (const Json* o = r.get("output")) {
        ObjectReader orr(*o, "output");
        orr.read("trajectory", c.trajectory_path);
        orr.read("dataset", c.dataset_path);
        orr.read("frames_dir", c.frames_dir);
        orr.finish();
    }
    r.read("render", c.render);
    r.read("render_every", c.render_every);
    r.finish();

    c.validate();
    return c;
}

void RunConfig::validate() const {
    if (expert != "pid" && expert != "autopilot") throw ConfigError("expert", "expected \"pid\" or \"autopilot\"");
    if (environment == EnvironmentKind::Mission && expert != "autopilot") {
        throw ConfigError("expert", "the mission environment supports only the autopilot expert");
    }
    if (episodes < 0) throw ConfigError("episodes", "must be >= 0");
    if (render_every < 1) throw ConfigError("render_every", "must be >= 1");
    if (render && frames_dir.empty()) throw ConfigError("output.frames_dir", "required when render is true");
}

RunConfig load_config(const std::string& path) {
    const Json j = read_json_file(path);
    try {
        return run_config_from_json(j);
    } catch (const ConfigError& e) {
        throw ConfigError(e.field(), e.reason() + " (in " + path + ")");
    }
}

std::string dump_config(const RunConfig& config) { return to_json(config).dump(2) + "\n"; }

std::string config_hash(const RunConfig& c) {
    Json j{{"environment", to_string(c.environment)}};
    if (c.environment == EnvironmentKind::Tunnel) j["env"] = to_json(c.env);
    else j["mission"] = to_json(c.mission);
    return json_hash(j);
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string json_hash(const Json& j) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
    return buf;
}

std::string config_hash(const EnvConfig& config) { return json_hash(to_json(config)); }

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open for reading");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return Json::parse(ss.str());
    } catch (const Json::parse_error& e) {
        throw ConfigError(path, e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path, "cannot open for writing");
    out << text;
    if (!out) throw IoError(path, "write failed");
}

}  // namespace tunnel
