#include "tunnel/experts.hpp"

#include "tunnel/config_io.hpp"
#include "tunnel/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace tunnel {

ControlRequest pid_law(double ex, double dex, double ey, double dey, const PidGains& g) {
    ControlRequest r;
    r.nz_cmd = g.kp_y * ey + g.kd_y * dey;
    r.ps_cmd = g.kp_x * ex + g.kd_x * dex;
    return r;
}

PidOutput pid_expert(const AircraftState& state, const PidErrors& prev, const TunnelWorld& world,
                     const ControlRequest& trim, const PidGains& gains) {
    PidOutput out;
    out.errors.ex = state.pe;
    out.errors.ey = state.h - world.center_altitude();
    const auto raw = pid_law(out.errors.ex, out.errors.ex - prev.ex, out.errors.ey, out.errors.ey - prev.ey, gains);
    ControlRequest req = trim;
    req.nz_cmd = raw.nz_cmd;
    req.ps_cmd = raw.ps_cmd;
    out.request = clamp_request(req);
    return out;
}

GroundVelocity ground_velocity(const AircraftState& s) {
    const double u = std::cos(s.alpha) * std::cos(s.beta);
    const double v = std::sin(s.beta);
    const double w = std::sin(s.alpha) * std::cos(s.beta);
    const double sph = std::sin(s.phi), cph = std::cos(s.phi);
    const double sth = std::sin(s.theta), cth = std::cos(s.theta);
    const double sps = std::sin(s.psi), cps = std::cos(s.psi);
    const double north = cth * cps * u + (sph * sth * cps - cph * sps) * v + (cph * sth * cps + sph * sps) * w;
    const double east = cth * sps * u + (sph * sth * sps + cph * cps) * v + (cph * sth * sps - sph * cps) * w;
    const double down = -sth * u + sph * cth * v + cph * cth * w;
    return {s.vt * north, s.vt * east, -s.vt * down};
}

namespace {

double wrap_pi(double a) { return std::remainder(a, 2.0 * kPi); }

}  // namespace

ControlRequest waypoint_autopilot(const AircraftState& s, const Waypoint& wp, const TrimResult& trim,
                                  const AutopilotGains& g) {
    const double dn = wp.pn - s.pn;
    const double de = wp.pe - s.pe;
    const double du = wp.h - s.h;
    const double horizontal = std::hypot(dn, de);
    if (std::hypot(horizontal, du) < g.coincident) return trim.request;

    const auto v = ground_velocity(s);
    const double ground_speed = std::hypot(v.north, v.east);
    const double course = ground_speed > 1.0 ? std::atan2(v.east, v.north) : s.psi;
    const double bank_cmd = std::clamp(g.course * wrap_pi(std::atan2(de, dn) - course), -g.max_bank, g.max_bank);

    const double gamma = std::asin(std::clamp(v.up / std::max(s.vt, 1.0), -1.0, 1.0));
    const double gamma_cmd = std::clamp(std::atan2(du, horizontal), -g.max_path_angle, g.max_path_angle);
    const double cos_phi = std::max(std::cos(s.phi), 0.3);

    ControlRequest r;
    r.ps_cmd = g.bank * (bank_cmd - s.phi);
    r.nz_cmd = trim.request.nz_cmd + std::cos(gamma) / cos_phi - 1.0 +
               s.vt / kGravity * g.path_angle * (gamma_cmd - gamma) / cos_phi;
    r.ny_r_cmd = 0.0;
    r.throttle = trim.request.throttle + g.speed * (trim.state.vt - s.vt);
    return clamp_request(r);
}

ControlRequest PidExpert::act(const TunnelEnv& env) {
    const auto out = pid_expert(env.state(), prev_, env.world(), env.trim().request, gains_);
    prev_ = out.errors;
    return out.request;
}

ControlRequest AutopilotExpert::act(const TunnelEnv& env) {
    const auto& w = env.world();
    return waypoint_autopilot(env.state(), {w.length(), 0.0, w.center_altitude()}, env.trim(), gains_);
}

std::unique_ptr<Expert> make_expert(const std::string& name) {
    if (name == "pid") return std::make_unique<PidExpert>();
    if (name == "autopilot") return std::make_unique<AutopilotExpert>();
    throw ConfigError("expert", "unknown expert \"" + name + "\" (expected pid or autopilot)");
}

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::ReachedEnd: return "reached_end";
        case Outcome::Collision: return "collision";
        case Outcome::Diverged: return "diverged";
        case Outcome::Truncated: return "truncated";
        case Outcome::Error: return "error";
    }
    return "?";
}

Outcome outcome_from_string(const std::string& text) {
    for (auto o : {Outcome::ReachedEnd, Outcome::Collision, Outcome::Diverged, Outcome::Truncated, Outcome::Error}) {
        if (to_string(o) == text) return o;
    }
    throw ConfigError("outcome", "unknown outcome \"" + text + "\"");
}

std::vector<EpisodeTrace> rollout_expert(TunnelEnv& env, Expert& expert, int episodes, std::uint64_t seed) {
    if (episodes < 0) throw UsageError("rollout_expert: negative episode count");
    std::vector<EpisodeTrace> traces;
    traces.reserve(static_cast<std::size_t>(episodes));
    for (int i = 0; i < episodes; ++i) {
        EpisodeTrace trace;
        trace.episode = i;
        trace.seed = seed + static_cast<std::uint64_t>(i);
        try {
            Observation obs = env.reset(trace.seed).observation;
            expert.reset(env);
            for (;;) {
                DemoRecord rec;
                rec.episode = i;
                rec.step = env.step_count();
                rec.state = env.state();
                rec.action = env.action_from_request(expert.act(env));
                rec.observation = std::move(obs);
                const auto r = env.step(rec.action);
                trace.records.push_back(std::move(rec));
                trace.total_reward += r.reward;
                obs = r.observation;
                if (r.terminated || r.truncated) {
                    if (r.info.diverged) trace.outcome = Outcome::Diverged;
                    else if (r.info.collision) trace.outcome = Outcome::Collision;
                    else if (r.info.reached_end) trace.outcome = Outcome::ReachedEnd;
                    else trace.outcome = Outcome::Truncated;
                    break;
                }
            }
        } catch (const Error& e) {
            trace.outcome = Outcome::Error;
            trace.error = e.what();
        }
        for (auto& rec : trace.records) rec.outcome = trace.outcome;
        traces.push_back(std::move(trace));
    }
    return traces;
}

DatasetSummary summarize(const std::vector<EpisodeTrace>& traces) {
    DatasetSummary s;
    s.episodes = traces.size();
    for (const auto& t : traces) {
        s.records += t.records.size();
        switch (t.outcome) {
            case Outcome::ReachedEnd: ++s.reached_end; break;
            case Outcome::Collision: ++s.collision; break;
            case Outcome::Diverged: ++s.diverged; break;
            case Outcome::Truncated: ++s.truncated; break;
            case Outcome::Error: ++s.error; break;
        }
    }
    return s;
}

namespace {

constexpr const char* kDatasetFormat = "tunnel-dataset";
constexpr int kDatasetVersion = 1;

template <class T>
T field_as(const Json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) throw IoError(where, std::string("missing field \"") + key + "\"");
    try {
        return it->get<T>();
    } catch (const Json::exception&) {
        throw IoError(where, std::string("bad field \"") + key + "\"");
    }
}

}  // namespace

DatasetSummary export_dataset(const Dataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path, "cannot open for writing");
    const auto summary = summarize(ds.episodes);
    Json header{{"format", kDatasetFormat},
                {"version", kDatasetVersion},
                {"config_hash", ds.config_hash},
                {"expert", ds.expert},
                {"episodes", summary.episodes},
                {"records", summary.records}};
    out << header.dump() << '\n';
    for (const auto& t : ds.episodes) {
        Json ep{{"type", "episode"},       {"episode", t.episode},           {"seed", t.seed},
                {"outcome", to_string(t.outcome)}, {"error", t.error}, {"total_reward", t.total_reward},
                {"steps", t.records.size()}};
        out << ep.dump() << '\n';
        for (const auto& r : t.records) {
            Json rec{{"type", "record"},
                     {"episode", r.episode},
                     {"step", r.step},
                     {"observation", r.observation},
                     {"action", r.action},
                     {"state", r.state.to_array()}};
            out << rec.dump() << '\n';
        }
    }
    out.flush();
    if (!out) throw IoError(path, "write failed");
    return summary;
}

Dataset import_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open for reading");
    Dataset ds;
    std::string line;
    long lineno = 0;
    auto where = [&] { return path + ":" + std::to_string(lineno); };
    auto parse = [&](const std::string& text) {
        try {
            return Json::parse(text);
        } catch (const Json::parse_error& e) {
            throw IoError(where(), std::string("malformed record: ") + e.what());
        }
    };

    if (!std::getline(in, line)) throw IoError(path, "empty file (missing header)");
    ++lineno;
    const Json header = parse(line);
    if (!header.is_object() || header.value("format", "") != kDatasetFormat) throw IoError(where(), "not a dataset file");
    if (field_as<int>(header, "version", where()) != kDatasetVersion) throw IoError(where(), "unsupported version");
    ds.config_hash = field_as<std::string>(header, "config_hash", where());
    ds.expert = field_as<std::string>(header, "expert", where());
    const auto expected_records = field_as<std::size_t>(header, "records", where());

    std::size_t remaining = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const Json j = parse(line);
        const auto type = field_as<std::string>(j, "type", where());
        if (type == "episode") {
            if (remaining != 0) throw IoError(where(), "previous episode is missing records");
            EpisodeTrace t;
            t.episode = field_as<int>(j, "episode", where());
            t.seed = field_as<std::uint64_t>(j, "seed", where());
            try {
                t.outcome = outcome_from_string(field_as<std::string>(j, "outcome", where()));
            } catch (const ConfigError& e) {
                throw IoError(where(), e.what());
            }
            t.error = field_as<std::string>(j, "error", where());
            t.total_reward = field_as<double>(j, "total_reward", where());
            remaining = field_as<std::size_t>(j, "steps", where());
            t.records.reserve(remaining);
            ds.episodes.push_back(std::move(t));
        } else if (type == "record") {
            if (remaining == 0) throw IoError(where(), "record outside an episode");
            auto& t = ds.episodes.back();
            DemoRecord r;
            r.episode = field_as<int>(j, "episode", where());
            if (r.episode != t.episode) throw IoError(where(), "record episode id mismatch");
            r.step = field_as<int>(j, "step", where());
            r.observation = field_as<std::vector<double>>(j, "observation", where());
            r.action = field_as<std::vector<double>>(j, "action", where());
            const auto st = field_as<std::vector<double>>(j, "state", where());
            if (st.size() != kStateSize) throw IoError(where(), "state must have 16 elements");
            std::array<double, kStateSize> arr{};
            std::copy(st.begin(), st.end(), arr.begin());
            r.state = AircraftState::from_array(arr);
            r.outcome = t.outcome;
            t.records.push_back(std::move(r));
            --remaining;
        } else {
            throw IoError(where(), "unknown line type \"" + type + "\"");
        }
    }
    if (remaining != 0) throw IoError(path, "truncated file: episode is missing records");
    if (summarize(ds.episodes).records != expected_records) throw IoError(path, "record count does not match header");
    return ds;
}

}  // namespace tunnel
