#include "tunnel/trajectory.hpp"

#include "tunnel/error.hpp"

namespace tunnel {

namespace {

constexpr const char* kTrajectoryFormat = "tunnel-trajectory";
constexpr int kTrajectoryVersion = 1;

Json header_json(const TrajectoryHeader& h) {
    return {{"format", kTrajectoryFormat}, {"version", kTrajectoryVersion}, {"environment", h.environment},
            {"config_hash", h.config_hash}, {"tool_version", h.tool_version}, {"seed", h.seed},
            {"source", h.source}};
}

}  // namespace

Json to_json(const TrajectoryRecord& r) {
    return {{"episode", r.episode},
            {"step", r.step},
            {"state", r.state.to_array()},
            {"action", r.action},
            {"request", {r.request.nz_cmd, r.request.ps_cmd, r.request.ny_r_cmd, r.request.throttle}},
            {"reward", r.reward},
            {"terminated", r.terminated},
            {"truncated", r.truncated},
            {"flags", r.flags}};
}

TrajectoryRecord trajectory_record_from_json(const Json& j) {
    TrajectoryRecord r;
    r.episode = j.at("episode").get<int>();
    r.step = j.at("step").get<int>();
    const auto st = j.at("state").get<std::vector<double>>();
    if (st.size() != kStateSize) throw Error("state must have 16 elements");
    std::array<double, kStateSize> arr{};
    std::copy(st.begin(), st.end(), arr.begin());
    r.state = AircraftState::from_array(arr);
    r.action = j.at("action").get<std::vector<double>>();
    const auto req = j.at("request").get<std::vector<double>>();
    if (req.size() != 4) throw Error("request must have 4 elements");
    r.request = {req[0], req[1], req[2], req[3]};
    r.reward = j.at("reward").get<double>();
    r.terminated = j.at("terminated").get<bool>();
    r.truncated = j.at("truncated").get<bool>();
    r.flags = j.at("flags").get<std::vector<std::string>>();
    return r;
}

TrajectoryWriter::TrajectoryWriter(const std::string& path, const TrajectoryHeader& header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw IoError(path, "cannot open for writing");
    out_ << header_json(header).dump() << '\n';
    out_.flush();
    if (!out_) throw IoError(path, "write failed");
}

void TrajectoryWriter::write(const TrajectoryRecord& r) {
    if (r.episode < last_episode_ || (r.episode == last_episode_ && r.step <= last_step_)) {
        throw UsageError(path_ + ": records must be written in episode/step order");
    }
    last_episode_ = r.episode;
    last_step_ = r.step;
    out_ << to_json(r).dump() << '\n';
    out_.flush();
    if (!out_) throw IoError(path_, "write failed");
    ++count_;
}

void write_trajectory(const std::string& path, const Trajectory& t) {
    TrajectoryWriter w(path, t.header);
    for (const auto& r : t.records) w.write(r);
}

Trajectory read_trajectory(const std::string& path, const std::string& expected_hash) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open for reading");
    Trajectory t;
    std::string line;
    long lineno = 0;
    auto where = [&] { return path + ":" + std::to_string(lineno); };

    if (!std::getline(in, line)) throw IoError(path, "empty file (missing header)");
    ++lineno;
    try {
        const Json h = Json::parse(line);
        if (h.value("format", "") != kTrajectoryFormat) throw IoError(where(), "not a trajectory file");
        if (h.at("version").get<int>() != kTrajectoryVersion) throw IoError(where(), "unsupported version");
        t.header.environment = h.at("environment").get<std::string>();
        t.header.config_hash = h.at("config_hash").get<std::string>();
        t.header.tool_version = h.at("tool_version").get<std::string>();
        t.header.seed = h.at("seed").get<std::uint64_t>();
        t.header.source = h.at("source").get<std::string>();
    } catch (const Json::exception& e) {
        throw IoError(where(), std::string("bad header: ") + e.what());
    }
    t.hash_mismatch = !expected_hash.empty() && expected_hash != t.header.config_hash;

    int last_episode = -1, last_step = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        TrajectoryRecord r;
        try {
            r = trajectory_record_from_json(Json::parse(line));
        } catch (const std::exception& e) {
            throw IoError(where(), std::string("malformed record: ") + e.what());
        }
        if (r.episode < last_episode || (r.episode == last_episode && r.step <= last_step)) {
            throw IoError(where(), "step indices are not monotone");
        }
        last_episode = r.episode;
        last_step = r.step;
        t.records.push_back(std::move(r));
    }
    return t;
}

}  // namespace tunnel
