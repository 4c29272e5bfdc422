// Line-oriented trajectory files: one JSON header line, then one JSON
// record per environment step. Doubles use shortest round-trip formatting,
// so a write/read cycle is bit-exact.
#pragma once

#include "tunnel/aircraft.hpp"
#include "tunnel/config_io.hpp"

#include <fstream>
#include <string>
#include <vector>

namespace tunnel {

inline constexpr const char* kToolVersion = "0.1.0";

struct TrajectoryHeader {
    std::string environment = "tunnel";
    std::string config_hash;
    std::string tool_version = kToolVersion;
    std::uint64_t seed = 0;  // episode i was reset with seed + i
    std::string source;      // e.g. expert name or "replay"
    bool operator==(const TrajectoryHeader&) const = default;
};

struct TrajectoryRecord {
    int episode = 0;
    int step = 0;  // 1-based index of the step that produced this record
    AircraftState state;
    std::vector<double> action;
    ControlRequest request;
    double reward = 0.0;
    bool terminated = false;
    bool truncated = false;
    std::vector<std::string> flags;  // e.g. "collision", "reached_end", "trespass"
    bool operator==(const TrajectoryRecord&) const = default;
};

struct Trajectory {
    TrajectoryHeader header;
    std::vector<TrajectoryRecord> records;
    bool hash_mismatch = false;  // set by read_trajectory when an expected hash differs
};

Json to_json(const TrajectoryRecord& record);
TrajectoryRecord trajectory_record_from_json(const Json& j);

/// Streams records to disk, flushing each line so a partial file is always
/// readable up to the last complete record.
class TrajectoryWriter {
public:
    TrajectoryWriter(const std::string& path, const TrajectoryHeader& header);
    void write(const TrajectoryRecord& record);
    std::size_t count() const { return count_; }

private:
    std::string path_;
    std::ofstream out_;
    std::size_t count_ = 0;
    int last_episode_ = -1;
    int last_step_ = 0;
};

void write_trajectory(const std::string& path, const Trajectory& trajectory);

/// Throws IoError with "path:line" on malformed lines or non-monotone steps.
/// When `expected_hash` is non-empty and differs from the header, the file
/// is still read and `hash_mismatch` is set.
Trajectory read_trajectory(const std::string& path, const std::string& expected_hash = "");

}  // namespace tunnel
