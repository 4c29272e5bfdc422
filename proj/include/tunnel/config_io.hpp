// JSON (de)serialisation of configurations. Readers are strict: unknown
// keys and wrong types raise ConfigError naming the dotted key path.
#pragma once

#include "tunnel/env.hpp"
#include "tunnel/mission.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tunnel {

using Json = nlohmann::json;

Json to_json(const TunnelConfig& config);
Json to_json(const SensorConfig& config);
Json to_json(const EnvConfig& config);

/// Missing keys keep their defaults. `path` prefixes field names in errors.
TunnelConfig tunnel_config_from_json(const Json& j, const std::string& path = "tunnel");
SensorConfig sensor_config_from_json(const Json& j, const std::string& path = "sensor");
EnvConfig env_config_from_json(const Json& j, const std::string& path = "env");

Json to_json(const MissionConfig& config);
MissionConfig mission_config_from_json(const Json& j, const std::string& path = "mission");

enum class EnvironmentKind { Tunnel, Mission };
std::string to_string(EnvironmentKind kind);

/// Everything a CLI run needs. All keys are optional in the file.
struct RunConfig {
    EnvironmentKind environment = EnvironmentKind::Tunnel;
    EnvConfig env;
    MissionConfig mission;
    std::string expert = "autopilot";
    int episodes = 1;
    std::uint64_t seed = 0;
    std::string trajectory_path;  // empty: not written
    std::string dataset_path;
    std::string frames_dir;
    bool render = false;
    int render_every = 1;

    /// Cross-field checks (expert name, mission/expert pairing, counts).
    void validate() const;
};

Json to_json(const RunConfig& config);
RunConfig run_config_from_json(const Json& j);
/// Reads and validates a run configuration file. Parse errors carry the
/// line and column; schema errors name the dotted key.
RunConfig load_config(const std::string& path);
std::string dump_config(const RunConfig& config);

/// Hash of the part of the configuration that shapes episodes.
std::string config_hash(const RunConfig& config);

std::uint64_t fnv1a64(std::string_view bytes);

/// FNV-1a of the canonical (sorted-key, compact) dump, as 16 hex digits.
std::string json_hash(const Json& j);
std::string config_hash(const EnvConfig& config);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

namespace detail {

/// Walks a JSON object, rejecting keys not consumed by the reader.
class ObjectReader {
public:
    ObjectReader(const Json& j, std::string path);

    bool has(const std::string& key) const { return j_.contains(key); }
    const Json* get(const std::string& key);
    void read(const std::string& key, double& out);
    void read(const std::string& key, int& out);
    void read(const std::string& key, std::uint64_t& out);
    void read(const std::string& key, bool& out);
    void read(const std::string& key, std::string& out);
    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    void finish();

private:
    const Json& j_;
    std::string path_;
    std::vector<std::string> used_;
};

}  // namespace detail

}  // namespace tunnel
