// Scripted expert pilots and expert rollouts for imitation-learning data.
#pragma once

#include "tunnel/env.hpp"

#include <memory>
#include <string>
#include <vector>

namespace tunnel {

/// Centre-line holder. Commands are in g (nz) and rad/s (ps) per foot of
/// position error:
///   nz = kp_y * Ey + kd_y * dEy,   ps = kp_x * Ex + kd_x * dEx
/// where Ey = h - centre altitude, Ex = pe, and d is a one-step difference.
struct PidGains {
    double kp_y = -0.002;
    double kd_y = -0.2;
    double kp_x = -0.001;
    double kd_x = -0.1;
};

struct PidErrors {
    double ex = 0.0;
    double ey = 0.0;
};

struct PidOutput {
    ControlRequest request;
    PidErrors errors;  // carry into the next call
};

/// Raw law, before clamping. Exposed for the linearity property.
ControlRequest pid_law(double ex, double dex, double ey, double dey, const PidGains& gains = {});

/// One control decision. `prev` is zero at reset. Throttle and rudder come
/// from `trim`; nz/ps are clamped to the request limits after the law.
PidOutput pid_expert(const AircraftState& state, const PidErrors& prev, const TunnelWorld& world,
                     const ControlRequest& trim, const PidGains& gains = {});

struct Waypoint {
    double pn = 0.0;
    double pe = 0.0;
    double h = 0.0;
};

struct AutopilotGains {
    double course = 2.0;               // bank (rad) per rad of course error
    double max_bank = 60.0 * kDegToRad;
    double bank = 3.0;                 // ps (rad/s) per rad of bank error
    double path_angle = 1.5;           // 1/s, flight-path angle tracking
    double max_path_angle = 15.0 * kDegToRad;
    double speed = 0.02;               // throttle per ft/s
    double coincident = 1.0;           // ft; closer than this holds trim
};

inline constexpr AutopilotGains kAutopilotGains{};

/// Velocity direction in NED-up axes from the body state.
struct GroundVelocity {
    double north, east, up;
};
GroundVelocity ground_velocity(const AircraftState& state);

/// Pure pursuit toward the waypoint: course error -> bank -> ps_cmd;
/// flight-path error -> nz_cmd with 1/cos(phi) compensation; airspeed held
/// at `trim.state.vt` with throttle. All outputs clamped. A waypoint within
/// `gains.coincident` of the aircraft returns the trim request.
ControlRequest waypoint_autopilot(const AircraftState& state, const Waypoint& waypoint, const TrimResult& trim,
                                  const AutopilotGains& gains = kAutopilotGains);

class Expert {
public:
    virtual ~Expert() = default;
    virtual std::string name() const = 0;
    virtual void reset(const TunnelEnv& env) = 0;
    virtual ControlRequest act(const TunnelEnv& env) = 0;
};

class PidExpert : public Expert {
public:
    explicit PidExpert(PidGains gains = {}) : gains_(gains) {}
    std::string name() const override { return "pid"; }
    void reset(const TunnelEnv&) override { prev_ = {}; }
    ControlRequest act(const TunnelEnv& env) override;

private:
    PidGains gains_;
    PidErrors prev_;
};

/// Flies toward a single waypoint at the far end of the corridor, on the
/// centre line.
class AutopilotExpert : public Expert {
public:
    explicit AutopilotExpert(AutopilotGains gains = kAutopilotGains) : gains_(gains) {}
    std::string name() const override { return "autopilot"; }
    void reset(const TunnelEnv&) override {}
    ControlRequest act(const TunnelEnv& env) override;

private:
    AutopilotGains gains_;
};

/// "pid" or "autopilot"; throws ConfigError otherwise.
std::unique_ptr<Expert> make_expert(const std::string& name);

enum class Outcome { ReachedEnd, Collision, Diverged, Truncated, Error };
std::string to_string(Outcome outcome);
Outcome outcome_from_string(const std::string& text);

struct DemoRecord {
    int episode = 0;
    int step = 0;
    Observation observation;
    Action action;
    AircraftState state;
    Outcome outcome = Outcome::Truncated;  // label of the whole episode
};

struct EpisodeTrace {
    int episode = 0;
    std::uint64_t seed = 0;
    Outcome outcome = Outcome::Truncated;
    std::string error;  // set when outcome == Error
    double total_reward = 0.0;
    std::vector<DemoRecord> records;
};

/// Episode i is reset with seed + i. Env errors end that episode with the
/// Error label; the rest still run.
std::vector<EpisodeTrace> rollout_expert(TunnelEnv& env, Expert& expert, int episodes, std::uint64_t seed);

struct DatasetSummary {
    std::size_t episodes = 0;
    std::size_t records = 0;
    std::size_t reached_end = 0;
    std::size_t collision = 0;
    std::size_t diverged = 0;
    std::size_t truncated = 0;
    std::size_t error = 0;
    bool operator==(const DatasetSummary&) const = default;
};

DatasetSummary summarize(const std::vector<EpisodeTrace>& traces);

struct Dataset {
    std::string config_hash;
    std::string expert;
    std::vector<EpisodeTrace> episodes;
};

/// JSON-lines: a header line, then one line per episode start and one per
/// record. Doubles are written in shortest round-trip form.
DatasetSummary export_dataset(const Dataset& dataset, const std::string& path);
Dataset import_dataset(const std::string& path);

}  // namespace tunnel
