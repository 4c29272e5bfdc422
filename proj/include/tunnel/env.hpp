// Episode engine for the corridor task with the usual reset/step contract:
//   reset(seed) -> (observation, info)
//   step(action) -> (observation, reward, terminated, truncated, info)
#pragma once

#include "tunnel/aircraft.hpp"
#include "tunnel/sensor.hpp"
#include "tunnel/trim.hpp"
#include "tunnel/tunnel_world.hpp"

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace tunnel {

enum class RewardMode { CenterlinePenalty, TargetGates };
enum class ObservationMode { SensorOnly, SensorPlusState, StateOnly, ZeroMasked };
enum class ActionDim { Pitch, Roll, Rudder, Throttle };
enum class InitRandomization { None, Ring };

std::string to_string(RewardMode mode);
std::string to_string(ObservationMode mode);
std::string to_string(ActionDim dim);
std::string to_string(InitRandomization mode);

struct EnvConfig {
    TunnelConfig tunnel;
    SensorConfig sensor;  // sensor.history_len is the frame-stack depth
    RewardMode reward_mode = RewardMode::TargetGates;
    ObservationMode observation_mode = ObservationMode::SensorOnly;
    std::vector<ActionDim> action_dims{ActionDim::Pitch, ActionDim::Roll, ActionDim::Rudder, ActionDim::Throttle};
    InitRandomization init_randomization = InitRandomization::None;
    double ring_displacement_factor = 1.5;  // multiples of the aircraft radius
    double initial_speed = 500.0;           // ft/s, trimmed at the centre altitude
    double dt = 1.0 / 30.0;
    int substeps = 3;
    int max_steps = 2000;
    std::uint64_t seed = 0;  // used when reset() is called without a seed first

    int frame_stack() const { return sensor.history_len; }

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Observation normalisation for the 16-element state vector.
struct StateScales {
    double airspeed = 1000.0;  // ft/s
    double angle = kPi;        // alpha, beta, phi, theta, psi
    double rate = kPi;         // p, q, r
    double power = 100.0;
    double integrator = 1.0;
    // Positions are divided by the tunnel length.
};

inline constexpr StateScales kStateScales{};

std::vector<double> normalized_state(const AircraftState& state, double length);

using Observation = std::vector<double>;
using Action = std::vector<double>;

/// Flattens the range-image history (oldest first, each normalised by
/// max_range) and, depending on the mode, the normalised state.
Observation build_observation(const AircraftState& state, const std::deque<RangeImage>& history,
                              ObservationMode mode, const SensorConfig& sensor, double length);

std::size_t observation_size(const EnvConfig& config);

/// Trim-centred map from [-1, 1] actions to requests: pitch is piecewise
/// linear so -1, 0 and 1 hit nz_min, trim nz and nz_max; roll and rudder scale
/// the symmetric limits; throttle maps to [0, 1]. Dimensions not listed stay
/// at trim. Throws UsageError on a size mismatch or non-finite entry.
ControlRequest request_from_action(const std::vector<ActionDim>& dims, const Action& action,
                                   const ControlRequest& trim);
/// Inverse of request_from_action, clamped to [-1, 1].
Action action_from_request(const std::vector<ActionDim>& dims, const ControlRequest& request,
                           const ControlRequest& trim);

/// Shape and element-wise bounds of a flat box space.
struct Space {
    std::vector<std::size_t> shape;
    std::vector<double> low;
    std::vector<double> high;
};

struct StepInfo {
    int step = 0;
    bool collision = false;
    bool reached_end = false;
    bool diverged = false;
    std::string diverged_reason;
    std::vector<std::size_t> gates_claimed;
    double pn_progress = 0.0;  // ft gained this step
    AircraftState state;
    ControlRequest request;
};

struct ResetResult {
    Observation observation;
    StepInfo info;
};

struct StepResult {
    Observation observation;
    double reward = 0.0;
    bool terminated = false;
    bool truncated = false;
    StepInfo info;
};

struct Transition {
    AircraftState before;
    AircraftState after;
    std::vector<double> claimed_rewards;
    double dt = 0.0;
    double center_altitude = 0.0;
};

/// centerline_penalty: -(cross-section offset in ft) * dt at the new state;
/// target_gates: sum of newly claimed gate rewards.
double compute_reward(RewardMode mode, const Transition& transition);

class TunnelEnv {
public:
    explicit TunnelEnv(EnvConfig config);

    ResetResult reset(std::optional<std::uint64_t> seed = std::nullopt);
    StepResult step(const Action& action);

    const EnvConfig& config() const { return config_; }
    const TunnelWorld& world() const { return world_; }
    const TrimResult& trim() const { return trim_; }
    const AircraftState& state() const { return state_; }
    int step_count() const { return steps_; }
    bool episode_over() const { return done_; }
    double claimed_reward_total() const { return ledger_.total(); }

    Space observation_space() const;
    Space action_space() const;

    ControlRequest request_from_action(const Action& action) const {
        return tunnel::request_from_action(config_.action_dims, action, trim_.request);
    }
    Action action_from_request(const ControlRequest& request) const {
        return tunnel::action_from_request(config_.action_dims, request, trim_.request);
    }

private:
    StepInfo make_info() const;

    EnvConfig config_;
    TunnelWorld world_;
    TrimResult trim_;
    std::mt19937_64 rng_;
    AircraftState state_;
    ControlRequest last_request_;
    std::deque<RangeImage> history_;
    GateLedger ledger_;
    int steps_ = 0;
    bool started_ = false;
    bool done_ = false;
};

/// Uniform double in [0, 1) from the top 53 bits of one generator draw.
double uniform01(std::mt19937_64& rng);

}  // namespace tunnel
