#include "tunnel/env.hpp"

#include "tunnel/error.hpp"
#include "tunnel/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tunnel {

std::string to_string(RewardMode mode) {
    return mode == RewardMode::CenterlinePenalty ? "centerline_penalty" : "target_gates";
}

std::string to_string(ObservationMode mode) {
    switch (mode) {
        case ObservationMode::SensorOnly: return "sensor_only";
        case ObservationMode::SensorPlusState: return "sensor_plus_state";
        case ObservationMode::StateOnly: return "state_only";
        case ObservationMode::ZeroMasked: return "zero_masked";
    }
    return "?";
}

std::string to_string(ActionDim dim) {
    switch (dim) {
        case ActionDim::Pitch: return "pitch";
        case ActionDim::Roll: return "roll";
        case ActionDim::Rudder: return "rudder";
        case ActionDim::Throttle: return "throttle";
    }
    return "?";
}

std::string to_string(InitRandomization mode) { return mode == InitRandomization::Ring ? "ring" : "none"; }

void EnvConfig::validate() const {
    sensor.validate();
    if (!(ring_displacement_factor >= 0.0) || !std::isfinite(ring_displacement_factor)) {
        throw ConfigError("ring_displacement_factor", "must be >= 0");
    }
    if (action_dims.empty()) throw ConfigError("action_dims", "must not be empty");
    auto has = [&](ActionDim d) { return std::count(action_dims.begin(), action_dims.end(), d); };
    if (has(ActionDim::Pitch) != 1 || has(ActionDim::Roll) != 1) {
        throw ConfigError("action_dims", "must contain pitch and roll exactly once");
    }
    if (has(ActionDim::Rudder) > 1 || has(ActionDim::Throttle) > 1) {
        throw ConfigError("action_dims", "duplicate dimension");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt", "must be positive");
    if (substeps < 1) throw ConfigError("substeps", "must be >= 1");
    if (max_steps < 1) throw ConfigError("max_steps", "must be >= 1");
    if (!(initial_speed > 0.0)) throw ConfigError("initial_speed", "must be positive");
    const double max_offset = ring_displacement_factor * tunnel.aircraft_radius;
    if (init_randomization == InitRandomization::Ring && max_offset + tunnel.aircraft_radius >= 2.0 * tunnel.wingspan) {
        throw ConfigError("ring_displacement_factor", "initial offset would start in collision");
    }
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<double> normalized_state(const AircraftState& s, double length) {
    const auto& k = kStateScales;
    return {s.vt / k.airspeed, s.alpha / k.angle, s.beta / k.angle, s.phi / k.angle, s.theta / k.angle,
            s.psi / k.angle, s.p / k.rate, s.q / k.rate, s.r / k.rate, s.pn / length, s.pe / length,
            s.h / length, s.pow / k.power, s.i_nz / k.integrator, s.i_ps / k.integrator, s.i_ny / k.integrator};
}

namespace {

bool has_sensor_block(ObservationMode m) { return m != ObservationMode::StateOnly; }
bool has_state_block(ObservationMode m) { return m != ObservationMode::SensorOnly; }

}  // namespace

Observation build_observation(const AircraftState& state, const std::deque<RangeImage>& history,
                              ObservationMode mode, const SensorConfig& sensor, double length) {
    if (history.size() != static_cast<std::size_t>(sensor.history_len)) {
        throw Error("build_observation: history length does not match the frame stack");
    }
    Observation obs;
    obs.reserve(history.size() * sensor.ray_count() + kStateSize);
    if (has_sensor_block(mode)) {
        for (const auto& frame : history) {
            if (frame.ranges.size() != sensor.ray_count()) throw Error("build_observation: frame shape mismatch");
            for (double r : frame.ranges) {
                obs.push_back(mode == ObservationMode::ZeroMasked ? 0.0 : r / sensor.max_range);
            }
        }
    }
    if (has_state_block(mode)) {
        const auto v = normalized_state(state, length);
        obs.insert(obs.end(), v.begin(), v.end());
    }
    return obs;
}

std::size_t observation_size(const EnvConfig& c) {
    std::size_t n = 0;
    if (has_sensor_block(c.observation_mode)) n += static_cast<std::size_t>(c.frame_stack()) * c.sensor.ray_count();
    if (has_state_block(c.observation_mode)) n += kStateSize;
    return n;
}

double compute_reward(RewardMode mode, const Transition& t) {
    if (mode == RewardMode::CenterlinePenalty) {
        const double offset = std::hypot(t.after.pe, t.after.h - t.center_altitude);
        return -offset * t.dt;
    }
    double sum = 0.0;
    for (double r : t.claimed_rewards) sum += r;
    return sum;
}

TunnelEnv::TunnelEnv(EnvConfig config)
    : config_((config.validate(), std::move(config))),
      world_(config_.tunnel),
      trim_(trim_solve(config_.initial_speed, config_.tunnel.center_altitude)),
      rng_(config_.seed) {}

ControlRequest request_from_action(const std::vector<ActionDim>& dims, const Action& action,
                                   const ControlRequest& trim) {
    if (action.size() != dims.size()) {
        throw UsageError("action has " + std::to_string(action.size()) + " elements, expected " +
                         std::to_string(dims.size()));
    }
    const auto& lim = kRequestLimits;
    ControlRequest req = trim;
    for (std::size_t i = 0; i < action.size(); ++i) {
        if (!std::isfinite(action[i])) throw UsageError("action contains a non-finite value");
        const double a = std::clamp(action[i], -1.0, 1.0);
        switch (dims[i]) {
            case ActionDim::Pitch: {
                const double nz0 = trim.nz_cmd;
                req.nz_cmd = a >= 0.0 ? nz0 + a * (lim.nz_max - nz0) : nz0 + a * (nz0 - lim.nz_min);
                break;
            }
            case ActionDim::Roll: req.ps_cmd = a * lim.ps_max; break;
            case ActionDim::Rudder: req.ny_r_cmd = a * lim.ny_r_max; break;
            case ActionDim::Throttle: req.throttle = 0.5 * (a + 1.0); break;
        }
    }
    return req;
}

Action action_from_request(const std::vector<ActionDim>& dims, const ControlRequest& request,
                           const ControlRequest& trim) {
    const auto& lim = kRequestLimits;
    Action out;
    for (auto dim : dims) {
        double a = 0.0;
        switch (dim) {
            case ActionDim::Pitch: {
                const double nz0 = trim.nz_cmd;
                const double d = request.nz_cmd - nz0;
                a = d >= 0.0 ? d / (lim.nz_max - nz0) : d / (nz0 - lim.nz_min);
                break;
            }
            case ActionDim::Roll: a = request.ps_cmd / lim.ps_max; break;
            case ActionDim::Rudder: a = request.ny_r_cmd / lim.ny_r_max; break;
            case ActionDim::Throttle: a = 2.0 * request.throttle - 1.0; break;
        }
        out.push_back(std::clamp(a, -1.0, 1.0));
    }
    return out;
}

Space TunnelEnv::observation_space() const {
    const std::size_t n = observation_size(config_);
    Space s{{n}, std::vector<double>(n, 0.0), std::vector<double>(n, 1.0)};
    if (has_state_block(config_.observation_mode)) {
        for (std::size_t i = n - kStateSize; i < n; ++i) {
            s.low[i] = -std::numeric_limits<double>::infinity();
            s.high[i] = std::numeric_limits<double>::infinity();
        }
    }
    return s;
}

Space TunnelEnv::action_space() const {
    const std::size_t k = config_.action_dims.size();
    return {{k}, std::vector<double>(k, -1.0), std::vector<double>(k, 1.0)};
}

StepInfo TunnelEnv::make_info() const {
    StepInfo info;
    info.step = steps_;
    info.state = state_;
    info.request = last_request_;
    return info;
}

ResetResult TunnelEnv::reset(std::optional<std::uint64_t> seed) {
    if (seed) rng_.seed(*seed);
    state_ = trim_.state;
    state_.pn = 0.0;
    state_.pe = 0.0;
    state_.h = config_.tunnel.center_altitude;
    if (config_.init_randomization == InitRandomization::Ring) {
        const double angle = 2.0 * kPi * uniform01(rng_);
        const double radius = config_.ring_displacement_factor * world_.aircraft_radius();
        state_.pe += radius * std::cos(angle);
        state_.h += radius * std::sin(angle);
    }
    last_request_ = trim_.request;
    ledger_ = GateLedger(world_.gates().size());
    steps_ = 0;
    started_ = true;
    done_ = false;

    const auto frame = sensor_scan(state_, config_.sensor, world_);
    history_.assign(static_cast<std::size_t>(config_.frame_stack()), frame);

    ResetResult out;
    out.observation =
        build_observation(state_, history_, config_.observation_mode, config_.sensor, world_.length());
    out.info = make_info();
    return out;
}

StepResult TunnelEnv::step(const Action& action) {
    if (!started_) throw UsageError("step() called before reset()");
    if (done_) throw UsageError("step() called after the episode ended; call reset()");

    const ControlRequest request = request_from_action(action);
    last_request_ = request;
    const AircraftState before = state_;
    StepResult out;

    try {
        state_ = step_rk4(state_, request, config_.dt, config_.substeps);
    } catch (const DynamicsDiverged& e) {
        out.info.diverged = true;
        out.info.diverged_reason = e.what();
    }
    if (!out.info.diverged) {
        if (std::abs(state_.theta) >= 85.0 * kDegToRad) {
            out.info.diverged = true;
            out.info.diverged_reason = "pitch attitude limit";
        } else if (state_.vt < 100.0 || std::abs(state_.alpha) > 45.0 * kDegToRad) {
            out.info.diverged = true;
            out.info.diverged_reason = "left the aerodynamic envelope";
        }
    }
    ++steps_;

    const Position pos{state_.pn, state_.pe, state_.h};
    Transition tr{before, state_, {}, config_.dt, world_.center_altitude()};
    out.info.gates_claimed = ledger_.claim(before.pn, state_.pn, world_);
    for (std::size_t idx : out.info.gates_claimed) tr.claimed_rewards.push_back(world_.gates()[idx].reward);
    out.info.collision = collision_check(pos, world_);
    out.info.reached_end = state_.pn >= world_.length();

    // Once the aircraft has left the corridor the last frame is repeated.
    if (world_.contains(pos)) {
        history_.pop_front();
        history_.push_back(sensor_scan(state_, config_.sensor, world_));
    }

    out.reward = compute_reward(config_.reward_mode, tr);
    out.terminated = out.info.collision || out.info.reached_end || out.info.diverged;
    out.truncated = !out.terminated && steps_ >= config_.max_steps;
    done_ = out.terminated || out.truncated;

    out.observation = build_observation(state_, history_, config_.observation_mode, config_.sensor, world_.length());
    auto base = make_info();
    base.collision = out.info.collision;
    base.reached_end = out.info.reached_end;
    base.diverged = out.info.diverged;
    base.diverged_reason = std::move(out.info.diverged_reason);
    base.gates_claimed = std::move(out.info.gates_claimed);
    base.pn_progress = state_.pn - before.pn;
    out.info = std::move(base);
    return out;
}

}  // namespace tunnel
