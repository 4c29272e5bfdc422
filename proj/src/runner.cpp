#include "tunnel/runner.hpp"

#include "tunnel/error.hpp"
#include "tunnel/experts.hpp"
#include "tunnel/mission.hpp"
#include "tunnel/render.hpp"

#include <cstdio>
#include <filesystem>
#include <algorithm>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>

namespace tunnel {

namespace {

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError(dir, "cannot create directory: " + ec.message());
}

std::vector<std::string> tunnel_flags(const StepResult& r) {
    std::vector<std::string> f;
    if (r.info.collision) f.push_back("collision");
    if (r.info.reached_end) f.push_back("reached_end");
    if (r.info.diverged) f.push_back("diverged");
    return f;
}

std::string tunnel_label(const StepResult& r) {
    if (r.info.diverged) return "diverged";
    if (r.info.collision) return "collision";
    if (r.info.reached_end) return "reached_end";
    return "truncated";
}

std::vector<std::string> mission_flags(const MissionStepResult& r) {
    std::vector<std::string> f;
    if (r.info.success) f.push_back("success");
    if (r.info.trespass) f.push_back("trespass");
    if (r.info.terrain_collision) f.push_back("terrain");
    if (r.info.out_of_bounds) f.push_back("out_of_bounds");
    if (r.info.diverged) f.push_back("diverged");
    if (r.info.replanned) f.push_back("replanned");
    return f;
}

std::string mission_label(const MissionStepResult& r) {
    if (r.info.diverged) return "diverged";
    if (r.info.trespass) return "trespass";
    if (r.info.terrain_collision) return "terrain";
    if (r.info.out_of_bounds) return "out_of_bounds";
    if (r.info.success) return "success";
    return "truncated";
}

void write_file(const std::string& path, const std::string& text) { write_text_file(path, text); }

}  // namespace

std::string frame_filename(int episode, int step) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "frame_e%03d_s%05d.svg", episode, step);
    return buf;
}

ActionTape tape_from_trajectory(const Trajectory& t) {
    ActionTape tape;
    for (const auto& r : t.records) {
        if (r.episode < 0) throw IoError("trajectory", "negative episode id");
        while (static_cast<int>(tape.size()) <= r.episode) tape.emplace_back();
        tape[static_cast<std::size_t>(r.episode)].push_back(r.action);
    }
    return tape;
}

namespace {

struct EpisodeRun {
    std::vector<TrajectoryRecord> records;
    std::string label = "tape_end";
    int steps = 0;
    double reward = 0.0;
};

EpisodeRun run_one(const RunConfig& config, int ep, const std::vector<Action>* tape) {
    EpisodeRun run;
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(ep);
    auto frame_due = [&](int step) { return config.render && step % config.render_every == 0; };
    const bool keep = !config.trajectory_path.empty();
    int step = 0;

    if (config.environment == EnvironmentKind::Tunnel) {
        TunnelEnv env(config.env);
        auto expert = make_expert(config.expert);
        env.reset(seed);
        expert->reset(env);
        if (frame_due(0)) {
            write_file(config.frames_dir + "/" + frame_filename(ep, 0), render_frame(env.state(), env.world(), 0));
        }
        for (;;) {
            Action action;
            if (tape) {
                if (static_cast<std::size_t>(step) >= tape->size()) break;
                action = (*tape)[static_cast<std::size_t>(step)];
            } else {
                action = env.action_from_request(expert->act(env));
            }
            const auto r = env.step(action);
            step = r.info.step;
            run.reward += r.reward;
            if (keep) {
                run.records.push_back({ep, step, r.info.state, action, r.info.request, r.reward, r.terminated,
                                       r.truncated, tunnel_flags(r)});
            }
            if (frame_due(step)) {
                write_file(config.frames_dir + "/" + frame_filename(ep, step),
                           render_frame(env.state(), env.world(), step));
            }
            if (r.terminated || r.truncated) {
                run.label = tunnel_label(r);
                break;
            }
        }
    } else {
        MissionEnv env(config.mission);
        env.reset(seed);
        auto mission_frame = [&](int s) {
            MissionFrame f{env.state(), env.footprint(), env.path().waypoints, s};
            write_file(config.frames_dir + "/" + frame_filename(ep, s), render_frame(f, env.world()));
        };
        if (frame_due(0)) mission_frame(0);
        for (;;) {
            MissionAction act;
            if (tape) {
                if (static_cast<std::size_t>(step) >= tape->size()) break;
                act.autopilot = false;
                act.agent = (*tape)[static_cast<std::size_t>(step)];
            }
            const auto r = env.step(act);
            step = r.info.step;
            run.reward += r.reward;
            if (keep) {
                run.records.push_back({ep, step, r.info.state, r.info.action, r.info.request, r.reward, r.terminated,
                                       r.truncated, mission_flags(r)});
            }
            if (frame_due(step)) mission_frame(step);
            if (r.terminated || r.truncated) {
                run.label = mission_label(r);
                break;
            }
        }
    }
    run.steps = step;
    return run;
}

}  // namespace

RunSummary run_episodes(const RunConfig& config, const RunOptions& options) {
    const bool replay = options.replay.has_value();
    const int episodes = replay ? static_cast<int>(options.replay->size()) : config.episodes;

    TrajectoryHeader header;
    header.environment = to_string(config.environment);
    header.config_hash = config_hash(config);
    header.seed = config.seed;
    header.source = !options.source.empty() ? options.source : (replay ? "replay" : config.expert);
    std::unique_ptr<TrajectoryWriter> writer;
    if (!config.trajectory_path.empty()) writer = std::make_unique<TrajectoryWriter>(config.trajectory_path, header);
    if (config.render) ensure_dir(config.frames_dir);

    // Workers claim episodes in order; finished episodes are folded into the
    // summary and the trajectory file strictly by episode index.
    std::vector<std::optional<EpisodeRun>> done(static_cast<std::size_t>(std::max(episodes, 0)));
    std::exception_ptr failure;
    std::mutex mu;
    int next = 0, flushed = 0;
    RunSummary summary;

    auto drain = [&] {  // caller holds mu
        while (flushed < episodes && done[static_cast<std::size_t>(flushed)]) {
            auto& run = *done[static_cast<std::size_t>(flushed)];
            if (writer) {
                for (const auto& r : run.records) writer->write(r);
            }
            summary.steps += run.steps;
            summary.total_reward += run.reward;
            ++summary.outcomes[run.label];
            ++summary.episodes;
            run = EpisodeRun{};
            ++flushed;
        }
    };
    auto worker = [&] {
        for (;;) {
            int ep;
            {
                std::lock_guard lock(mu);
                if (failure || next >= episodes) return;
                ep = next++;
            }
            try {
                const std::vector<Action>* tape = replay ? &(*options.replay)[static_cast<std::size_t>(ep)] : nullptr;
                EpisodeRun run = run_one(config, ep, tape);
                std::lock_guard lock(mu);
                done[static_cast<std::size_t>(ep)] = std::move(run);
                drain();
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    const int jobs = std::clamp(options.jobs, 1, std::max(episodes, 1));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return summary;
}

Json to_json(const RunSummary& s) {
    Json outcomes = Json::object();
    for (const auto& [k, v] : s.outcomes) outcomes[k] = v;
    return {{"episodes", s.episodes}, {"steps", s.steps}, {"outcomes", outcomes}, {"total_reward", s.total_reward}};
}

std::size_t render_trajectory(const Trajectory& t, const RunConfig& config, const std::string& out_dir, int every) {
    if (every < 1) throw UsageError("render: --every must be >= 1");
    if (t.header.environment != to_string(config.environment)) {
        throw UsageError("render: trajectory is for the " + t.header.environment + " environment but the config selects " +
                         to_string(config.environment));
    }
    ensure_dir(out_dir);
    std::size_t written = 0;
    if (config.environment == EnvironmentKind::Tunnel) {
        const TunnelWorld world(config.env.tunnel);
        for (const auto& r : t.records) {
            if (r.step % every != 0) continue;
            write_file(out_dir + "/" + frame_filename(r.episode, r.step), render_frame(r.state, world, r.step));
            ++written;
        }
        return written;
    }

    // Mission: rebuild the scene and replay perception along the recorded poses.
    int episode = -1;
    MissionWorld world;
    MissionPath path;
    for (const auto& r : t.records) {
        const Vec2 pos{r.state.pn, r.state.pe};
        if (r.episode != episode) {
            episode = r.episode;
            world = build_mission(config.mission, t.header.seed + static_cast<std::uint64_t>(episode));
            path = plan_mission(world, config.mission, world.start);
        }
        const auto fp = sensor_footprint(pos, r.state.psi, config.mission.forward_sensor);
        if (update_perception(fp, world.true_eob, world.perceived_eob)) path = plan_mission(world, config.mission, pos);
        if (r.step % every != 0) continue;
        write_file(out_dir + "/" + frame_filename(r.episode, r.step),
                   render_frame(MissionFrame{r.state, fp, path.waypoints, r.step}, world));
        ++written;
    }
    return written;
}

}  // namespace tunnel
