// tunnelctl: command-line driver for the tunnel and mission environments.
#include "tunnel/config_io.hpp"
#include "tunnel/error.hpp"
#include "tunnel/experts.hpp"
#include "tunnel/mission.hpp"
#include "tunnel/runner.hpp"
#include "tunnel/trajectory.hpp"
#include "tunnel/trim.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

using namespace tunnel;

namespace {

constexpr int kExitError = 1;
constexpr int kExitUnreachable = 2;

// Flags shared by run and rollout; each overrides the config file when given.
struct CommonFlags {
    std::string config;
    std::optional<std::string> env;
    std::optional<std::string> expert;
    std::optional<int> episodes;
    std::optional<std::uint64_t> seed;

    void add(CLI::App* cmd) {
        cmd->add_option("-c,--config", config, "JSON run config (defaults when omitted)")->check(CLI::ExistingFile);
        cmd->add_option("--env", env, "tunnel | mission");
        cmd->add_option("--expert", expert, "pid | autopilot");
        cmd->add_option("-n,--episodes", episodes, "episode count");
        cmd->add_option("-s,--seed", seed, "base seed; episode i uses seed + i");
    }

    RunConfig resolve() const {
        RunConfig c = config.empty() ? RunConfig{} : load_config(config);
        if (env) {
            if (*env == "tunnel") c.environment = EnvironmentKind::Tunnel;
            else if (*env == "mission") c.environment = EnvironmentKind::Mission;
            else throw ConfigError("environment", "must be 'tunnel' or 'mission', got '" + *env + "'");
        }
        if (expert) c.expert = *expert;
        if (episodes) c.episodes = *episodes;
        if (seed) c.seed = *seed;
        return c;
    }
};

void print_summary(const RunSummary& s) { std::cout << to_json(s).dump(2) << '\n'; }

int cmd_run(const CommonFlags& flags, const std::string& out, const std::string& replay_path,
            const std::string& frames, int render_every, int jobs) {
    RunConfig config = flags.resolve();
    if (!out.empty()) config.trajectory_path = out;
    if (!frames.empty()) {
        config.frames_dir = frames;
        config.render = true;
    }
    if (render_every > 0) config.render_every = render_every;

    RunOptions options;
    options.jobs = jobs;
    if (!replay_path.empty()) {
        const Trajectory tape = read_trajectory(replay_path);
        if (!flags.env) {
            config.environment =
                tape.header.environment == "mission" ? EnvironmentKind::Mission : EnvironmentKind::Tunnel;
        }
        if (!flags.seed) config.seed = tape.header.seed;
        if (tape.header.config_hash != config_hash(config)) {
            std::cerr << "warning: " << replay_path << " was recorded with config " << tape.header.config_hash
                      << ", replaying with " << config_hash(config) << '\n';
        }
        options.replay = tape_from_trajectory(tape);
    }
    config.validate();
    print_summary(run_episodes(config, options));
    return 0;
}

int cmd_rollout(const CommonFlags& flags, const std::string& out) {
    RunConfig config = flags.resolve();
    if (!out.empty()) config.dataset_path = out;
    config.validate();
    if (config.environment != EnvironmentKind::Tunnel) {
        throw UsageError("rollout: dataset generation is defined for the tunnel environment");
    }
    if (config.dataset_path.empty()) throw UsageError("rollout: --out (or dataset_path in the config) is required");

    TunnelEnv env(config.env);
    auto expert = make_expert(config.expert);
    Dataset ds{config_hash(config.env), config.expert, rollout_expert(env, *expert, config.episodes, config.seed)};
    const DatasetSummary s = export_dataset(ds, config.dataset_path);
    std::cout << Json{{"dataset", config.dataset_path},
                      {"episodes", s.episodes},
                      {"records", s.records},
                      {"outcomes",
                       {{"reached_end", s.reached_end},
                        {"collision", s.collision},
                        {"diverged", s.diverged},
                        {"truncated", s.truncated},
                        {"error", s.error}}}}
                     .dump(2)
              << '\n';
    return 0;
}

int cmd_plan(const std::string& scene, std::uint64_t seed, bool perfect, const std::string& out) {
    MissionConfig mc;
    if (!scene.empty()) mc = mission_config_from_json(read_json_file(scene), scene);
    if (perfect) mc.perceived_offset_radii = 0.0;
    mc.validate();
    const MissionWorld world = build_mission(mc, seed);
    const MissionPath path = plan_mission(world, mc, world.start);

    Json cells = Json::array(), waypoints = Json::array(), zones = Json::array();
    for (const auto& c : path.plan.cells) cells.push_back({c.row, c.col});
    for (const auto& w : path.waypoints) waypoints.push_back({w.pn, w.pe});
    for (const auto& z : world.perceived_eob) {
        zones.push_back({{"id", z.id}, {"center", {z.center.pn, z.center.pe}}, {"radius", z.radius},
                         {"active", z.active}});
    }
    const Json doc{{"format", "tunnel-path"},
                   {"version", 1},
                   {"tool_version", kToolVersion},
                   {"scene_hash", json_hash(to_json(mc))},
                   {"seed", seed},
                   {"status", to_string(path.plan.status)},
                   {"cost_cells", path.plan.cost()},
                   {"orthogonal_steps", path.plan.orthogonal_steps},
                   {"diagonal_steps", path.plan.diagonal_steps},
                   {"expanded", path.plan.expanded},
                   {"start", {world.start.pn, world.start.pe}},
                   {"goal", {world.goal.center.pn, world.goal.center.pe}},
                   {"perceived_zones", zones},
                   {"cells", cells},
                   {"waypoints", waypoints}};
    if (!out.empty()) write_text_file(out, doc.dump(2) + "\n");
    else std::cout << doc.dump(2) << '\n';

    if (!path.plan.found()) {
        std::cerr << "plan: " << to_string(path.plan.status) << '\n';
        return kExitUnreachable;
    }
    std::cerr << "plan: found, " << path.plan.cells.size() << " cells, " << path.waypoints.size() << " waypoints\n";
    return 0;
}

int cmd_render(const std::string& trajectory, const std::string& config_path, const std::string& out_dir,
               int every) {
    const Trajectory t = read_trajectory(trajectory);
    RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (config_path.empty()) {
        config.environment = t.header.environment == "mission" ? EnvironmentKind::Mission : EnvironmentKind::Tunnel;
    }
    if (t.header.config_hash != config_hash(config)) {
        std::cerr << "warning: " << trajectory << " was recorded with config " << t.header.config_hash
                  << ", rendering with " << config_hash(config) << '\n';
    }
    const std::size_t n = render_trajectory(t, config, out_dir, every);
    std::cout << "wrote " << n << " frames to " << out_dir << '\n';
    return 0;
}

int cmd_trim(double vt, double alt) {
    const TrimResult r = trim_solve(vt, alt);
    const auto& s = r.state;
    std::cout << Json{{"vt", s.vt},
                      {"altitude", s.h},
                      {"alpha_deg", s.alpha * kRadToDeg},
                      {"theta_deg", s.theta * kRadToDeg},
                      {"throttle", r.request.throttle},
                      {"elevator_deg", r.surfaces.elevator},
                      {"aileron_deg", r.surfaces.aileron},
                      {"rudder_deg", r.surfaces.rudder},
                      {"power", s.pow},
                      {"nz_trim", r.request.nz_cmd},
                      {"residual", r.residual}}
                     .dump(2)
              << '\n';
    return r.residual < kTrimTolerance ? 0 : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tunnel flight environment driver"};
    app.require_subcommand(1);
    app.allow_extras(false);

    CommonFlags run_flags, rollout_flags;
    std::string run_out, replay, frames;
    int render_every = 0, jobs = 1;
    auto* run = app.add_subcommand("run", "Run episodes with an expert or replayed actions");
    run_flags.add(run);
    run->add_option("-o,--out", run_out, "trajectory file (JSON lines)");
    run->add_option("--replay", replay, "replay the actions of a trajectory file")->check(CLI::ExistingFile);
    run->add_option("--frames", frames, "write SVG frames to this directory");
    run->add_option("--render-every", render_every, "frame interval in steps")->check(CLI::PositiveNumber);
    run->add_option("-j,--jobs", jobs, "parallel episode workers")->check(CLI::PositiveNumber);

    std::string rollout_out;
    auto* rollout = app.add_subcommand("rollout", "Record an expert demonstration dataset");
    rollout_flags.add(rollout);
    rollout->add_option("-o,--out", rollout_out, "dataset file (JSON lines)");

    std::string scene, plan_out;
    std::uint64_t plan_seed = 0;
    bool perfect = false;
    auto* plan = app.add_subcommand("plan", "A* route on a mission scene");
    plan->add_option("--scene", scene, "mission scene JSON (defaults when omitted)")->check(CLI::ExistingFile);
    plan->add_option("-s,--seed", plan_seed, "scene jitter seed");
    plan->add_flag("--perfect-eob", perfect, "plan against the true zone positions");
    plan->add_option("-o,--out", plan_out, "path file (stdout when omitted)");

    std::string render_traj, render_config, render_dir;
    int every = 1;
    auto* render = app.add_subcommand("render", "SVG frames from a trajectory file");
    render->add_option("trajectory", render_traj, "trajectory file")->required()->check(CLI::ExistingFile);
    render->add_option("-c,--config", render_config, "run config used for the recording")->check(CLI::ExistingFile);
    render->add_option("-o,--out-dir", render_dir, "output directory")->required();
    render->add_option("--every", every, "frame interval in steps")->check(CLI::PositiveNumber);

    double vt = 500.0, alt = 1000.0;
    auto* trim = app.add_subcommand("trim", "Print the steady level-flight trim solution");
    trim->add_option("--vt", vt, "true airspeed, ft/s");
    trim->add_option("--alt", alt, "altitude, ft");

    std::string show_config;
    auto* config = app.add_subcommand("config", "Print the effective run config and its hash");
    config->add_option("-c,--config", show_config, "JSON run config")->check(CLI::ExistingFile);

    if (argc > 1 && argv[1][0] != '-') {
        const std::string name = argv[1];
        bool known = false;
        for (const auto* sub : app.get_subcommands({})) known = known || sub->get_name() == name;
        if (!known) {
            std::cerr << "error: unknown subcommand '" << name << "'\n\n" << app.help();
            return kExitError;
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return e.get_exit_code() != 0 ? e.get_exit_code() : kExitError;
    }

    try {
        if (*run) return cmd_run(run_flags, run_out, replay, frames, render_every, jobs);
        if (*rollout) return cmd_rollout(rollout_flags, rollout_out);
        if (*plan) return cmd_plan(scene, plan_seed, perfect, plan_out);
        if (*render) return cmd_render(render_traj, render_config, render_dir, every);
        if (*trim) return cmd_trim(vt, alt);
        if (*config) {
            const RunConfig c = show_config.empty() ? RunConfig{} : load_config(show_config);
            std::cout << dump_config(c);
            std::cerr << "config_hash " << config_hash(c) << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
