// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Every check uses an oracle or count independent of the
// code under test where one exists (see oracles.hpp).
#include "oracles.hpp"

#include "tunnel/env.hpp"
#include "tunnel/experts.hpp"
#include "tunnel/f16_model.hpp"
#include "tunnel/flcs.hpp"
#include "tunnel/integrator.hpp"
#include "tunnel/mission.hpp"
#include "tunnel/planner.hpp"
#include "tunnel/runner.hpp"
#include "tunnel/sensor.hpp"
#include "tunnel/trim.hpp"
#include "tunnel/tunnel_world.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace tunnel;
using namespace tunnel::oracle;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// --- dynamics ---------------------------------------------------------------

Verdict dynamics_convergence() {
    const auto t0 = Clock::now();
    const TrimResult trim = trim_solve(500.0, 1000.0);
    SurfaceDeflections u = trim.surfaces;  // 1 s maneuver: pitch, roll and yaw inputs
    u.elevator -= 3.0;
    u.aileron = 2.0;
    u.rudder = -1.5;
    const auto reference = integrate_open_loop(trim.state, u, 1.0, 100000);
    std::vector<double> err;
    for (int n : {25, 50, 100, 200}) err.push_back(dynamic_distance(integrate_open_loop(trim.state, u, 1.0, n), reference));
    bool ok = true;
    std::string slopes;
    for (std::size_t i = 0; i + 1 < err.size(); ++i) {
        const double s = std::log2(err[i] / err[i + 1]);
        ok = ok && std::abs(s - 4.0) <= 0.3;
        slopes += (i ? "," : "") + fmt("%.3f", s);
    }
    const double elapsed = seconds_since(t0);
    ok = ok && elapsed < 10.0;
    return {ok, "slopes=" + slopes + " (4+-0.3) runtime=" + fmt("%.2f", elapsed) + "s (<10)"};
}

Verdict trim_fidelity() {
    const TrimResult t = trim_solve(500.0, 1000.0);
    // Oracle: evaluate the derivatives at the solution directly; everything
    // except pn, pe and the integrators must vanish for level steady flight.
    const StateDerivative d = f16::derivatives(t.state, t.surfaces);
    double sum = 0.0;
    for (std::size_t i : {0, 1, 2, 3, 4, 5, 6, 7, 8, 11, 12}) sum += d[i] * d[i];
    const double oracle = std::sqrt(sum);
    // The closed loop must command the trim surfaces at the trim state.
    const SurfaceDeflections cl = flcs::control_law(t.state, t.request);
    const double surf_err = std::max({std::abs(cl.elevator - t.surfaces.elevator),
                                      std::abs(cl.aileron - t.surfaces.aileron),
                                      std::abs(cl.rudder - t.surfaces.rudder)});
    AircraftState x = t.state;
    double dh = 0.0, dv = 0.0;
    for (int k = 0; k < 300; ++k) {  // 10 s at dt = 1/30
        x = step_rk4(x, t.request, 1.0 / 30.0, 3);
        dh = std::max(dh, std::abs(x.h - t.state.h));
        dv = std::max(dv, std::abs(x.vt - t.state.vt));
    }
    const bool ok = t.residual < 1e-4 && oracle < 1e-4 && surf_err < 1e-6 && dh < 10.0 && dv < 1.0;
    return {ok, "residual=" + fmt("%.2e", t.residual) + " oracle=" + fmt("%.2e", oracle) + " (<1e-4) hold: dh=" +
                    fmt("%.4f", dh) + "ft (<10) dv=" + fmt("%.4f", dv) + "ft/s (<1)"};
}

// --- world ------------------------------------------------------------------

Verdict sensor_exactness() {
    const TunnelWorld w{TunnelConfig{}};
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(-1.0, 1.0), unit(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Position p{unit(rng) * 9000.0, u(rng) * (w.half_width() - 0.5),
                         w.center_altitude() + u(rng) * (w.half_height() - 0.5)};
        const Attitude a{u(rng) * kPi, u(rng) * 1.4, u(rng) * kPi};
        const double az = u(rng) * 180.0, el = u(rng) * 90.0;
        worst = std::max(worst, std::abs(ray_distance(p, a, az, el, w) - marched_distance(p, a, az, el, w, kDefaultMaxRange)));
    }
    AircraftState s;
    s.vt = 500.0;
    s.pn = 100.0;
    s.h = w.center_altitude();
    const auto img = sensor_scan(s, SensorConfig::dense(), w);
    const bool ok = worst < 0.02 && img.ranges.size() == 961 && img.rows == 31 && img.cols == 31;
    return {ok, "max |ray - march| over 1000 poses=" + fmt("%.5f", worst) + "ft (<0.02) default scan=" +
                    std::to_string(img.rows) + "x" + std::to_string(img.cols) + "=" + std::to_string(img.ranges.size())};
}

Verdict reward_accounting() {
    // Oracle: 100 + 200 + ... + 38000 = 100 * n(n+1)/2 with n = 380.
    const double series = 100.0 * 380.0 * 381.0 / 2.0;
    EnvConfig cfg;
    cfg.sensor = SensorConfig::sparse();
    cfg.reward_mode = RewardMode::TargetGates;
    TunnelEnv env(cfg);
    PidExpert pid;
    env.reset(0);
    pid.reset(env);
    double total = 0.0;
    std::multiset<std::size_t> claimed;
    bool reached = false;
    for (;;) {
        const auto r = env.step(env.action_from_request(pid.act(env)));
        total += r.reward;
        claimed.insert(r.info.gates_claimed.begin(), r.info.gates_claimed.end());
        if (r.terminated || r.truncated) {
            reached = r.info.reached_end;
            break;
        }
    }
    bool once = claimed.size() == 380;
    for (std::size_t g : claimed) once = once && claimed.count(g) == 1;

    // Claim-once under backward flight: re-crossing gates pays nothing.
    const TunnelWorld world{cfg.tunnel};
    GateLedger ledger(world.gates().size());
    const auto fwd = ledger.claim(0.0, 2000.0, world);
    const auto back = ledger.claim(2000.0, 500.0, world);
    const auto again = ledger.claim(500.0, 2500.0, world);
    once = once && !fwd.empty() && back.empty() && again.size() == gates_passed(2000.0, 2500.0, world).size();

    const bool ok = reached && total == series && total == 7239000.0 && once;
    return {ok, "episode total=" + fmt("%.1f", total) + " series=" + fmt("%.1f", series) +
                    " gates claimed=" + std::to_string(claimed.size()) + "/380 once=" + (once ? "yes" : "no")};
}

// --- experts ----------------------------------------------------------------

struct Tally {
    int reached = 0, collision = 0, diverged = 0, truncated = 0, error = 0;
};

Tally tally(const std::vector<EpisodeTrace>& traces) {
    Tally t;
    for (const auto& e : traces) {
        switch (e.outcome) {
            case Outcome::ReachedEnd: ++t.reached; break;
            case Outcome::Collision: ++t.collision; break;
            case Outcome::Diverged: ++t.diverged; break;
            case Outcome::Truncated: ++t.truncated; break;
            case Outcome::Error: ++t.error; break;
        }
    }
    return t;
}

std::string describe(const Tally& t, int n) {
    return "reached_end=" + std::to_string(t.reached) + "/" + std::to_string(n) + " collision=" +
           std::to_string(t.collision) + " diverged=" + std::to_string(t.diverged) + " truncated=" +
           std::to_string(t.truncated) + " error=" + std::to_string(t.error);
}

Verdict pid_expert_centered() {
    EnvConfig cfg;
    cfg.sensor = SensorConfig::sparse();  // the expert reads state only; scan size does not matter
    cfg.init_randomization = InitRandomization::None;
    TunnelEnv env(cfg);
    PidExpert pid;
    const Tally t = tally(rollout_expert(env, pid, 20, 1000));
    return {t.reached == 20 && t.collision == 0, describe(t, 20)};
}

Verdict autopilot_ring() {
    EnvConfig cfg;
    cfg.sensor = SensorConfig::sparse();
    cfg.init_randomization = InitRandomization::Ring;
    cfg.ring_displacement_factor = 1.5;
    TunnelEnv env(cfg);
    AutopilotExpert ap;
    const Tally t = tally(rollout_expert(env, ap, 100, 2000));
    return {t.reached >= 95, describe(t, 100) + " (need >=95)"};
}

// --- mission ----------------------------------------------------------------

// Shortest distance from a circle centre to a segment.
double segment_distance(Vec2 a, Vec2 b, Vec2 c) {
    const double dx = b.pn - a.pn, dy = b.pe - a.pe;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0.0 ? ((c.pn - a.pn) * dx + (c.pe - a.pe) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(a.pn + t * dx - c.pn, a.pe + t * dy - c.pe);
}

Verdict planner_optimality() {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> pick(0, 29);
    int agree = 0, solved = 0;
    for (int i = 0; i < 200; ++i) {
        PlanGrid g(30, 30);
        for (int r = 0; r < 30; ++r)
            for (int c = 0; c < 30; ++c) g.set_blocked({r, c}, u(rng) < 0.2);
        const Cell s{pick(rng), pick(rng)}, t{pick(rng), pick(rng)};
        const auto plan = astar_plan(g, s, t);
        const auto ref = dijkstra(g, s, t);
        bool same = plan.found() == ref.has_value();
        if (same && ref) {
            ++solved;
            same = plan.orthogonal_steps == ref->orth && plan.diagonal_steps == ref->diag &&
                   std::abs(plan.cost() - ref->value()) < 1e-9;
        }
        agree += same;
    }

    // Default scene, both EOB variants, 50 seeds each: every planned segment
    // keeps clear of each perceived active zone grown by the aircraft radius.
    int scenes = 0, clear = 0;
    double min_margin = 1e300;
    for (double offset : {0.0, 1.5}) {
        MissionConfig mc;
        mc.perceived_offset_radii = offset;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const MissionWorld w = build_mission(mc, seed);
            const MissionPath p = plan_mission(w, mc, w.start);
            ++scenes;
            if (!p.plan.found()) continue;
            bool ok = true;
            for (std::size_t k = 0; k + 1 < p.waypoints.size(); ++k) {
                for (const auto& z : w.perceived_eob) {
                    if (!z.active) continue;
                    const double m =
                        segment_distance(p.waypoints[k], p.waypoints[k + 1], z.center) - (z.radius + mc.aircraft_radius);
                    min_margin = std::min(min_margin, m);
                    ok = ok && m > 0.0;
                }
            }
            clear += ok;
        }
    }
    const bool ok = agree == 200 && solved > 100 && clear == scenes;
    return {ok, "A*==Dijkstra on " + std::to_string(agree) + "/200 grids (" + std::to_string(solved) +
                    " solvable); scene paths clear of inflated zones " + std::to_string(clear) + "/" +
                    std::to_string(scenes) + " min margin=" + fmt("%.0f", min_margin) + "ft"};
}

struct MissionTally {
    int success = 0, trespass = 0, other = 0;
};

MissionTally mission_suite(double offset, int seeds) {
    MissionConfig mc;
    mc.perceived_offset_radii = offset;
    MissionTally t;
    for (int seed = 0; seed < seeds; ++seed) {
        MissionEnv env(mc);
        env.reset(static_cast<std::uint64_t>(seed));
        bool trespassed = false;
        for (;;) {
            const auto r = env.step({});
            trespassed = trespassed || r.info.trespass;
            if (r.terminated || r.truncated) {
                if (r.info.success) ++t.success;
                else if (!trespassed) ++t.other;
                break;
            }
        }
        t.trespass += trespassed;
    }
    return t;
}

Verdict mission_perfect_eob() {
    const MissionTally t = mission_suite(0.0, 50);
    return {t.trespass == 0 && t.success >= 48,
            "goal reached=" + std::to_string(t.success) + "/50 (need >=48, 95%) trespasses=" +
                std::to_string(t.trespass) + " (need 0) other=" + std::to_string(t.other)};
}

Verdict mission_stale_eob() {
    const MissionTally t = mission_suite(1.5, 50);
    return {t.trespass >= 1, "trespasses=" + std::to_string(t.trespass) + "/50 (need >=1) goal reached=" +
                                 std::to_string(t.success) + "/50"};
}

// --- determinism ------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Verdict determinism() {
    const fs::path dir = fs::temp_directory_path() / "tunnel_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    bool ok = true;
    std::string detail;
    for (EnvironmentKind kind : {EnvironmentKind::Tunnel, EnvironmentKind::Mission}) {
        RunConfig c;
        c.environment = kind;
        c.env.sensor = SensorConfig::sparse();
        c.env.init_randomization = InitRandomization::Ring;
        c.mission.max_steps = 1500;
        c.episodes = 3;
        c.seed = 77;
        const std::string tag = to_string(kind);

        // Action tape: a recorded expert run, then perturbed deterministically.
        c.trajectory_path = (dir / (tag + "_source.jsonl")).string();
        run_episodes(c);
        ActionTape tape = tape_from_trajectory(read_trajectory(c.trajectory_path));
        std::mt19937_64 rng(5);
        std::normal_distribution<double> jitter(0.0, 0.05);
        for (auto& ep : tape)
            for (auto& a : ep)
                for (auto& v : a) v += jitter(rng);

        RunOptions replay;
        replay.replay = tape;
        std::string first;
        for (int rep = 0; rep < 2; ++rep) {
            c.trajectory_path = (dir / (tag + "_replay" + std::to_string(rep) + ".jsonl")).string();
            replay.jobs = rep == 0 ? 1 : 3;
            run_episodes(c, replay);
            const std::string bytes = slurp(c.trajectory_path);
            if (rep == 0) first = bytes;
            else ok = ok && !first.empty() && bytes == first;
        }
        const auto records = read_trajectory(c.trajectory_path).records.size();
        ok = ok && records > 0;
        detail += (detail.empty() ? "" : "; ") + tag + ": 2 replays, " + std::to_string(records) + " records, " +
                  std::to_string(first.size()) + " bytes identical=" + (ok ? "yes" : "no");
    }
    fs::remove_all(dir);
    return {ok, detail};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Verdict()> run;
    };
    const std::vector<Criterion> criteria{
        {"dynamics-convergence", dynamics_convergence},
        {"trim-fidelity", trim_fidelity},
        {"sensor-exactness", sensor_exactness},
        {"reward-accounting", reward_accounting},
        {"pid-expert", pid_expert_centered},
        {"autopilot-expert", autopilot_ring},
        {"planner-optimality", planner_optimality},
        {"mission-perfect-eob", mission_perfect_eob},
        {"mission-stale-eob", mission_stale_eob},
        {"determinism", determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = Clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += !v.pass;
        std::printf("%s  %-20s %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", c.name, v.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    std::printf("%s: %zu/%zu criteria passed\n", failed ? "FAILED" : "OK", criteria.size() - failed, criteria.size());
    return failed ? 1 : 0;
}
