#include "doctest.h"

#include "tunnel/config_io.hpp"
#include "tunnel/error.hpp"
#include "tunnel/experts.hpp"
#include "tunnel/integrator.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace tunnel;

namespace {

EnvConfig small_config() {
    EnvConfig c;
    c.sensor = SensorConfig::sparse();
    return c;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("tunnel_test_" + name)).string();
}

}  // namespace

TEST_CASE("pid law evaluates the published equations") {
    const auto zero = pid_law(0.0, 0.0, 0.0, 0.0);
    CHECK(zero.nz_cmd == 0.0);
    CHECK(zero.ps_cmd == 0.0);
    CHECK(pid_law(0.0, 0.0, 100.0, 10.0).nz_cmd == doctest::Approx(-2.2));
    CHECK(pid_law(-50.0, 0.0, 0.0, 0.0).ps_cmd == doctest::Approx(0.05));

    const PidGains g;
    CHECK(g.kp_y == -0.002);
    CHECK(g.kd_y == -0.2);
    CHECK(g.kp_x == -0.001);
    CHECK(g.kd_x == -0.1);
}

TEST_CASE("pid law is linear before clamping") {
    for (double c : {-3.0, 0.5, 2.0, 7.0}) {
        const auto a = pid_law(12.0, -1.5, 30.0, 4.0);
        const auto b = pid_law(c * 12.0, c * -1.5, c * 30.0, c * 4.0);
        CHECK(b.nz_cmd == doctest::Approx(c * a.nz_cmd));
        CHECK(b.ps_cmd == doctest::Approx(c * a.ps_cmd));
    }
}

TEST_CASE("pid expert clamps after the law and carries errors") {
    const auto world = make_tunnel();
    const auto trim = trim_solve(500.0, 1000.0);
    AircraftState s = trim.state;
    s.h = 1100.0;
    s.pe = -50.0;
    const auto out = pid_expert(s, {}, world, trim.request);
    // raw nz = -0.002*100 - 0.2*100 = -20.2 -> clamped to the lower limit
    CHECK(out.request.nz_cmd == kRequestLimits.nz_min);
    // raw ps = 0.05 + 5.0 exceeds pi
    CHECK(out.request.ps_cmd == kRequestLimits.ps_max);
    CHECK(out.request.throttle == trim.request.throttle);
    CHECK(out.request.ny_r_cmd == trim.request.ny_r_cmd);
    CHECK(out.errors.ey == 100.0);
    CHECK(out.errors.ex == -50.0);

    const auto next = pid_expert(s, out.errors, world, trim.request);
    CHECK(next.request.nz_cmd == doctest::Approx(-0.2));
    CHECK(next.request.ps_cmd == doctest::Approx(0.05));
}

TEST_CASE("pid altitude offset decays without divergence") {
    const auto world = make_tunnel();
    const auto trim = trim_solve(500.0, 1000.0);
    AircraftState s = trim.state;
    s.h += 20.0;
    PidErrors prev{0.0, 20.0};
    double peak_late = 0.0;
    for (int k = 0; k < 450; ++k) {  // 15 s at 30 Hz
        const auto out = pid_expert(s, prev, world, trim.request);
        prev = out.errors;
        s = step_rk4(s, out.request, 1.0 / 30.0, 3);
        REQUIRE(std::isfinite(s.h));
        if (k >= 300) peak_late = std::max(peak_late, std::abs(s.h - 1000.0));
    }
    CHECK(peak_late < 5.0);
    CHECK(std::abs(s.pe) < 1e-9);
}

TEST_CASE("autopilot signs and degenerate waypoint") {
    const auto trim = trim_solve(500.0, 1000.0);
    const auto s = trim.state;
    const auto ahead = waypoint_autopilot(s, {9114.0, 0.0, 1000.0}, trim);
    CHECK(std::abs(ahead.ps_cmd) < 1e-9);
    CHECK(ahead.nz_cmd == doctest::Approx(trim.request.nz_cmd).epsilon(1e-3));
    CHECK(ahead.throttle == doctest::Approx(trim.request.throttle));

    const auto east = waypoint_autopilot(s, {0.0, 5000.0, 1000.0}, trim);
    CHECK(east.ps_cmd > 0.5);
    const auto west = waypoint_autopilot(s, {0.0, -5000.0, 1000.0}, trim);
    CHECK(west.ps_cmd == doctest::Approx(-east.ps_cmd));
    const auto above = waypoint_autopilot(s, {3000.0, 0.0, 1500.0}, trim);
    CHECK(above.nz_cmd > trim.request.nz_cmd + 0.5);

    const auto same = waypoint_autopilot(s, {s.pn, s.pe, s.h}, trim);
    CHECK(same.nz_cmd == trim.request.nz_cmd);
    CHECK(same.ps_cmd == trim.request.ps_cmd);
    CHECK(same.throttle == trim.request.throttle);
}

TEST_CASE("ground velocity at trim points north") {
    const auto trim = trim_solve(500.0, 1000.0);
    const auto v = ground_velocity(trim.state);
    CHECK(v.north == doctest::Approx(500.0));
    CHECK(v.east == doctest::Approx(0.0));
    CHECK(v.up == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("rollouts: labels, determinism, zero episodes") {
    EnvConfig c = small_config();
    c.init_randomization = InitRandomization::Ring;
    TunnelEnv env(c);
    AutopilotExpert ap;
    CHECK(rollout_expert(env, ap, 0, 0).empty());
    const auto a = rollout_expert(env, ap, 3, 42);
    const auto b = rollout_expert(env, ap, 3, 42);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].seed == 42 + i);
        CHECK(a[i].outcome == Outcome::ReachedEnd);
        REQUIRE(a[i].records.size() == b[i].records.size());
        for (std::size_t k = 0; k < a[i].records.size(); ++k) {
            CHECK(a[i].records[k].observation == b[i].records[k].observation);
            CHECK(a[i].records[k].action == b[i].records[k].action);
            CHECK(a[i].records[k].state == b[i].records[k].state);
            CHECK(a[i].records[k].step == static_cast<int>(k));
        }
        CHECK(a[i].records.front().observation.size() == observation_size(c));
        CHECK(a[i].records.front().action.size() == c.action_dims.size());
    }

    EnvConfig short_cfg = small_config();
    short_cfg.max_steps = 10;
    TunnelEnv short_env(short_cfg);
    PidExpert pid;
    const auto t = rollout_expert(short_env, pid, 2, 0);
    CHECK(t[0].outcome == Outcome::Truncated);
    CHECK(t[0].records.size() == 10);
    CHECK(summarize(t).truncated == 2);

    CHECK_THROWS_AS(make_expert("nope"), ConfigError);
    CHECK(make_expert("pid")->name() == "pid");
}

TEST_CASE("dataset round trip is bit exact") {
    EnvConfig c = small_config();
    c.init_randomization = InitRandomization::Ring;
    c.observation_mode = ObservationMode::SensorPlusState;
    TunnelEnv env(c);
    AutopilotExpert ap;
    Dataset ds{config_hash(c), "autopilot", rollout_expert(env, ap, 2, 7)};
    // Mix in a labelled failure so the summary covers more than one label.
    EnvConfig t = small_config();
    t.max_steps = 4;
    TunnelEnv env2(t);
    PidExpert pid;
    auto extra = rollout_expert(env2, pid, 1, 0);
    extra[0].episode = 2;
    for (auto& r : extra[0].records) r.episode = 2;
    ds.episodes.push_back(extra[0]);

    const auto path = temp_path("dataset.jsonl");
    const auto summary = export_dataset(ds, path);
    CHECK(summary.episodes == 3);
    CHECK(summary.reached_end == 2);
    CHECK(summary.truncated == 1);
    CHECK(summary.records == ds.episodes[0].records.size() + ds.episodes[1].records.size() + 4);

    const auto back = import_dataset(path);
    CHECK(back.config_hash == ds.config_hash);
    CHECK(back.expert == "autopilot");
    REQUIRE(back.episodes.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& x = ds.episodes[i];
        const auto& y = back.episodes[i];
        CHECK(x.seed == y.seed);
        CHECK(x.outcome == y.outcome);
        CHECK(x.total_reward == y.total_reward);
        REQUIRE(x.records.size() == y.records.size());
        bool exact = true;
        for (std::size_t k = 0; k < x.records.size(); ++k) {
            exact = exact && x.records[k].observation == y.records[k].observation &&
                    x.records[k].action == y.records[k].action && x.records[k].state == y.records[k].state &&
                    x.records[k].step == y.records[k].step && x.records[k].outcome == y.records[k].outcome;
        }
        CHECK(exact);
    }
    CHECK(summarize(back.episodes) == summary);
    std::filesystem::remove(path);
}

TEST_CASE("dataset errors carry the path") {
    Dataset ds;
    CHECK_THROWS_AS(export_dataset(ds, "/nonexistent-dir/x.jsonl"), IoError);
    CHECK_THROWS_AS(import_dataset("/nonexistent-dir/x.jsonl"), IoError);

    const auto path = temp_path("bad.jsonl");
    {
        std::ofstream out(path);
        out << R"({"format":"tunnel-dataset","version":1,"config_hash":"0","expert":"pid","episodes":1,"records":1})"
            << "\n{\"type\":\"episode\",\"episode\":0,\"seed\":0,\"outcome\":\"collision\",\"error\":\"\","
               "\"total_reward\":0,\"steps\":1}\n{not json\n";
    }
    try {
        import_dataset(path);
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find(":3") != std::string::npos);
    }
    std::filesystem::remove(path);
}
