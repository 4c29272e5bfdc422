#include "doctest.h"
#include "oracles.hpp"

#include "tunnel/error.hpp"
#include "tunnel/sensor.hpp"
#include "tunnel/tunnel_world.hpp"

#include <cmath>
#include <random>

using namespace tunnel;
using namespace tunnel::oracle;

namespace {

Attitude level() { return {0.0, 0.0, 0.0}; }

}  // namespace

TEST_CASE("default tunnel geometry") {
    const auto w = make_tunnel();
    CHECK(w.length() == doctest::Approx(9114.0));
    CHECK(2.0 * w.half_width() == doctest::Approx(131.2));
    CHECK(2.0 * w.half_height() == doctest::Approx(131.2));
    CHECK(w.aircraft_radius() == doctest::Approx(16.4));
    REQUIRE(w.gates().size() == 380);
    CHECK(w.gates().back().reward == 38000.0);
    CHECK(w.gates().front().reward == 100.0);
    CHECK(w.gates().back().pn == w.length());
    const double spacing = 9114.0 / 380.0;
    CHECK(spacing == doctest::Approx(23.98).epsilon(1e-3));
    for (std::size_t k = 0; k < w.gates().size(); ++k) {
        CHECK(w.gates()[k].pn == doctest::Approx(spacing * static_cast<double>(k + 1)));
        if (k > 0) CHECK(w.gates()[k].pn > w.gates()[k - 1].pn);
    }
    // Arithmetic series 100 + 200 + ... + 38000.
    CHECK(w.total_gate_reward() == 7239000.0);
}

TEST_CASE("tunnel config errors name the field") {
    TunnelConfig bad;
    bad.aircraft_radius = 70.0;
    try {
        make_tunnel(bad);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "aircraft_radius");
    }
    TunnelConfig neg;
    neg.length = -1.0;
    CHECK_THROWS_AS(make_tunnel(neg), ConfigError);
}

TEST_CASE("ray distance closed-form cases") {
    const auto w = make_tunnel();
    const Position center{0.0, 0.0, 1000.0};
    CHECK(ray_distance(center, level(), 90.0, 0.0, w) == doctest::Approx(65.6));
    CHECK(ray_distance(center, level(), -90.0, 0.0, w) == doctest::Approx(65.6));
    CHECK(ray_distance(center, level(), 45.0, 0.0, w) == doctest::Approx(65.6 / std::sin(kPi / 4.0)));
    CHECK(ray_distance(center, level(), 45.0, 0.0, w) == doctest::Approx(92.77).epsilon(1e-4));
    CHECK(ray_distance(center, level(), 0.0, 0.0, w) == doctest::Approx(9114.0));
    CHECK(ray_distance(center, level(), 0.0, 0.0, w, 5000.0) == 5000.0);
    CHECK(ray_distance(center, level(), 0.0, 90.0, w) == doctest::Approx(65.6));
    // Rolling right 90 degrees turns the right-wing ray downward.
    CHECK(ray_distance({0.0, 0.0, 1010.0}, {kPi / 2, 0.0, 0.0}, 90.0, 0.0, w) == doctest::Approx(75.6));

    CHECK_THROWS_AS(ray_distance({0.0, 70.0, 1000.0}, level(), 0.0, 0.0, w), GeometryError);
    CHECK_THROWS_AS(ray_distance({9200.0, 0.0, 1000.0}, level(), 0.0, 0.0, w), GeometryError);
}

TEST_CASE("ray distance matches the marching oracle") {
    const auto w = make_tunnel();
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Position p{unit(rng) * 9000.0, u(rng) * (w.half_width() - 0.5),
                         w.center_altitude() + u(rng) * (w.half_height() - 0.5)};
        const Attitude a{u(rng) * kPi, u(rng) * 1.4, u(rng) * kPi};
        const double az = u(rng) * 180.0;
        const double el = u(rng) * 90.0;
        const double fast = ray_distance(p, a, az, el, w);
        const double slow = marched_distance(p, a, az, el, w, kDefaultMaxRange);
        worst = std::max(worst, std::abs(fast - slow));
    }
    CHECK(worst < 0.02);
}

TEST_CASE("sensor grid sizes") {
    const auto dense = SensorConfig::dense();
    dense.validate();
    CHECK(dense.az_nodes() == 31);
    CHECK(dense.el_nodes() == 31);
    CHECK(dense.ray_count() == 961);
    const auto sparse = SensorConfig::sparse();
    sparse.validate();
    CHECK(sparse.ray_count() == 9);
    CHECK(sparse.history_len == 4);

    SensorConfig bad;
    bad.az_step = 7.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    SensorConfig bad_range;
    bad_range.max_range = 0.0;
    CHECK_THROWS_AS(bad_range.validate(), ConfigError);
    SensorConfig bad_hist;
    bad_hist.history_len = 0;
    CHECK_THROWS_AS(bad_hist.validate(), ConfigError);
}

TEST_CASE("centered level scan is symmetric both ways") {
    const auto w = make_tunnel();
    AircraftState s;
    s.vt = 500.0;
    s.h = 1000.0;
    s.pn = 100.0;
    const auto img = sensor_scan(s, SensorConfig::dense(), w);
    REQUIRE(img.rows == 31);
    REQUIRE(img.cols == 31);
    for (std::size_t r = 0; r < img.rows; ++r) {
        for (std::size_t c = 0; c < img.cols; ++c) {
            CHECK(img.at(r, c) == doctest::Approx(img.at(r, img.cols - 1 - c)).epsilon(1e-12));
            CHECK(img.at(r, c) == doctest::Approx(img.at(img.rows - 1 - r, c)).epsilon(1e-12));
        }
    }
}

TEST_CASE("low and west aircraft sees more range right and above") {
    const auto w = make_tunnel();
    AircraftState s;
    s.vt = 500.0;
    s.pe = -30.0;
    s.h = 970.0;
    const auto img = sensor_scan(s, SensorConfig::dense(), w);
    const std::size_t mid = 15;
    for (std::size_t k = 1; k <= 15; ++k) {
        CHECK(img.at(mid, mid + k) > img.at(mid, mid - k));
        CHECK(img.at(mid + k, mid) > img.at(mid - k, mid));
    }
}

TEST_CASE("scan properties over random poses") {
    const auto w = make_tunnel();
    const auto cfg = SensorConfig::dense();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        AircraftState s;
        s.vt = 500.0;
        s.pn = 4000.0 + 4000.0 * u(rng);
        s.pe = u(rng) * 60.0;
        s.h = 1000.0 + u(rng) * 60.0;
        s.phi = u(rng) * 1.5;
        s.theta = u(rng) * 0.5;
        s.psi = u(rng) * 0.5;
        const auto img = sensor_scan(s, cfg, w);
        for (double r : img.ranges) {
            CHECK(r > 0.0);
            CHECK(r <= cfg.max_range);
        }

        // Mirror across the vertical midplane: columns reverse exactly.
        AircraftState m = s;
        m.pe = -s.pe;
        m.phi = -s.phi;
        m.psi = -s.psi;
        const auto mirrored = sensor_scan(m, cfg, w);
        bool exact = true;
        for (std::size_t r = 0; r < img.rows; ++r)
            for (std::size_t c = 0; c < img.cols; ++c) exact = exact && img.at(r, c) == mirrored.at(r, img.cols - 1 - c);
        CHECK(exact);
    }
}

TEST_CASE("moving toward a wall never lengthens rays on that side") {
    const auto w = make_tunnel();
    const auto cfg = SensorConfig::dense();
    AircraftState s;
    s.vt = 500.0;
    s.h = 1000.0;
    RangeImage prev = sensor_scan(s, cfg, w);
    for (double pe = 2.0; pe < 45.0; pe += 2.0) {
        s.pe = pe;
        const auto img = sensor_scan(s, cfg, w);
        for (std::size_t r = 0; r < img.rows; ++r) {
            for (std::size_t c = 16; c < img.cols; ++c) CHECK(img.at(r, c) <= prev.at(r, c));
        }
        prev = img;
    }
}

TEST_CASE("collision boundary") {
    const auto w = make_tunnel();
    const double limit = w.half_width() - w.aircraft_radius();
    CHECK_FALSE(collision_check({0.0, 0.0, 1000.0}, w));
    CHECK(collision_check({0.0, limit + 0.1, 1000.0}, w));
    CHECK_FALSE(collision_check({0.0, limit - 0.1, 1000.0}, w));
    CHECK(collision_check({0.0, -(limit + 0.1), 1000.0}, w));
    CHECK(collision_check({0.0, 0.0, 1000.0 + limit + 0.1}, w));
    CHECK_FALSE(collision_check({0.0, 0.0, 1000.0 - limit + 0.1}, w));
    CHECK(collision_check({0.0, 500.0, 1000.0}, w));
}

TEST_CASE("gates passed") {
    const auto w = make_tunnel();
    CHECK(gates_passed(0.0, 30.0, w) == std::vector<std::size_t>{0});
    CHECK(gates_passed(10.0, 10.0, w).empty());
    CHECK(gates_passed(30.0, 0.0, w).empty());
    const auto all = gates_passed(0.0, 9114.0, w);
    REQUIRE(all.size() == 380);
    for (std::size_t k = 0; k < all.size(); ++k) CHECK(all[k] == k);
    // Boundary: exactly on a gate counts, just before it does not.
    const double g1 = w.gates()[1].pn;
    CHECK(gates_passed(g1 - 1.0, g1, w) == std::vector<std::size_t>{1});
    CHECK(gates_passed(g1, g1 + 1.0, w).empty());
}
