#include "harqsim/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

using namespace harqsim;
using std::numbers::pi;

TEST_CASE("distance to the home BS is the user radius") {
    CHECK(distance_to_bs(250.0, 0.0, 0.0, 2.5) == doctest::Approx(250.0));
    CHECK(distance_to_bs(250.0, 1.3, 0.0, -0.7) == doctest::Approx(250.0));
}

TEST_CASE("collinear user sits on the BS axis") {
    CHECK(distance_to_bs(250.0, pi / 2.0, 1000.0, pi / 2.0) == doctest::Approx(750.0));
}

TEST_CASE("distance agrees with a Cartesian-coordinates computation") {
    const double r = 300.0, theta = pi / 3.0, d = 1000.0, psi = 5.0 * pi / 6.0;
    const double ux = r * std::cos(theta), uy = r * std::sin(theta);
    const double bx = d * std::cos(psi), by = d * std::sin(psi);
    const double want = std::hypot(ux - bx, uy - by);
    CHECK(distance_to_bs(r, theta, d, psi) == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("distance is invariant under a common angle shift and obeys triangle bounds") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> ang(-pi, pi), rad(0.0, 2000.0);
    for (int i = 0; i < 2000; ++i) {
        const double r = rad(gen), d = rad(gen), th = ang(gen), ps = ang(gen), c = ang(gen);
        const double base = distance_to_bs(r, th, d, ps);
        CHECK(distance_to_bs(r, th + c, d, ps + c) == doctest::Approx(base).epsilon(1e-12));
        CHECK(base >= std::abs(d - r) - 1e-9);
        CHECK(base <= d + r + 1e-9);
    }
}

TEST_CASE("path loss at and around the reference distance") {
    CHECK(pathloss_gain(1000.0, 37.0, 1000.0, 3.0) ==
          doctest::Approx(std::pow(10.0, -3.7)).epsilon(1e-14));
    CHECK(pathloss_gain(500.0, 37.0, 1000.0, 3.0) ==
          doctest::Approx(8.0 * std::pow(10.0, -3.7)).epsilon(1e-14));
    // extended-precision evaluation of the defining formula
    const long double want =
        std::pow(10.0L, -3.7L) * std::pow(1000.0L / 732.1L, 3.5L);
    CHECK(pathloss_gain(732.1, 37.0, 1000.0, 3.5) ==
          doctest::Approx(static_cast<double>(want)).epsilon(1e-14));
}

TEST_CASE("path loss rejects non-positive distance and decreases monotonically") {
    CHECK_THROWS_AS(pathloss_gain(0.0, 37.0, 1000.0, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(pathloss_gain(-5.0, 37.0, 1000.0, 3.0), std::invalid_argument);
    double prev = pathloss_gain(1.0, 37.0, 1000.0, 3.0);
    for (double d = 2.0; d < 4000.0; d *= 1.7) {
        const double g = pathloss_gain(d, 37.0, 1000.0, 3.0);
        CHECK(g < prev);
        prev = g;
    }
}

TEST_CASE("default topology matches the one-tier layout") {
    const CellTopology t = default_topology();
    t.validate();
    CHECK(t.interferer_count() == 6);
    CHECK(t.bs_distance_m[0] == 0.0);
    for (int k = 1; k <= 6; ++k) CHECK(t.bs_distance_m[k] == 1000.0);
    CHECK(t.bs_angle_rad[1] == doctest::Approx(5.0 * pi / 6.0));
    CHECK(t.bs_angle_rad[2] == doctest::Approx(pi / 2.0));
    CHECK(t.bs_angle_rad[6] == doctest::Approx(-5.0 * pi / 6.0));
}

TEST_CASE("build_user fills distance and gain vectors") {
    const CellTopology t = default_topology();
    const UserGeometry u = build_user(t, 250.0, pi / 2.0);
    CHECK(u.distance_m[0] == doctest::Approx(250.0));
    CHECK(u.distance_m[2] == doctest::Approx(750.0));  // the BS at psi = pi/2
    for (std::size_t k = 0; k < u.pathloss.size(); ++k) {
        CHECK(u.pathloss[k] > 0.0);
        CHECK(u.pathloss[k] <=
              pathloss_gain(t.min_user_distance_m, t.pl0_db, t.ref_distance_m,
                            t.pathloss_exponent) *
                  (1.0 + 1e-12));
        const double want = pathloss_gain(u.distance_m[k], t.pl0_db, t.ref_distance_m,
                                          t.pathloss_exponent);
        CHECK(u.pathloss[k] == doctest::Approx(want).epsilon(1e-13));
    }
}

TEST_CASE("a user at the home BS sees the interferer at its deployment distance") {
    CellTopology t;
    t.bs_distance_m = {0.0, 1000.0};
    t.bs_angle_rad = {0.0, 0.0};
    const UserGeometry u = build_user(t, 1e-9, 0.3);  // clamped to 1 m
    CHECK(u.radius_m == doctest::Approx(1.0));
    CHECK(u.pathloss[1] == doctest::Approx(std::pow(10.0, -3.7)).epsilon(1e-6));
}

TEST_CASE("angles are normalized into (-pi, pi]") {
    CHECK(normalize_angle(3.0 * pi) == doctest::Approx(pi));
    CHECK(normalize_angle(-pi) == doctest::Approx(pi));
    CHECK(normalize_angle(2.5 * pi) == doctest::Approx(pi / 2.0));
    const CellTopology t = default_topology();
    const UserGeometry u = build_user(t, 100.0, 2.0 * pi + 0.25);
    CHECK(u.angle_rad == doctest::Approx(0.25));
}

TEST_CASE("topology invariants are enforced") {
    CellTopology t = default_topology();
    t.bs_distance_m[0] = 5.0;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    t = default_topology();
    t.bs_distance_m[3] = 0.0;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    t = default_topology();
    t.pathloss_exponent = 0.0;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    t = default_topology();
    t.bs_angle_rad.pop_back();
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}
