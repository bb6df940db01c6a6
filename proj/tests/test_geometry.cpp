#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <doctest.h>

#include "fsolink/errors.hpp"
#include "fsolink/geometry.hpp"

using namespace fsolink::geometry;
using doctest::Approx;

namespace {

// Iterative ECEF -> geodetic, written independently of the library.
GeodeticPosition inverse(const EcefVector& v) {
    const double a = 6378137.0;
    const double f = 1.0 / 298.257223563;
    const double e2 = f * (2.0 - f);
    const double p = std::hypot(v.x_m, v.y_m);
    double lat = std::atan2(v.z_m, p * (1.0 - e2));
    double h = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double n = a / std::sqrt(1.0 - e2 * std::sin(lat) * std::sin(lat));
        h = p / std::cos(lat) - n;
        lat = std::atan2(v.z_m, p * (1.0 - e2 * n / (n + h)));
    }
    return {lat, std::atan2(v.y_m, v.x_m), h};
}

}  // namespace

TEST_CASE("geodetic_to_ecef reference points") {
    const auto eq = geodetic_to_ecef({0.0, 0.0, 0.0});
    CHECK(eq.x_m == Approx(6378137.0).epsilon(1e-15));
    CHECK(std::abs(eq.y_m) < 1e-9);
    CHECK(std::abs(eq.z_m) < 1e-9);

    const auto pole = geodetic_to_ecef({std::numbers::pi / 2.0, 0.0, 0.0});
    CHECK(std::abs(pole.x_m) < 1e-6);
    CHECK(pole.z_m == Approx(kWgs84A * (1.0 - kWgs84F)).epsilon(1e-15));

    // Hand evaluation of the ellipsoid equations at 45N 45E, 1 km.
    const auto mid = geodetic_to_ecef({deg_to_rad(45.0), deg_to_rad(45.0), 1000.0});
    CHECK(mid.x_m == Approx(3194919.145061).epsilon(1e-12));
    CHECK(mid.y_m == Approx(3194919.145061).epsilon(1e-12));
    CHECK(mid.z_m == Approx(4488055.515647).epsilon(1e-12));
}

TEST_CASE("geodetic_to_ecef round trips through an independent inverse") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> lat(-1.5, 1.5);
    std::uniform_real_distribution<double> lon(-3.1, 3.1);
    std::uniform_real_distribution<double> alt(-100.0, 9000.0);
    for (int i = 0; i < 1000; ++i) {
        const GeodeticPosition p{lat(rng), lon(rng), alt(rng)};
        const auto back = inverse(geodetic_to_ecef(p));
        CHECK(back.latitude_rad == Approx(p.latitude_rad).epsilon(1e-11));
        CHECK(back.longitude_rad == Approx(p.longitude_rad).epsilon(1e-11));
        CHECK(std::abs(back.altitude_m - p.altitude_m) < 1e-5);
    }
}

TEST_CASE("geodetic validation") {
    CHECK_THROWS_AS(GeodeticPosition({2.0, 0.0, 0.0}).validate("node_a."), fsolink::ValidationError);
    CHECK_THROWS_AS(GeodeticPosition({0.0, std::nan(""), 0.0}).validate("node_a."), fsolink::ValidationError);
    try {
        GeodeticPosition{0.0, 0.0, std::numeric_limits<double>::infinity()}.validate("node_b.");
        FAIL("expected a validation error");
    } catch (const fsolink::ValidationError& e) {
        CHECK(e.field() == "node_b.altitude_m");
    }
}

TEST_CASE("pointing_solution") {
    SUBCASE("zenith") {
        const GeodeticPosition a{0.5, 0.3, 10.0};
        const auto s = pointing_solution(a, {0.5, 0.3, 110.0});
        CHECK(s.elevation_rad == Approx(std::numbers::pi / 2.0).epsilon(1e-12));
        CHECK(s.azimuth_rad == 0.0);
    }
    SUBCASE("1 km due east on the equator") {
        const double dlon = 1000.0 / kWgs84A;
        const auto s = pointing_solution({0.0, 0.0, 0.0}, {0.0, dlon, 0.0});
        CHECK(s.azimuth_rad == Approx(std::numbers::pi / 2.0).epsilon(1e-9));
        // Chord on a 6371 km sphere dips by d / 2R.
        CHECK(s.elevation_rad == Approx(-1000.0 / (2.0 * 6371000.0)).epsilon(0.02));
        CHECK(s.elevation_rad < 0.0);
    }
    SUBCASE("swapping ends reverses azimuth") {
        const GeodeticPosition a{deg_to_rad(32.1180), deg_to_rad(118.9560), 30.0};
        const GeodeticPosition b{deg_to_rad(32.1386), deg_to_rad(118.9908), 30.0};
        const auto ab = pointing_solution(a, b);
        const auto ba = pointing_solution(b, a);
        CHECK(std::abs(wrap_pi(ab.azimuth_rad - ba.azimuth_rad - std::numbers::pi)) < 1e-3);
        CHECK(std::abs(ab.elevation_rad - ba.elevation_rad) < 1e-3);
    }
    SUBCASE("coincident points") {
        const GeodeticPosition a{0.2, 0.2, 5.0};
        CHECK_THROWS_AS(pointing_solution(a, a), fsolink::CoincidentPointsError);
    }
    SUBCASE("south-west target") {
        // Meridian radius at the equator is a(1 - e^2), so equal angular steps are not equal distances.
        const auto s = pointing_solution({0.0, 0.0, 0.0}, {-1e-4, -1e-4, 0.0});
        CHECK(s.azimuth_rad == Approx(std::atan2(-1.0, -(1.0 - kWgs84E2))).epsilon(1e-6));
    }
}

TEST_CASE("angular_separation") {
    const PointingAngles a{0.3, 0.1};
    CHECK(angular_separation(a, a) == Approx(0.0));
    CHECK(angular_separation({0.0, 0.0}, {std::numbers::pi / 2.0, 0.0}) ==
          Approx(std::numbers::pi / 2.0).epsilon(1e-12));
    CHECK(std::abs(angular_separation({0.0, 0.0}, {1e-3, 1e-3}) - std::sqrt(2.0) * 1e-3) < 1e-6);
}

TEST_CASE("wrap_pi") {
    CHECK(wrap_pi(3.0 * std::numbers::pi / 2.0) == Approx(-std::numbers::pi / 2.0));
    CHECK(wrap_pi(-0.25) == Approx(-0.25));
    CHECK(std::abs(wrap_pi(4.0 * std::numbers::pi)) < 1e-12);
}
