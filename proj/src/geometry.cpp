#include "fsolink/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fsolink/errors.hpp"

namespace fsolink::geometry {

namespace {

// Horizontal offsets below this are rounding noise in the ECEF difference.
constexpr double kZenithLimitM = 1e-6;

constexpr double kPi = std::numbers::pi;
constexpr double kCoincidentLimitM = 1e-3;

struct Vec3 {
    double x, y, z;
};

double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 to_unit(const PointingAngles& p) {
    // ENU components of the line of sight
    const double ce = std::cos(p.elevation_rad);
    return {ce * std::sin(p.azimuth_rad), ce * std::cos(p.azimuth_rad), std::sin(p.elevation_rad)};
}

}  // namespace

void GeodeticPosition::validate(const char* field_prefix) const {
    const std::string prefix = field_prefix;
    if (!std::isfinite(latitude_rad) || std::abs(latitude_rad) > kPi / 2.0) {
        throw ValidationError(prefix + "latitude", "latitude must lie in [-90, 90] degrees");
    }
    if (!std::isfinite(longitude_rad) || std::abs(longitude_rad) > kPi) {
        throw ValidationError(prefix + "longitude", "longitude must lie in [-180, 180] degrees");
    }
    if (!std::isfinite(altitude_m)) {
        throw ValidationError(prefix + "altitude_m", "altitude must be finite");
    }
}

EcefVector geodetic_to_ecef(const GeodeticPosition& pos) {
    const double sin_lat = std::sin(pos.latitude_rad);
    const double cos_lat = std::cos(pos.latitude_rad);
    const double n = kWgs84A / std::sqrt(1.0 - kWgs84E2 * sin_lat * sin_lat);
    return {
        (n + pos.altitude_m) * cos_lat * std::cos(pos.longitude_rad),
        (n + pos.altitude_m) * cos_lat * std::sin(pos.longitude_rad),
        (n * (1.0 - kWgs84E2) + pos.altitude_m) * sin_lat,
    };
}

double ecef_distance(const GeodeticPosition& a, const GeodeticPosition& b) {
    const EcefVector ea = geodetic_to_ecef(a);
    const EcefVector eb = geodetic_to_ecef(b);
    return norm({eb.x_m - ea.x_m, eb.y_m - ea.y_m, eb.z_m - ea.z_m});
}

PointingAngles pointing_solution(const GeodeticPosition& observer, const GeodeticPosition& target) {
    const EcefVector o = geodetic_to_ecef(observer);
    const EcefVector t = geodetic_to_ecef(target);
    const Vec3 d{t.x_m - o.x_m, t.y_m - o.y_m, t.z_m - o.z_m};
    const double range = norm(d);
    if (!(range > kCoincidentLimitM)) {
        throw CoincidentPointsError("observer and target are within 1 mm of each other");
    }

    const double sl = std::sin(observer.latitude_rad);
    const double cl = std::cos(observer.latitude_rad);
    const double so = std::sin(observer.longitude_rad);
    const double co = std::cos(observer.longitude_rad);

    const double east = -so * d.x + co * d.y;
    const double north = -sl * co * d.x - sl * so * d.y + cl * d.z;
    const double up = cl * co * d.x + cl * so * d.y + sl * d.z;

    const double horizontal = std::hypot(east, north);
    PointingAngles out;
    out.elevation_rad = std::atan2(up, horizontal);
    // Zenith/nadir: azimuth is undefined, report 0.
    out.azimuth_rad = horizontal <= std::max(kZenithLimitM, 1e-9 * range) ? 0.0 : std::atan2(east, north);
    return out;
}

double angular_separation(const PointingAngles& a, const PointingAngles& b) {
    const Vec3 ua = to_unit(a);
    const Vec3 ub = to_unit(b);
    // atan2 of |cross| and dot stays accurate for tiny angles where acos does not.
    const Vec3 c{ua.y * ub.z - ua.z * ub.y, ua.z * ub.x - ua.x * ub.z, ua.x * ub.y - ua.y * ub.x};
    return std::atan2(norm(c), dot(ua, ub));
}

double wrap_pi(double angle_rad) {
    double w = std::remainder(angle_rad, 2.0 * kPi);
    if (w < -kPi) {
        w += 2.0 * kPi;
    }
    return std::clamp(w, -kPi, kPi);
}

}  // namespace fsolink::geometry
