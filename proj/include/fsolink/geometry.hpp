#pragma once

#include <numbers>

namespace fsolink::geometry {

// WGS-84 ellipsoid
inline constexpr double kWgs84A = 6378137.0;
inline constexpr double kWgs84F = 1.0 / 298.257223563;
inline constexpr double kWgs84B = kWgs84A * (1.0 - kWgs84F);
inline constexpr double kWgs84E2 = kWgs84F * (2.0 - kWgs84F);

/// Ellipsoidal position of a terminal as reported by its RTK receiver.
struct GeodeticPosition {
    double latitude_rad = 0.0;   ///< [-pi/2, pi/2]
    double longitude_rad = 0.0;  ///< [-pi, pi]
    double altitude_m = 0.0;     ///< above the WGS-84 ellipsoid

    /// Throws ValidationError naming `field_prefix` + the offending field.
    void validate(const char* field_prefix = "") const;
};

struct EcefVector {
    double x_m = 0.0;
    double y_m = 0.0;
    double z_m = 0.0;
};

/// Line of sight in the observer's local East-North-Up frame.
struct PointingAngles {
    double azimuth_rad = 0.0;    ///< clockwise from true north, [-pi, pi]
    double elevation_rad = 0.0;  ///< above local horizontal, [-pi/2, pi/2]
};

EcefVector geodetic_to_ecef(const GeodeticPosition& pos);

/// Straight-line (chord) distance between two positions.
double ecef_distance(const GeodeticPosition& a, const GeodeticPosition& b);

/// Azimuth/elevation of `target` seen from `observer`. A target at the
/// zenith reports azimuth 0. Throws CoincidentPointsError when the two
/// positions are within 1 mm.
PointingAngles pointing_solution(const GeodeticPosition& observer, const GeodeticPosition& target);

/// Great-circle angle between two lines of sight, in [0, pi].
double angular_separation(const PointingAngles& a, const PointingAngles& b);

/// Wraps an angle into [-pi, pi].
double wrap_pi(double angle_rad);

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace fsolink::geometry
