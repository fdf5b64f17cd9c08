#pragma once

#include <cmath>
#include <numbers>

namespace platoon {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kDegToRad = std::numbers::pi / 180.0;

// Planar networks carry (x, y) in kilometers; geodetic networks carry
// (latitude, longitude) in degrees.
enum class CoordinateMode { PlanarKm, GeodeticDeg };

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline bool same_position(const Vec2& a, const Vec2& b) {
    return a.x == b.x && a.y == b.y;
}

// Distance in km between two points. Geodetic mode uses the equirectangular
// approximation with the reference latitude at the midpoint of the segment.
inline double point_distance(CoordinateMode mode, const Vec2& a, const Vec2& b) {
    if (mode == CoordinateMode::PlanarKm) {
        return std::hypot(b.x - a.x, b.y - a.y);
    }
    const double phi_ref = 0.5 * (a.x + b.x) * kDegToRad;
    const double d_lat = (b.x - a.x) * kDegToRad;
    const double d_lon = (b.y - a.y) * kDegToRad * std::cos(phi_ref);
    return kEarthRadiusKm * std::hypot(d_lat, d_lon);
}

// Polar angle of b - a, normalized to [0, 2*pi). An angle that lands exactly
// on 2*pi after normalization wraps to 0. Geodetic mode measures the angle on
// the locally scaled deltas used by point_distance.
inline double point_orientation(CoordinateMode mode, const Vec2& a, const Vec2& b) {
    double u = b.x - a.x;
    double v = b.y - a.y;
    if (mode == CoordinateMode::GeodeticDeg) {
        const double phi_ref = 0.5 * (a.x + b.x) * kDegToRad;
        v *= std::cos(phi_ref);
    }
    double theta = std::atan2(v, u);
    if (theta < 0.0) {
        theta += kTwoPi;
    }
    if (theta >= kTwoPi) {
        theta = 0.0;
    }
    return theta;
}

}  // namespace platoon
