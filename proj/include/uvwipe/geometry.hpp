#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <numbers>

namespace uvwipe {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;
using Face = std::array<int, 3>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

// Wraps an angle to [0, 2pi).
double wrap_angle_positive(double a);

// Signed area of the 2D triangle (a, b, c); positive when counterclockwise.
inline double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

// Barycentric coordinates of p in triangle (a, b, c). Returns false for a
// degenerate triangle.
bool barycentric(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c,
                 std::array<double, 3>& out);

}  // namespace uvwipe
