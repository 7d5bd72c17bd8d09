#pragma once

#include "uvwipe/baselines.hpp"
#include "uvwipe/geometry.hpp"
#include "uvwipe/mesh.hpp"
#include "uvwipe/parameterization.hpp"

#include <iosfwd>
#include <vector>

namespace uvwipe {

// End-effector pose at one path point. Tool Z points into the surface
// (anti-parallel to the normal) and the tool is rolled by gamma about it.
struct PosedWaypoint {
    Vec3 position;  // control point = S(u, v) + delta * normal
    Quat orientation;
    Vec3 normal;
    Vec3 contact;  // S(u, v)
    double gamma = 0.0;

    [[nodiscard]] Vec3 tool_z() const { return orientation * Vec3::UnitZ(); }
    // Intrinsic Z-Y-X Euler angles (alpha, beta, gamma_euler).
    [[nodiscard]] Vec3 euler_zyx() const;
};

struct TwistSample {
    Vec3 v_linear;   // m/s
    Vec3 omega_vec;  // rad/s, rotation axis scaled by theta / dt
    double dt = 0.0;
    double delta = 0.0;
    double theta = 0.0;  // rotation angle between consecutive orientations
};

struct LiftOptions {
    double delta = 0.02;  // m
    double dt = 0.1;      // s
    double gamma0 = 0.0;  // rad
};

// Orientation with tool Z = -normal and roll gamma about tool Z.
Quat tool_orientation(const Vec3& normal, double gamma);

std::vector<PosedWaypoint> lift_path(const UVPath& path, const UVChart& chart,
                                     const TriangleMesh& mesh, const LiftOptions& options = {});

// Linear velocity: contact-point finite difference plus the change of the
// offset vector; angular velocity from the relative quaternion.
std::vector<TwistSample> twists(const std::vector<PosedWaypoint>& waypoints, double dt,
                                double delta);

// Re-synthesises poses by integrating twists from the first waypoint.
std::vector<std::pair<Vec3, Quat>> integrate_twists(const PosedWaypoint& start,
                                                   const std::vector<TwistSample>& samples);

void write_waypoints_csv(std::ostream& out, const std::vector<PosedWaypoint>& waypoints);

}  // namespace uvwipe
