#include "uvwipe/path_lift.hpp"
#include "uvwipe/error.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace uvwipe {

Vec3 PosedWaypoint::euler_zyx() const {
    return orientation.toRotationMatrix().eulerAngles(2, 1, 0);
}

Quat tool_orientation(const Vec3& normal, double gamma) {
    const double len = normal.norm();
    if (!(len > 0.0) || !std::isfinite(len)) {
        throw Error(ErrorKind::invalid_argument, "zero-length surface normal");
    }
    const Vec3 n = normal / len;
    // Minimal rotation taking world -Z onto -n, then flip so tool Z follows
    // it, then roll about tool Z.
    const Quat align = Quat::FromTwoVectors(-Vec3::UnitZ(), -n);
    const Quat flip(Eigen::AngleAxisd(kPi, Vec3::UnitX()));
    const Quat roll(Eigen::AngleAxisd(gamma, Vec3::UnitZ()));
    return (align * flip * roll).normalized();
}

std::vector<PosedWaypoint> lift_path(const UVPath& path, const UVChart& chart,
                                     const TriangleMesh& mesh, const LiftOptions& options) {
    if (!(options.delta >= 0.0)) {
        throw Error(ErrorKind::invalid_argument, "offset delta must be non-negative");
    }
    if (path.headings.size() != path.points.size()) {
        throw Error(ErrorKind::invalid_argument, "path headings and points differ in length");
    }
    std::vector<PosedWaypoint> out;
    out.reserve(path.size());
    double gamma = options.gamma0;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i > 0) {
            // gamma rate equals the UV angular velocity: integrate heading changes.
            gamma += wrap_angle(path.headings[i] - path.headings[i - 1]);
        }
        const SurfacePoint sp = surface_point(chart, mesh, path.points[i].x(), path.points[i].y());
        PosedWaypoint wp;
        wp.contact = sp.position;
        wp.normal = sp.normal;
        wp.gamma = gamma;
        wp.orientation = tool_orientation(sp.normal, gamma);
        wp.position = sp.position + options.delta * sp.normal;
        out.push_back(wp);
    }
    return out;
}

std::vector<TwistSample> twists(const std::vector<PosedWaypoint>& waypoints, double dt,
                                double delta) {
    if (!(dt > 0.0)) {
        throw Error(ErrorKind::invalid_argument, "dt must be positive");
    }
    if (waypoints.size() < 2) {
        throw Error(ErrorKind::invalid_argument, "twists need at least two waypoints");
    }
    // Offset from contact to control point, fixed in the tool frame. Tool Z
    // points into the surface, so the outward offset is -delta along it.
    const Vec3 offset_tool(0.0, 0.0, -delta);
    std::vector<TwistSample> out;
    out.reserve(waypoints.size() - 1);
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
        const PosedWaypoint& a = waypoints[i];
        const PosedWaypoint& b = waypoints[i + 1];
        TwistSample s;
        s.dt = dt;
        s.delta = delta;
        s.v_linear = (b.contact - a.contact) / dt +
                     (b.orientation * offset_tool - a.orientation * offset_tool) / dt;
        if (a.orientation.coeffs() == b.orientation.coeffs()) {
            s.omega_vec = Vec3::Zero();
            out.push_back(s);
            continue;
        }
        Quat rel = b.orientation * a.orientation.conjugate();
        if (rel.w() < 0.0) {
            rel.coeffs() = -rel.coeffs();
        }
        const double vec_norm = rel.vec().norm();
        s.theta = 2.0 * std::atan2(vec_norm, rel.w());
        s.omega_vec = vec_norm > 0.0 ? Vec3(rel.vec() / vec_norm * (s.theta / dt)) : Vec3::Zero();
        out.push_back(s);
    }
    return out;
}

std::vector<std::pair<Vec3, Quat>> integrate_twists(const PosedWaypoint& start,
                                                   const std::vector<TwistSample>& samples) {
    std::vector<std::pair<Vec3, Quat>> poses;
    poses.reserve(samples.size() + 1);
    Vec3 p = start.position;
    Quat q = start.orientation;
    poses.emplace_back(p, q);
    for (const TwistSample& s : samples) {
        p += s.v_linear * s.dt;
        const double angle = s.omega_vec.norm() * s.dt;
        if (angle > 0.0) {
            q = (Quat(Eigen::AngleAxisd(angle, s.omega_vec.normalized())) * q).normalized();
        }
        poses.emplace_back(p, q);
    }
    return poses;
}

void write_waypoints_csv(std::ostream& out, const std::vector<PosedWaypoint>& waypoints) {
    out << "# position x,y,z in meters; orientation unit quaternion qw,qx,qy,qz (tool Z into surface)\n";
    out << "x,y,z,qw,qx,qy,qz\n" << std::setprecision(17);
    for (const PosedWaypoint& w : waypoints) {
        out << w.position.x() << ',' << w.position.y() << ',' << w.position.z() << ','
            << w.orientation.w() << ',' << w.orientation.x() << ',' << w.orientation.y() << ','
            << w.orientation.z() << '\n';
    }
}

}  // namespace uvwipe
