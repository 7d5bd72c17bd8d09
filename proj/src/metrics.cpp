#include "uvwipe/metrics.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace uvwipe {

double path_length(std::span<const Vec3> points) {
    double total = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        total += (points[i] - points[i - 1]).norm();
    }
    return total;
}

double path_length(const std::vector<PosedWaypoint>& waypoints) {
    std::vector<Vec3> points;
    points.reserve(waypoints.size());
    for (const auto& w : waypoints) {
        points.push_back(w.position);
    }
    return path_length(points);
}

double coverage_area(const GridWorld& world) {
    double covered = 0.0;
    double total = 0.0;
    const std::size_t n = world.border.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!world.border.data()[i] || world.hole.data()[i]) {
            continue;
        }
        const double a = world.pixel_area_3d.data()[i];
        total += a;
        if (world.coverage.data()[i]) {
            covered += a;
        }
    }
    return total > 0.0 ? covered / total : 0.0;
}

double cumulative_gamma(std::span<const double> gammas) {
    double total = 0.0;
    for (std::size_t i = 1; i < gammas.size(); ++i) {
        total += std::abs(wrap_angle(gammas[i] - gammas[i - 1]));
    }
    return total;
}

double cumulative_gamma(const std::vector<PosedWaypoint>& waypoints) {
    std::vector<double> g;
    g.reserve(waypoints.size());
    for (const auto& w : waypoints) {
        g.push_back(w.gamma);
    }
    return cumulative_gamma(g);
}

PathReport evaluate_path(const UVPath& path, const std::vector<PosedWaypoint>& waypoints,
                         GridWorld world, double footprint_radius) {
    world.reset_coverage();
    stamp_polyline(world, path.points, footprint_radius);
    PathReport report;
    report.total_length = path_length(waypoints);
    report.coverage_fraction = coverage_area(world);
    report.s_delta_gamma = cumulative_gamma(waypoints);
    report.step_count = static_cast<int>(path.points.empty() ? 0 : path.points.size() - 1);
    return report;
}

std::string comparison_csv(const std::vector<MethodRow>& rows) {
    std::ostringstream out;
    out << "method,length_m,area_percent,s_delta_gamma_rad,steps\n";
    out << std::fixed;
    for (const MethodRow& r : rows) {
        out << r.method << ',' << std::setprecision(4) << r.report.total_length << ','
            << std::setprecision(2) << 100.0 * r.report.coverage_fraction << ','
            << std::setprecision(4) << r.report.s_delta_gamma << ',' << r.report.step_count << '\n';
    }
    return out.str();
}

}  // namespace uvwipe
