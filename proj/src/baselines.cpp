#include "uvwipe/baselines.hpp"
#include "uvwipe/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace uvwipe {

double UVPath::length() const {
    double total = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        total += (points[i] - points[i - 1]).norm();
    }
    return total;
}

UVPath make_uv_path(const std::vector<Vec2>& points) {
    UVPath path;
    for (const Vec2& p : points) {
        if (path.points.empty() || p != path.points.back()) {
            path.points.push_back(p);
        }
    }
    const std::size_t n = path.points.size();
    path.headings.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const Vec2 d = path.points[i + 1] - path.points[i];
        path.headings[i] = std::atan2(d.y(), d.x());
    }
    if (n >= 2) {
        path.headings[n - 1] = path.headings[n - 2];
    }
    return path;
}

namespace {

// Inserts samples so no two consecutive points are further than max_step.
std::vector<Vec2> densify(const std::vector<Vec2>& corners, double max_step) {
    std::vector<Vec2> out;
    if (corners.empty()) {
        return out;
    }
    out.push_back(corners.front());
    for (std::size_t i = 1; i < corners.size(); ++i) {
        const Vec2 a = corners[i - 1];
        const Vec2 d = corners[i] - a;
        const int n = std::max(1, static_cast<int>(std::ceil(d.norm() / max_step)));
        for (int k = 1; k <= n; ++k) {
            out.push_back(k == n ? corners[i] : Vec2(a + d * (static_cast<double>(k) / n)));
        }
    }
    return out;
}

std::vector<Vec2> clip_to_chart(const UVChart& chart, const std::vector<Vec2>& points) {
    std::vector<Vec2> out;
    out.reserve(points.size());
    for (const Vec2& p : points) {
        if (chart.contains(p)) {
            out.push_back(p);
        }
    }
    return out;
}

}  // namespace

UVPath zigzag_path(const UVChart& chart, const ZigzagOptions& options) {
    if (chart.domain != DomainKind::square) {
        throw Error(ErrorKind::invalid_argument, "zigzag requires a square chart");
    }
    if (!(options.spacing > 0.0 && options.spacing < 2.0)) {
        throw Error(ErrorKind::invalid_argument, "zigzag spacing must lie in (0, 2)");
    }
    if (!(options.margin >= 0.0 && options.margin < 1.0)) {
        throw Error(ErrorKind::invalid_argument, "zigzag margin must lie in [0, 1)");
    }
    if (!(options.max_step > 0.0)) {
        throw Error(ErrorKind::invalid_argument, "sampling step must be positive");
    }
    const double lo = -1.0 + options.margin;
    const double hi = 1.0 - options.margin;
    if (options.spacing >= hi - lo) {
        throw Error(ErrorKind::invalid_argument,
                    "zigzag spacing leaves fewer than two rows in the domain");
    }
    std::vector<double> rows;
    for (int k = 0;; ++k) {
        const double level = lo + k * options.spacing;
        if (level > hi + 1e-12) {
            break;
        }
        rows.push_back(std::min(level, hi));
    }
    if (hi - rows.back() > 1e-9) {
        rows.push_back(hi);
    }

    std::vector<Vec2> corners;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const bool forward = k % 2 == 0;
        const double a = forward ? lo : hi;
        const double b = forward ? hi : lo;
        if (options.axis == ZigzagAxis::u) {
            corners.emplace_back(a, rows[k]);
            corners.emplace_back(b, rows[k]);
        } else {
            corners.emplace_back(rows[k], a);
            corners.emplace_back(rows[k], b);
        }
    }
    return make_uv_path(clip_to_chart(chart, densify(corners, options.max_step)));
}

double spiral_arc_length(double spacing, double phi) {
    const double b = spacing / kTwoPi;
    return 0.5 * b * (phi * std::sqrt(1.0 + phi * phi) + std::asinh(phi));
}

UVPath spiral_path(const UVChart& chart, const SpiralOptions& options) {
    if (chart.domain != DomainKind::disk) {
        throw Error(ErrorKind::invalid_argument, "spiral requires a disk chart");
    }
    if (!(options.spacing > 0.0 && options.spacing < 1.0)) {
        throw Error(ErrorKind::invalid_argument, "spiral spacing must lie in (0, 1)");
    }
    if (!(options.max_step > 0.0) || !(options.max_angle_step > 0.0)) {
        throw Error(ErrorKind::invalid_argument, "sampling steps must be positive");
    }
    const double b = options.spacing / kTwoPi;
    const double r_end = 1.0 - 0.5 * options.spacing;
    const double phi_end = r_end / b;
    std::vector<Vec2> points;
    double phi = 0.0;
    while (true) {
        const double r = b * phi;
        points.emplace_back(r * std::cos(phi), r * std::sin(phi));
        if (phi >= phi_end) {
            break;
        }
        // Bound the arc over one step using the radius at its far end.
        const double r_far = r + b * options.max_angle_step;
        const double dphi =
            std::min(options.max_angle_step, options.max_step / std::sqrt(r_far * r_far + b * b));
        phi = std::min(phi + dphi, phi_end);
    }
    if (options.close_outer) {
        const double dphi = std::min(options.max_angle_step, options.max_step / r_end);
        const int n = std::max(1, static_cast<int>(std::ceil(kTwoPi / dphi)));
        for (int k = 1; k <= n; ++k) {
            const double a = phi_end + kTwoPi * k / n;
            points.emplace_back(r_end * std::cos(a), r_end * std::sin(a));
        }
    }
    return make_uv_path(clip_to_chart(chart, points));
}

void write_uv_path_csv(std::ostream& out, const UVPath& path) {
    out << "u,v,heading\n" << std::setprecision(17);
    for (std::size_t i = 0; i < path.points.size(); ++i) {
        out << path.points[i].x() << ',' << path.points[i].y() << ',' << path.headings[i] << '\n';
    }
}

UVPath read_uv_path_csv(std::istream& in) {
    UVPath path;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#' || line.rfind("u,", 0) == 0) {
            continue;
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double u = 0, v = 0, h = 0;
        if (!(ls >> u >> v >> h)) {
            throw Error(ErrorKind::parse, "path CSV line " + std::to_string(line_no) + " is malformed");
        }
        path.points.emplace_back(u, v);
        path.headings.push_back(h);
    }
    return path;
}

}  // namespace uvwipe
