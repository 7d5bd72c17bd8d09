#include "uvwipe/app/render.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <utility>
#include <vector>

namespace uvwipe::app {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

// Liang-Barsky clip of segment a-b against [lo, hi]^2.
std::optional<std::pair<Vec2, Vec2>> clip_segment(Vec2 a, Vec2 b, double lo, double hi) {
    double t0 = 0.0, t1 = 1.0;
    const Vec2 d = b - a;
    const double p[4] = {-d.x(), d.x(), -d.y(), d.y()};
    const double q[4] = {a.x() - lo, hi - a.x(), a.y() - lo, hi - a.y()};
    for (int k = 0; k < 4; ++k) {
        if (p[k] == 0.0) {
            if (q[k] < 0.0) return std::nullopt;
            continue;
        }
        const double t = q[k] / p[k];
        if (p[k] < 0.0) {
            t0 = std::max(t0, t);
        } else {
            t1 = std::min(t1, t);
        }
        if (t0 > t1) return std::nullopt;
    }
    return std::make_pair(Vec2(a + t0 * d), Vec2(a + t1 * d));
}

void emit_runs(std::string& out, const BinaryMap& mask, int n, double px, const char* fill) {
    out += "<g fill=\"";
    out += fill;
    out += "\">\n";
    for (int r = 0; r < n; ++r) {
        int c = 0;
        while (c < n) {
            auto on = [&](int col) { return mask(r, col) != 0; };
            if (!on(c)) {
                ++c;
                continue;
            }
            const int start = c;
            while (c < n && on(c)) ++c;
            out += "<rect x=\"" + num(start * px) + "\" y=\"" + num((n - 1 - r) * px) + "\" width=\"" +
                   num((c - start) * px) + "\" height=\"" + num(px) + "\"/>\n";
        }
    }
    out += "</g>\n";
}

}  // namespace

std::string render_svg(const GridWorld& world, const UVPath& path, const SvgOptions& options) {
    const int n = world.resolution();
    const double px = options.pixel;
    const double size = n * px;
    const GridExtent& e = world.extent;
    auto to_svg = [&](const Vec2& p) {
        return Vec2((p.x() - e.origin.x()) / e.pixel_size() * px,
                    size - (p.y() - e.origin.y()) / e.pixel_size() * px);
    };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(size) + "\" height=\"" + num(size) +
           "\" viewBox=\"0 0 " + num(size) + " " + num(size) + "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + num(size) + "\" height=\"" + num(size) + "\" fill=\"#ffffff\"/>\n";
    emit_runs(out, world.border, n, px, "#d9d9d9");
    BinaryMap covered(n, n, 0);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            covered(r, c) = world.coverage(r, c) && world.border(r, c) && !world.hole(r, c);
        }
    }
    emit_runs(out, covered, n, px, "#7fb3e6");
    emit_runs(out, world.hole, n, px, "#404040");

    // Split the path into visible runs after clipping to the raster.
    const double lo = 0.0, hi = size;
    std::vector<std::vector<Vec2>> runs;
    for (std::size_t i = 1; i < path.points.size(); ++i) {
        const Vec2 a = path.points[i - 1];
        const Vec2 b = path.points[i];
        if (!a.allFinite() || !b.allFinite()) continue;
        const auto seg = clip_segment(to_svg(a), to_svg(b), lo, hi);
        if (!seg) continue;
        if (runs.empty() || (runs.back().back() - seg->first).norm() > 1e-9) {
            runs.push_back({seg->first});
        }
        runs.back().push_back(seg->second);
    }
    for (const auto& run : runs) {
        out += "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"" + num(0.5 * px) + "\" points=\"";
        for (std::size_t i = 0; i < run.size(); ++i) {
            if (i) out += ' ';
            out += num(run[i].x()) + "," + num(run[i].y());
        }
        out += "\"/>\n";
    }
    if (!runs.empty()) {
        const Vec2 s = runs.front().front();
        const Vec2 t = runs.back().back();
        out += "<circle cx=\"" + num(s.x()) + "\" cy=\"" + num(s.y()) + "\" r=\"" + num(1.5 * px) +
               "\" fill=\"#27ae60\"/>\n";
        out += "<circle cx=\"" + num(t.x()) + "\" cy=\"" + num(t.y()) + "\" r=\"" + num(1.5 * px) +
               "\" fill=\"#2c3e50\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace uvwipe::app
