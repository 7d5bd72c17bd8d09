#include "uvwipe/geometry.hpp"
#include "uvwipe/error.hpp"

#include <cmath>

namespace uvwipe {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::parse: return "parse";
        case ErrorKind::invalid_argument: return "invalid-argument";
        case ErrorKind::non_manifold: return "non-manifold";
        case ErrorKind::degenerate_face: return "degenerate-face";
        case ErrorKind::inconsistent_winding: return "inconsistent-winding";
        case ErrorKind::no_boundary: return "no-boundary";
        case ErrorKind::multiple_boundaries: return "multiple-boundaries";
        case ErrorKind::non_simple_boundary: return "non-simple-boundary";
        case ErrorKind::disconnected_selection: return "disconnected-selection";
        case ErrorKind::empty_selection: return "empty-selection";
        case ErrorKind::singular_system: return "singular-system";
        case ErrorKind::out_of_chart: return "out-of-chart";
        case ErrorKind::inside_hole: return "inside-hole";
        case ErrorKind::episode_done: return "episode-done";
        case ErrorKind::diverged: return "diverged";
        case ErrorKind::shape_mismatch: return "shape-mismatch";
        case ErrorKind::missing_artifact: return "missing-artifact";
        case ErrorKind::lineage_mismatch: return "lineage-mismatch";
        case ErrorKind::io: return "io";
    }
    return "unknown";
}

double wrap_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r <= -kPi) {
        r += kTwoPi;
    } else if (r > kPi) {
        r -= kTwoPi;
    }
    return r;
}

double wrap_angle_positive(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) {
        r += kTwoPi;
    }
    if (r >= kTwoPi) {
        r = 0.0;
    }
    return r;
}

bool barycentric(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c,
                 std::array<double, 3>& out) {
    const double area = signed_area(a, b, c);
    if (area == 0.0) {
        return false;
    }
    out[0] = signed_area(p, b, c) / area;
    out[1] = signed_area(a, p, c) / area;
    out[2] = 1.0 - out[0] - out[1];
    return true;
}

}  // namespace uvwipe
