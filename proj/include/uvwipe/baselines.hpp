#pragma once

#include "uvwipe/geometry.hpp"
#include "uvwipe/parameterization.hpp"

#include <iosfwd>
#include <vector>

namespace uvwipe {

struct UVPath {
    std::vector<Vec2> points;
    std::vector<double> headings;  // tangent direction per point, radians

    [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
    [[nodiscard]] double length() const;
    bool operator==(const UVPath&) const = default;
};

// Fills headings from the direction to the next point (last point repeats
// the previous direction) and drops consecutive duplicates.
UVPath make_uv_path(const std::vector<Vec2>& points);

enum class ZigzagAxis { u, v };

struct ZigzagOptions {
    double spacing = 0.144;  // 1.8 * default footprint radius
    double margin = 0.0;
    ZigzagAxis axis = ZigzagAxis::u;
    double max_step = 0.04;  // sampling interval along the path
};

// Boustrophedon rows parallel to `axis`, `spacing` apart, alternating
// direction, inset by `margin`. A final row is added on the far inset edge
// when the regular rows fall short of it.
UVPath zigzag_path(const UVChart& chart, const ZigzagOptions& options);

struct SpiralOptions {
    double spacing = 0.144;
    double max_step = 0.04;
    double max_angle_step = 2.0 * kPi / 180.0;
    // Finish with one full turn at the final radius so the rim is swept.
    bool close_outer = true;
};

// Archimedean spiral r = spacing * phi / (2 pi) from the center until
// r = 1 - spacing / 2, optionally followed by a circle at that radius.
UVPath spiral_path(const UVChart& chart, const SpiralOptions& options);

// Archimedean arc length from phi = 0 to phi for pitch `spacing`.
double spiral_arc_length(double spacing, double phi);

void write_uv_path_csv(std::ostream& out, const UVPath& path);
UVPath read_uv_path_csv(std::istream& in);

}  // namespace uvwipe
