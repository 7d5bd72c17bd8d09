#pragma once

#include "uvwipe/geometry.hpp"
#include "uvwipe/parameterization.hpp"
#include "uvwipe/raster.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace uvwipe {

// Square raster over [origin, origin + side]^2 in chart units. Row index
// follows v, column index follows u.
struct GridExtent {
    int resolution = 256;
    Vec2 origin{-1.0, -1.0};
    double side = 2.0;

    [[nodiscard]] double pixel_size() const { return side / resolution; }
    [[nodiscard]] Vec2 pixel_center(int row, int col) const {
        return origin + pixel_size() * Vec2(col + 0.5, row + 0.5);
    }
    // Pixel containing p; the closed upper edge maps to the last pixel.
    [[nodiscard]] std::optional<std::pair<int, int>> pixel_of(const Vec2& p) const;
};

struct GridWorld {
    GridExtent extent;
    BinaryMap coverage;  // M_c
    BinaryMap border;    // M_b, 1 = inside the chart
    BinaryMap frontier;  // M_f
    BinaryMap hole;      // pixels inside virtually filled holes
    Raster<double> pixel_area_3d;

    GridWorld() = default;
    explicit GridWorld(const GridExtent& e);

    [[nodiscard]] int resolution() const { return extent.resolution; }
    [[nodiscard]] bool is_free(int r, int c) const { return border(r, c) && !hole(r, c); }
    [[nodiscard]] bool is_valid(const Vec2& p) const;

    // Valid pixels outside holes.
    [[nodiscard]] std::size_t free_pixel_count() const;
    [[nodiscard]] std::size_t covered_free_count() const;
    [[nodiscard]] double coverage_fraction() const;

    // Clears coverage except hole pixels, then refreshes the frontier.
    void reset_coverage();
    void refresh_frontier() { frontier = compute_frontier(coverage, border); }
};

// Rasterizes a chart: a pixel is valid when its center falls in some UV
// triangle; each real triangle's 3D area is split evenly over the pixels
// whose centers it contains.
GridWorld make_grid_world(const UVChart& chart, int resolution);

// Marks every valid pixel whose center lies within `radius` of `center`,
// plus the valid pixel containing `center`. Returns the newly covered count.
int stamp_disk(GridWorld& world, const Vec2& center, double radius);

// Stamps along a polyline with consecutive stamp centers at most
// 0.5 * radius apart. Returns the newly covered count.
int stamp_polyline(GridWorld& world, const std::vector<Vec2>& points, double radius);

}  // namespace uvwipe
