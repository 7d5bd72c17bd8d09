#include "uvwipe/grid_world.hpp"
#include "uvwipe/error.hpp"

#include <algorithm>
#include <cmath>

namespace uvwipe {

std::optional<std::pair<int, int>> GridExtent::pixel_of(const Vec2& p) const {
    const double x = (p.x() - origin.x()) / pixel_size();
    const double y = (p.y() - origin.y()) / pixel_size();
    if (!(x >= 0.0 && y >= 0.0 && x <= resolution && y <= resolution)) {
        return std::nullopt;
    }
    const int col = std::min(static_cast<int>(x), resolution - 1);
    const int row = std::min(static_cast<int>(y), resolution - 1);
    return std::make_pair(row, col);
}

GridWorld::GridWorld(const GridExtent& e)
    : extent(e),
      coverage(e.resolution, e.resolution, 0),
      border(e.resolution, e.resolution, 0),
      frontier(e.resolution, e.resolution, 0),
      hole(e.resolution, e.resolution, 0),
      pixel_area_3d(e.resolution, e.resolution, 0.0) {}

bool GridWorld::is_valid(const Vec2& p) const {
    const auto px = extent.pixel_of(p);
    return px && border(px->first, px->second);
}

std::size_t GridWorld::free_pixel_count() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < border.size(); ++i) {
        n += border.data()[i] && !hole.data()[i];
    }
    return n;
}

std::size_t GridWorld::covered_free_count() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < border.size(); ++i) {
        n += coverage.data()[i] && border.data()[i] && !hole.data()[i];
    }
    return n;
}

double GridWorld::coverage_fraction() const {
    const std::size_t free = free_pixel_count();
    return free == 0 ? 0.0 : static_cast<double>(covered_free_count()) / static_cast<double>(free);
}

void GridWorld::reset_coverage() {
    coverage = hole;
    refresh_frontier();
}

GridWorld make_grid_world(const UVChart& chart, int resolution) {
    if (resolution <= 0) {
        throw Error(ErrorKind::invalid_argument, "raster resolution must be positive");
    }
    GridWorld world(GridExtent{resolution, Vec2(-1.0, -1.0), 2.0});
    Raster<int> owner(resolution, resolution, -1);
    std::vector<int> members(chart.real_face_count, 0);
    for (int r = 0; r < resolution; ++r) {
        for (int c = 0; c < resolution; ++c) {
            const auto loc = chart.locate(world.extent.pixel_center(r, c));
            if (!loc) {
                continue;
            }
            world.border(r, c) = 1;
            if (chart.is_hole_face(loc->face)) {
                world.hole(r, c) = 1;
            } else {
                owner(r, c) = loc->face;
                ++members[loc->face];
            }
        }
    }
    const bool have_areas = chart.face_area_3d.size() == chart.real_face_count;
    for (int r = 0; r < resolution; ++r) {
        for (int c = 0; c < resolution; ++c) {
            const int f = owner(r, c);
            if (f >= 0) {
                const double area = have_areas ? chart.face_area_3d[f] : 1.0;
                world.pixel_area_3d(r, c) = area / members[f];
            }
        }
    }
    world.reset_coverage();
    return world;
}

int stamp_disk(GridWorld& world, const Vec2& center, double radius) {
    const GridExtent& e = world.extent;
    const double px = e.pixel_size();
    int added = 0;
    auto mark = [&](int r, int c) {
        if (world.border(r, c) && !world.coverage(r, c)) {
            world.coverage(r, c) = 1;
            ++added;
        }
    };
    if (const auto own = e.pixel_of(center)) {
        mark(own->first, own->second);
    }
    const int r0 = std::max(0, static_cast<int>(std::floor((center.y() - radius - e.origin.y()) / px)));
    const int r1 = std::min(e.resolution - 1,
                            static_cast<int>(std::floor((center.y() + radius - e.origin.y()) / px)));
    const int c0 = std::max(0, static_cast<int>(std::floor((center.x() - radius - e.origin.x()) / px)));
    const int c1 = std::min(e.resolution - 1,
                            static_cast<int>(std::floor((center.x() + radius - e.origin.x()) / px)));
    const double r2 = radius * radius;
    for (int r = r0; r <= r1; ++r) {
        for (int c = c0; c <= c1; ++c) {
            if ((e.pixel_center(r, c) - center).squaredNorm() <= r2) {
                mark(r, c);
            }
        }
    }
    return added;
}

int stamp_polyline(GridWorld& world, const std::vector<Vec2>& points, double radius) {
    if (points.empty()) {
        return 0;
    }
    int added = stamp_disk(world, points.front(), radius);
    const double max_gap = 0.5 * radius;
    for (std::size_t i = 1; i < points.size(); ++i) {
        const Vec2 a = points[i - 1];
        const Vec2 d = points[i] - a;
        const int n = std::max(1, static_cast<int>(std::ceil(d.norm() / max_gap)));
        for (int k = 1; k <= n; ++k) {
            added += stamp_disk(world, a + d * (static_cast<double>(k) / n), radius);
        }
    }
    return added;
}

}  // namespace uvwipe
