#pragma once

#include "uvwipe/baselines.hpp"
#include "uvwipe/grid_world.hpp"

#include <string>

namespace uvwipe::app {

struct SvgOptions {
    double pixel = 4.0;  // SVG units per raster pixel
};

// Border region, covered pixels, holes, then the path with start and end
// markers. The v axis points up. Path pieces outside the raster are clipped.
std::string render_svg(const GridWorld& world, const UVPath& path, const SvgOptions& options = {});

}  // namespace uvwipe::app
