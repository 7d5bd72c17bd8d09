#include "uvwipe/raster.hpp"
#include "uvwipe/error.hpp"

#include <algorithm>
#include <cmath>

namespace uvwipe {

double total_variation(const BinaryMap& map) {
    const int rows = map.rows();
    const int cols = map.cols();
    double tv = 0.0;
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            const double x = map(i, j);
            const double down = i + 1 < rows ? static_cast<double>(map(i + 1, j)) : 0.0;
            const double right = j + 1 < cols ? static_cast<double>(map(i, j + 1)) : 0.0;
            const double di = down - x;
            const double dj = right - x;
            tv += std::sqrt(di * di + dj * dj);
        }
    }
    return tv;
}

BinaryMap compute_frontier(const BinaryMap& coverage, const BinaryMap& border) {
    if (coverage.rows() != border.rows() || coverage.cols() != border.cols()) {
        throw Error(ErrorKind::shape_mismatch, "coverage and border maps differ in shape");
    }
    const int rows = coverage.rows();
    const int cols = coverage.cols();
    BinaryMap frontier(rows, cols, 0);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            if (!border(i, j) || coverage(i, j)) {
                continue;
            }
            bool adjacent = false;
            for (int di = -1; di <= 1 && !adjacent; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    if ((di != 0 || dj != 0) && coverage.in_bounds(i + di, j + dj) &&
                        coverage(i + di, j + dj)) {
                        adjacent = true;
                        break;
                    }
                }
            }
            frontier(i, j) = adjacent ? 1 : 0;
        }
    }
    return frontier;
}

std::size_t count_ones(const BinaryMap& map) {
    return static_cast<std::size_t>(
        std::count_if(map.data().begin(), map.data().end(), [](std::uint8_t v) { return v != 0; }));
}

}  // namespace uvwipe
