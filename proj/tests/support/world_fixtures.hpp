#pragma once

#include "uvwipe/grid_world.hpp"
#include "uvwipe/raster.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace uvwipe::fixtures {

// Random world with a disk-shaped border and scattered coverage.
inline GridWorld random_world(int res, std::mt19937_64& rng) {
    GridWorld w(GridExtent{res, Vec2(-1, -1), 2.0});
    std::bernoulli_distribution bit(0.3);
    std::uniform_real_distribution<double> radius(0.6, 1.0);
    const double rb = radius(rng);
    for (int r = 0; r < res; ++r) {
        for (int c = 0; c < res; ++c) {
            w.border(r, c) = w.extent.pixel_center(r, c).norm() <= rb;
            w.coverage(r, c) = w.border(r, c) && bit(rng);
        }
    }
    w.refresh_frontier();
    return w;
}

// Rotates every raster a quarter turn counterclockwise about the center.
inline GridWorld rotate_quarter(const GridWorld& w) {
    GridWorld out(w.extent);
    const int n = w.resolution();
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            // (x, y) -> (-y, x): column follows -row, row follows column.
            out.coverage(c, n - 1 - r) = w.coverage(r, c);
            out.border(c, n - 1 - r) = w.border(r, c);
            out.frontier(c, n - 1 - r) = w.frontier(r, c);
            out.hole(c, n - 1 - r) = w.hole(r, c);
        }
    }
    return out;
}

// Straightforward restatement of total variation: pad explicitly, then difference.
inline double tv_oracle(const BinaryMap& m) {
    const int rows = m.rows();
    const int cols = m.cols();
    std::vector<std::vector<int>> padded(rows + 1, std::vector<int>(cols + 1, 0));
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) padded[r][c] = m(r, c);
    }
    double sum = 0.0;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int gx = padded[r][c + 1] - padded[r][c];
            const int gy = padded[r + 1][c] - padded[r][c];
            sum += std::sqrt(static_cast<double>(gx * gx + gy * gy));
        }
    }
    return sum;
}

inline BinaryMap random_map(int n, std::mt19937_64& rng, double p) {
    std::bernoulli_distribution bit(p);
    BinaryMap m(n, n);
    for (auto& x : m.data()) x = bit(rng);
    return m;
}

}  // namespace uvwipe::fixtures
