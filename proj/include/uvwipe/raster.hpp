#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace uvwipe {

// Row-major 2D grid.
template <typename T>
class Raster {
public:
    Raster() = default;
    Raster(int rows, int cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    [[nodiscard]] int rows() const noexcept { return rows_; }
    [[nodiscard]] int cols() const noexcept { return cols_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] bool in_bounds(int r, int c) const noexcept {
        return r >= 0 && c >= 0 && r < rows_ && c < cols_;
    }

    T& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    const T& operator()(int r, int c) const {
        return data_[static_cast<std::size_t>(r) * cols_ + c];
    }

    [[nodiscard]] std::vector<T>& data() noexcept { return data_; }
    [[nodiscard]] const std::vector<T>& data() const noexcept { return data_; }

    void fill(T value) { std::fill(data_.begin(), data_.end(), value); }

    bool operator==(const Raster&) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<T> data_;
};

using BinaryMap = Raster<std::uint8_t>;

// Sum over pixels of the forward-difference gradient magnitude, with the
// raster zero-padded past its last row and column.
double total_variation(const BinaryMap& map);

// Uncovered valid pixels that are 8-adjacent to a covered pixel.
BinaryMap compute_frontier(const BinaryMap& coverage, const BinaryMap& border);

std::size_t count_ones(const BinaryMap& map);

}  // namespace uvwipe
