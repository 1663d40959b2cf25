#pragma once

// Sliding-window sums over binary masks.
//
// Each routine has a straightforward serial *_reference version that sums
// every window directly, and a production version: rectangles go through a
// summed-area table, both are parallelized over rows with OpenMP. The
// reference versions exist so tests can hold the fast paths to them.

#include <cstdint>
#include <span>
#include <vector>

namespace structforge {

struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> cells;  // row-major, row 0 at the bottom

    BinaryMask() = default;
    BinaryMask(int w, int h) : width(w), height(h), cells(std::size_t(w) * h, 0) {}

    bool at(int row, int col) const { return cells[std::size_t(row) * width + col] != 0; }
    void set(int row, int col, bool v = true) { cells[std::size_t(row) * width + col] = v ? 1 : 0; }
    std::size_t count() const;
};

namespace kernels {

// out[r * W + c] = number of set cells in the fw x fh window whose bottom-left
// cell is (r, c); -1 where the window leaves the grid.
std::vector<int> window_sums_reference(const BinaryMask& mask, int fw, int fh);
std::vector<int> window_sums(const BinaryMask& mask, int fw, int fh);

// Same, for an arbitrary n x n 0/1 kernel (row-major, bottom row first).
std::vector<int> masked_window_sums_reference(const BinaryMask& mask, std::span<const std::uint8_t> kernel, int n);
std::vector<int> masked_window_sums(const BinaryMask& mask, std::span<const std::uint8_t> kernel, int n);

// Number of OpenMP threads a parallel region would use (1 without OpenMP).
int max_threads();
void set_threads(int n);

}  // namespace kernels
}  // namespace structforge
