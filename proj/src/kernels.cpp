#include "structforge/kernels.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace structforge {

std::size_t BinaryMask::count() const {
    return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](std::uint8_t c) { return c != 0; }));
}

namespace kernels {

std::vector<int> window_sums_reference(const BinaryMask& mask, int fw, int fh) {
    const int W = mask.width, H = mask.height;
    std::vector<int> out(std::size_t(W) * H, -1);
    for (int r = 0; r + fh <= H; ++r) {
        for (int c = 0; c + fw <= W; ++c) {
            int sum = 0;
            for (int i = 0; i < fh; ++i)
                for (int j = 0; j < fw; ++j) sum += mask.at(r + i, c + j) ? 1 : 0;
            out[std::size_t(r) * W + c] = sum;
        }
    }
    return out;
}

std::vector<int> window_sums(const BinaryMask& mask, int fw, int fh) {
    const int W = mask.width, H = mask.height;
    // sat[(r) * (W+1) + c] = sum over rows < r, cols < c
    const int S = W + 1;
    std::vector<int> sat(std::size_t(H + 1) * S, 0);
    for (int r = 0; r < H; ++r) {
        int row_sum = 0;
        for (int c = 0; c < W; ++c) {
            row_sum += mask.cells[std::size_t(r) * W + c] ? 1 : 0;
            sat[std::size_t(r + 1) * S + c + 1] = sat[std::size_t(r) * S + c + 1] + row_sum;
        }
    }

    std::vector<int> out(std::size_t(W) * H, -1);
    const int rows = H - fh + 1;
    const int cols = W - fw + 1;
    if (rows <= 0 || cols <= 0) return out;
#pragma omp parallel for schedule(static)
    for (int r = 0; r < rows; ++r) {
        const int* lo = &sat[std::size_t(r) * S];
        const int* hi = &sat[std::size_t(r + fh) * S];
        int* dst = &out[std::size_t(r) * W];
        for (int c = 0; c < cols; ++c) {
            dst[c] = hi[c + fw] - hi[c] - lo[c + fw] + lo[c];
        }
    }
    return out;
}

std::vector<int> masked_window_sums_reference(const BinaryMask& mask, std::span<const std::uint8_t> kernel, int n) {
    const int W = mask.width, H = mask.height;
    std::vector<int> out(std::size_t(W) * H, -1);
    for (int r = 0; r + n <= H; ++r) {
        for (int c = 0; c + n <= W; ++c) {
            int sum = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (kernel[std::size_t(i) * n + j] && mask.at(r + i, c + j)) ++sum;
            out[std::size_t(r) * W + c] = sum;
        }
    }
    return out;
}

std::vector<int> masked_window_sums(const BinaryMask& mask, std::span<const std::uint8_t> kernel, int n) {
    const int W = mask.width, H = mask.height;
    std::vector<int> out(std::size_t(W) * H, -1);
    const int rows = H - n + 1;
    const int cols = W - n + 1;
    if (rows <= 0 || cols <= 0) return out;

    // Each kernel row is a run list; summing runs through a per-row prefix
    // keeps the cost at O(rows of kernel) per anchor.
    struct Run {
        int dy, x0, x1;
    };
    std::vector<Run> runs;
    for (int i = 0; i < n; ++i) {
        int j = 0;
        while (j < n) {
            if (!kernel[std::size_t(i) * n + j]) {
                ++j;
                continue;
            }
            int k = j;
            while (k < n && kernel[std::size_t(i) * n + k]) ++k;
            runs.push_back({i, j, k});
            j = k;
        }
    }
    std::vector<int> prefix(std::size_t(W + 1) * H, 0);
    for (int r = 0; r < H; ++r) {
        for (int c = 0; c < W; ++c) {
            prefix[std::size_t(r) * (W + 1) + c + 1] =
                prefix[std::size_t(r) * (W + 1) + c] + (mask.cells[std::size_t(r) * W + c] ? 1 : 0);
        }
    }

#pragma omp parallel for schedule(static)
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            int sum = 0;
            for (const auto& run : runs) {
                const int* p = &prefix[std::size_t(r + run.dy) * (W + 1)];
                sum += p[c + run.x1] - p[c + run.x0];
            }
            out[std::size_t(r) * W + c] = sum;
        }
    }
    return out;
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

}  // namespace kernels
}  // namespace structforge
