#include "structforge/pgm.hpp"

#include <algorithm>
#include <cmath>

namespace structforge {

namespace {

template <typename T>
std::string encode(std::span<const T> values, int width, int height) {
    double peak = 0.0;
    for (T v : values) peak = std::max(peak, double(v));
    std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    out.reserve(out.size() + std::size_t(width) * height);
    for (int r = height - 1; r >= 0; --r) {
        for (int c = 0; c < width; ++c) {
            const double v = double(values[std::size_t(r) * width + c]);
            const double scaled = peak > 0.0 ? std::clamp(v / peak, 0.0, 1.0) * 255.0 : 0.0;
            out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(scaled))));
        }
    }
    return out;
}

}  // namespace

std::string encode_pgm(std::span<const double> values, int width, int height) { return encode(values, width, height); }

std::string encode_pgm(std::span<const float> values, int width, int height) { return encode(values, width, height); }

std::string encode_label_pgm(const OccupancyGrid& grid) {
    // Fixed gray levels per label rather than scaling to the image maximum.
    std::string out = "P5\n" + std::to_string(grid.width()) + " " + std::to_string(grid.height()) + "\n255\n";
    for (int r = grid.height() - 1; r >= 0; --r) {
        for (int c = 0; c < grid.width(); ++c) {
            const int level = static_cast<int>(grid.at(r, c)) * 255 / (kLabelCount - 1);
            out.push_back(static_cast<char>(static_cast<unsigned char>(level)));
        }
    }
    return out;
}

}  // namespace structforge
