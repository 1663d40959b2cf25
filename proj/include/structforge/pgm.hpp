#pragma once

#include "structforge/raster.hpp"

#include <span>
#include <string>

namespace structforge {

// Binary PGM (P5, maxval 255). Values are scaled linearly so the layer
// maximum maps to 255; negative values clamp to 0. The top image row is the
// top grid row.
std::string encode_pgm(std::span<const double> values, int width, int height);
std::string encode_pgm(std::span<const float> values, int width, int height);

// Flat argmax image: label / 4 scaled to 0..255.
std::string encode_label_pgm(const OccupancyGrid& grid);

}  // namespace structforge
