#pragma once

// Discretization of structures onto a fixed cell grid.
//
// Grids are stored row-major with row 0 at the bottom (ground) and column 0
// at the left. The "grid frame" is the continuous coordinate system whose
// origin is the bottom-left corner of cell (0, 0); one cell spans
// raster_size units on each axis.

#include "structforge/level.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace structforge {

enum class Label : std::uint8_t { Air = 0, Wood = 1, Ice = 2, Stone = 3, Pig = 4 };

inline constexpr int kLabelCount = 5;

constexpr Label label_of(Material m) { return static_cast<Label>(static_cast<int>(m) + 1); }

struct RasterConfig {
    double raster_size = 0.07;
    int width = 128;
    int height = 128;

    // Throws ValidationError when the grid cannot hold the largest block.
    void validate() const;
};

class OccupancyGrid {
public:
    OccupancyGrid() = default;
    OccupancyGrid(int width, int height) : width_(width), height_(height), cells_(std::size_t(width) * height, 0) {}

    int width() const { return width_; }
    int height() const { return height_; }

    Label at(int row, int col) const { return static_cast<Label>(cells_[index(row, col)]); }
    void set(int row, int col, Label label) { cells_[index(row, col)] = static_cast<std::uint8_t>(label); }

    std::span<const std::uint8_t> raw() const { return cells_; }
    std::size_t count(Label label) const;
    std::size_t count_occupied() const { return cells_.size() - count(Label::Air); }

    friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;

private:
    std::size_t index(int row, int col) const { return std::size_t(row) * width_ + col; }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> cells_;
};

// L x H x W real tensor, layer-major, row 0 at the bottom.
class LayerTensor {
public:
    LayerTensor() = default;
    LayerTensor(int layers, int height, int width, float fill = 0.0f)
        : layers_(layers), height_(height), width_(width), values_(std::size_t(layers) * height * width, fill) {}

    int layers() const { return layers_; }
    int height() const { return height_; }
    int width() const { return width_; }

    float& at(int layer, int row, int col) { return values_[index(layer, row, col)]; }
    float at(int layer, int row, int col) const { return values_[index(layer, row, col)]; }

    std::span<float> values() { return values_; }
    std::span<const float> values() const { return values_; }

    friend bool operator==(const LayerTensor&, const LayerTensor&) = default;

private:
    std::size_t index(int layer, int row, int col) const {
        return (std::size_t(layer) * height_ + row) * width_ + col;
    }

    int layers_ = 0;
    int height_ = 0;
    int width_ = 0;
    std::vector<float> values_;
};

struct Footprint {
    int cells_wide = 0;
    int cells_high = 0;

    int area() const { return cells_wide * cells_high; }
    friend bool operator==(const Footprint&, const Footprint&) = default;
};

Footprint canonical_footprint(BlockType type, Orientation orientation, double raster_size = 0.07);

// Side length in cells of the square box that holds a rasterized pig disc.
int pig_cells(double diameter, double raster_size);

// n x n mask (row-major, bottom row first) of the cells a pig disc covers.
std::vector<std::uint8_t> disc_mask(int diameter_cells);

// Nearest-integer cell index of a coordinate, robust to floating-point noise
// around half-cell boundaries.
int cell_index(double coordinate, double raster_size);

enum class Anchoring {
    Centered,   // bounding box horizontally centered, bottom edge on row 0
    GridFrame,  // coordinates are already in the grid frame
};

// Paints blocks in list order, then pigs; later objects overwrite earlier ones.
// Throws CapacityError when the structure does not fit.
OccupancyGrid rasterize(const Structure& structure, const RasterConfig& config = {},
                        Anchoring anchoring = Anchoring::Centered);

LayerTensor to_multilayer(const OccupancyGrid& grid);

// Per-cell argmax over the five layers; ties go to the lowest layer index.
OccupancyGrid from_multilayer(const LayerTensor& tensor);

// Label-aware intersection over union of the non-air cells of two same-sized grids.
double label_iou(const OccupancyGrid& a, const OccupancyGrid& b);

}  // namespace structforge
