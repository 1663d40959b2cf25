#include "structforge/raster.hpp"

#include "structforge/error.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <string>

namespace structforge {

namespace {

struct CellRect {
    int col0, row0, col1, row1;  // half-open
    Label label;
    bool disc;
};

}  // namespace

void RasterConfig::validate() const {
    if (!(raster_size > 0.0) || !std::isfinite(raster_size)) {
        throw ValidationError("raster size must be positive, got " + format_number(raster_size));
    }
    int largest = 0;
    for (const auto& spec : kBlockCatalog) {
        const auto fp = canonical_footprint(spec.type, Orientation::Horizontal, raster_size);
        largest = std::max({largest, fp.cells_wide, fp.cells_high});
    }
    if (width < largest || height < largest) {
        throw ValidationError("grid " + std::to_string(width) + "x" + std::to_string(height) +
                              " is smaller than the largest block footprint (" + std::to_string(largest) + " cells)");
    }
}

std::size_t OccupancyGrid::count(Label label) const {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), static_cast<std::uint8_t>(label)));
}

int cell_index(double coordinate, double raster_size) {
    // Snap the quotient to 1e-7 cells so that x.5 boundaries round the same
    // way no matter how the coordinate was produced.
    const double q = std::round(coordinate / raster_size * 1e7) / 1e7;
    return static_cast<int>(std::floor(q + 0.5));
}

Footprint canonical_footprint(BlockType type, Orientation orientation, double raster_size) {
    const auto& s = spec_of(type);
    const double w = orientation == Orientation::Horizontal ? s.width : s.height;
    const double h = orientation == Orientation::Horizontal ? s.height : s.width;
    return {cell_index(w, raster_size), cell_index(h, raster_size)};
}

int pig_cells(double diameter, double raster_size) { return std::max(1, cell_index(diameter, raster_size)); }

std::vector<std::uint8_t> disc_mask(int n) {
    std::vector<std::uint8_t> mask(std::size_t(n) * n, 0);
    const double r = n / 2.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double dy = i + 0.5 - r;
            const double dx = j + 0.5 - r;
            mask[std::size_t(i) * n + j] = dx * dx + dy * dy <= r * r ? 1 : 0;
        }
    }
    return mask;
}

OccupancyGrid rasterize(const Structure& structure, const RasterConfig& config, Anchoring anchoring) {
    config.validate();
    OccupancyGrid grid(config.width, config.height);
    if (structure.empty()) return grid;

    const double rs = config.raster_size;
    double origin_x = 0.0;
    double origin_y = 0.0;
    if (anchoring == Anchoring::Centered) {
        const auto box = *bounding_box(structure);
        origin_x = box.min_x;
        origin_y = box.min_y;
    }

    std::vector<CellRect> rects;
    rects.reserve(structure.blocks.size() + structure.pigs.size());
    for (const auto& b : structure.blocks) {
        rects.push_back({cell_index(b.left() - origin_x, rs), cell_index(b.bottom() - origin_y, rs),
                         cell_index(b.right() - origin_x, rs), cell_index(b.top() - origin_y, rs),
                         label_of(b.material), false});
    }
    for (const auto& p : structure.pigs) {
        const int n = pig_cells(p.diameter, rs);
        const int c0 = cell_index(p.cx - p.diameter / 2 - origin_x, rs);
        const int r0 = cell_index(p.cy - p.diameter / 2 - origin_y, rs);
        rects.push_back({c0, r0, c0 + n, r0 + n, Label::Pig, true});
    }

    int min_col = INT_MAX, min_row = INT_MAX, max_col = INT_MIN, max_row = INT_MIN;
    for (const auto& r : rects) {
        min_col = std::min(min_col, r.col0);
        min_row = std::min(min_row, r.row0);
        max_col = std::max(max_col, r.col1);
        max_row = std::max(max_row, r.row1);
    }
    const int need_w = max_col - min_col;
    const int need_h = max_row - min_row;

    int shift_col = 0;
    int shift_row = 0;
    if (anchoring == Anchoring::Centered) {
        if (need_w > config.width || need_h > config.height) {
            throw CapacityError("structure needs " + std::to_string(need_w) + "x" + std::to_string(need_h) +
                                    " cells but the grid is " + std::to_string(config.width) + "x" +
                                    std::to_string(config.height),
                                need_w, need_h);
        }
        shift_col = (config.width - need_w) / 2 - min_col;
        shift_row = -min_row;
    } else if (min_col < 0 || min_row < 0 || max_col > config.width || max_row > config.height) {
        throw CapacityError("structure spans cells [" + std::to_string(min_col) + ", " + std::to_string(max_col) +
                                ") x [" + std::to_string(min_row) + ", " + std::to_string(max_row) +
                                ") outside the " + std::to_string(config.width) + "x" +
                                std::to_string(config.height) + " grid",
                            std::max(max_col, config.width) - std::min(min_col, 0),
                            std::max(max_row, config.height) - std::min(min_row, 0));
    }

    std::vector<std::uint8_t> disc;
    int disc_n = 0;
    for (const auto& r : rects) {
        if (r.disc) {
            const int n = r.col1 - r.col0;
            if (n != disc_n) {
                disc = disc_mask(n);
                disc_n = n;
            }
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    if (disc[std::size_t(i) * n + j]) grid.set(r.row0 + shift_row + i, r.col0 + shift_col + j, r.label);
                }
            }
        } else {
            for (int row = r.row0; row < r.row1; ++row) {
                for (int col = r.col0; col < r.col1; ++col) grid.set(row + shift_row, col + shift_col, r.label);
            }
        }
    }
    return grid;
}

LayerTensor to_multilayer(const OccupancyGrid& grid) {
    LayerTensor tensor(kLabelCount, grid.height(), grid.width());
    for (int row = 0; row < grid.height(); ++row) {
        for (int col = 0; col < grid.width(); ++col) {
            tensor.at(static_cast<int>(grid.at(row, col)), row, col) = 1.0f;
        }
    }
    return tensor;
}

OccupancyGrid from_multilayer(const LayerTensor& tensor) {
    if (tensor.layers() != kLabelCount) {
        throw ValidationError("expected a " + std::to_string(kLabelCount) + "-layer tensor, got " +
                              std::to_string(tensor.layers()));
    }
    OccupancyGrid grid(tensor.width(), tensor.height());
    for (int row = 0; row < tensor.height(); ++row) {
        for (int col = 0; col < tensor.width(); ++col) {
            int best = 0;
            float best_value = tensor.at(0, row, col);
            for (int layer = 1; layer < kLabelCount; ++layer) {
                const float v = tensor.at(layer, row, col);
                if (v > best_value) {
                    best = layer;
                    best_value = v;
                }
            }
            grid.set(row, col, static_cast<Label>(best));
        }
    }
    return grid;
}

double label_iou(const OccupancyGrid& a, const OccupancyGrid& b) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw ValidationError("label_iou: grid sizes differ");
    }
    std::size_t inter = 0;
    std::size_t uni = 0;
    const auto ra = a.raw();
    const auto rb = b.raw();
    for (std::size_t i = 0; i < ra.size(); ++i) {
        const bool oa = ra[i] != 0;
        const bool ob = rb[i] != 0;
        if (oa || ob) ++uni;
        if (oa && ob && ra[i] == rb[i]) ++inter;
    }
    return uni == 0 ? 1.0 : double(inter) / double(uni);
}

}  // namespace structforge
