#include "structforge/decoder.hpp"

#include "structforge/error.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace structforge {

namespace {

constexpr int kMaxSweeps = 1000;

struct Candidate {
    double value;
    double hit;
    int area;
    int row;
    int col;
    std::size_t layer;
};

// Strict "is preferred over" ordering used by the greedy loops.
bool preferred(const Candidate& a, const Candidate& b) {
    if (a.value != b.value) return a.value > b.value;
    if (a.area != b.area) return a.area > b.area;
    if (a.row != b.row) return a.row < b.row;
    if (a.col != b.col) return a.col < b.col;
    return a.layer < b.layer;
}

void fill_layer(SelectionRanking& ranking, std::size_t k, const std::vector<int>& sums, double clip, bool parallel) {
    const int H = ranking.height(), W = ranking.width();
    const double area = ranking.footprint(k).area();
    auto fill_row = [&](int r) {
        for (int c = 0; c < W; ++c) {
            const int s = sums[std::size_t(r) * W + c];
            if (s < 0) continue;  // window leaves the grid
            const double hit = s / area;
            ranking.hit(k, r, c) = hit;
            ranking.size(k, r, c) = s;
            ranking.selection(k, r, c) = hit >= clip ? hit * s : 0.0;
        }
    };
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int r = 0; r < H; ++r) fill_row(r);
    } else {
        for (int r = 0; r < H; ++r) fill_row(r);
    }
}

bool rects_overlap(int r0, int c0, const Footprint& a, int r1, int c1, const Footprint& b) {
    return r0 < r1 + b.cells_high && r1 < r0 + a.cells_high && c0 < c1 + b.cells_wide && c1 < c0 + a.cells_wide;
}

// Nudges a box up or right out of a fixed block; returns true if it moved.
bool push_out(double& cx, double& cy, double half_w, double half_h, const Block& fixed) {
    const double px = std::min(cx + half_w, fixed.right()) - std::max(cx - half_w, fixed.left());
    const double py = std::min(cy + half_h, fixed.top()) - std::max(cy - half_h, fixed.bottom());
    if (px <= kOverlapEpsilon || py <= kOverlapEpsilon) return false;
    if (px < py && fixed.cx <= cx) {
        cx += px + kOverlapEpsilon;
    } else {
        cy += py + kOverlapEpsilon;
    }
    return true;
}

// Resolves one interpenetrating pair along the shallower axis by moving the
// right-hand (or upper) block; returns true if anything moved.
bool separate(Block& a, Block& b) {
    const double px = std::min(a.right(), b.right()) - std::max(a.left(), b.left());
    const double py = std::min(a.top(), b.top()) - std::max(a.bottom(), b.bottom());
    if (px <= kOverlapEpsilon || py <= kOverlapEpsilon) return false;
    if (px < py) {
        Block& mover = a.cx > b.cx ? a : b;
        mover.cx += px + kOverlapEpsilon;
    } else {
        Block& mover = a.cy > b.cy ? a : b;
        mover.cy += py + kOverlapEpsilon;
    }
    return true;
}

}  // namespace

std::size_t decoder_layer_of(BlockType type, Orientation orientation) {
    if (spec_of(type).square) orientation = Orientation::Horizontal;
    for (std::size_t k = 0; k < kDecoderLayers.size(); ++k) {
        if (kDecoderLayers[k].type == type && kDecoderLayers[k].orientation == orientation) return k;
    }
    return 0;
}

const BinaryMask& MaterialMasks::of(Material m) const {
    switch (m) {
        case Material::Wood: return wood;
        case Material::Ice: return ice;
        case Material::Stone: return stone;
    }
    return wood;
}

MaterialMasks material_masks(const LayerTensor& tensor) {
    const auto grid = from_multilayer(tensor);
    const int W = grid.width(), H = grid.height();
    MaterialMasks masks{BinaryMask(W, H), BinaryMask(W, H), BinaryMask(W, H), BinaryMask(W, H)};
    for (int r = 0; r < H; ++r) {
        for (int c = 0; c < W; ++c) {
            switch (grid.at(r, c)) {
                case Label::Wood: masks.wood.set(r, c); break;
                case Label::Ice: masks.ice.set(r, c); break;
                case Label::Stone: masks.stone.set(r, c); break;
                case Label::Pig: masks.pig.set(r, c); break;
                case Label::Air: break;
            }
        }
    }
    return masks;
}

SelectionRanking::SelectionRanking(int height, int width, double raster_size)
    : height_(height),
      width_(width),
      hit_(kDecoderLayerCount * std::size_t(height) * width, 0.0),
      size_(hit_.size(), 0.0),
      selection_(hit_.size(), 0.0) {
    for (std::size_t k = 0; k < kDecoderLayerCount; ++k) {
        footprints_[k] = canonical_footprint(kDecoderLayers[k].type, kDecoderLayers[k].orientation, raster_size);
    }
}

SelectionRanking build_selection_ranking(const BinaryMask& mask, const DecoderConfig& config) {
    SelectionRanking ranking(mask.height, mask.width, config.raster.raster_size);
    for (std::size_t k = 0; k < kDecoderLayerCount; ++k) {
        const auto& fp = ranking.footprint(k);
        fill_layer(ranking, k, kernels::window_sums(mask, fp.cells_wide, fp.cells_high), config.clip, true);
    }
    return ranking;
}

SelectionRanking build_selection_ranking_reference(const BinaryMask& mask, const DecoderConfig& config) {
    SelectionRanking ranking(mask.height, mask.width, config.raster.raster_size);
    for (std::size_t k = 0; k < kDecoderLayerCount; ++k) {
        const auto& fp = ranking.footprint(k);
        fill_layer(ranking, k, kernels::window_sums_reference(mask, fp.cells_wide, fp.cells_high), config.clip,
                   false);
    }
    return ranking;
}

Selection select_blocks(const SelectionRanking& ranking, Material material) {
    const int H = ranking.height(), W = ranking.width();
    std::vector<Candidate> candidates;
    for (std::size_t k = 0; k < kDecoderLayerCount; ++k) {
        const int area = ranking.footprint(k).area();
        for (int r = 0; r < H; ++r) {
            for (int c = 0; c < W; ++c) {
                const double v = ranking.selection(k, r, c);
                if (v > 0.0) candidates.push_back({v, ranking.hit(k, r, c), area, r, c, k});
            }
        }
    }
    std::sort(candidates.begin(), candidates.end(), preferred);

    // A candidate survives the zeroing steps exactly when its footprint is
    // disjoint from every placed footprint, so walking the sorted list and
    // skipping blocked entries reproduces the argmax loop.
    Selection out;
    std::vector<std::uint8_t> taken(std::size_t(H) * W, 0);
    for (const auto& cand : candidates) {
        const auto& fp = ranking.footprint(cand.layer);
        bool free = true;
        for (int i = 0; i < fp.cells_high && free; ++i) {
            const auto* row = &taken[std::size_t(cand.row + i) * W + cand.col];
            for (int j = 0; j < fp.cells_wide; ++j) {
                if (row[j]) {
                    free = false;
                    break;
                }
            }
        }
        if (!free) continue;
        for (int i = 0; i < fp.cells_high; ++i) {
            std::fill_n(&taken[std::size_t(cand.row + i) * W + cand.col], fp.cells_wide, std::uint8_t{1});
        }
        ++out.iterations;
        out.placements.push_back({cand.layer, cand.row, cand.col, fp, material, cand.value, cand.hit});
    }
    return out;
}

Selection select_blocks_reference(SelectionRanking ranking, Material material) {
    const int H = ranking.height(), W = ranking.width();
    Selection out;
    for (;;) {
        bool found = false;
        Candidate best{};
        for (std::size_t k = 0; k < kDecoderLayerCount; ++k) {
            const int area = ranking.footprint(k).area();
            for (int r = 0; r < H; ++r) {
                for (int c = 0; c < W; ++c) {
                    const double v = ranking.selection(k, r, c);
                    if (v <= 0.0) continue;
                    Candidate cand{v, ranking.hit(k, r, c), area, r, c, k};
                    if (!found || preferred(cand, best)) {
                        best = cand;
                        found = true;
                    }
                }
            }
        }
        if (!found) break;
        ++out.iterations;
        const auto& placed = ranking.footprint(best.layer);
        out.placements.push_back({best.layer, best.row, best.col, placed, material, best.value, best.hit});
        for (std::size_t k = 0; k < kDecoderLayerCount; ++k) {
            const auto& fp = ranking.footprint(k);
            for (int r = std::max(0, best.row - fp.cells_high + 1); r < std::min(H, best.row + placed.cells_high); ++r) {
                for (int c = std::max(0, best.col - fp.cells_wide + 1); c < std::min(W, best.col + placed.cells_wide);
                     ++c) {
                    if (rects_overlap(best.row, best.col, placed, r, c, fp)) ranking.selection(k, r, c) = 0.0;
                }
            }
        }
    }
    return out;
}

Block to_block(const Placement& placement, double raster_size) {
    const auto& layer = kDecoderLayers[placement.layer];
    Block b;
    b.type = layer.type;
    b.orientation = layer.orientation;
    b.material = placement.material;
    b.cx = (placement.col + placement.footprint.cells_wide / 2.0) * raster_size;
    b.cy = (placement.row + placement.footprint.cells_high / 2.0) * raster_size;
    return b;
}

std::vector<Pig> place_pigs(const BinaryMask& pig_mask, const DecoderConfig& config) {
    const double rs = config.raster.raster_size;
    const int n = pig_cells(config.pig_diameter, rs);
    const auto disc = disc_mask(n);
    const int area = static_cast<int>(std::count(disc.begin(), disc.end(), std::uint8_t{1}));
    const int W = pig_mask.width, H = pig_mask.height;
    const auto sums = kernels::masked_window_sums(pig_mask, disc, n);

    std::vector<Candidate> candidates;
    for (int r = 0; r < H; ++r) {
        for (int c = 0; c < W; ++c) {
            const int s = sums[std::size_t(r) * W + c];
            if (s <= 0) continue;
            const double hit = double(s) / area;
            if (hit < config.clip) continue;
            candidates.push_back({hit * s, hit, area, r, c, 0});
        }
    }
    std::sort(candidates.begin(), candidates.end(), preferred);

    std::vector<Pig> pigs;
    std::vector<std::uint8_t> taken(std::size_t(H) * W, 0);
    auto for_disc = [&](const Candidate& cand, auto&& fn) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (disc[std::size_t(i) * n + j] && !fn(std::size_t(cand.row + i) * W + cand.col + j)) return false;
        return true;
    };
    for (const auto& cand : candidates) {
        if (!for_disc(cand, [&](std::size_t idx) { return taken[idx] == 0; })) continue;
        for_disc(cand, [&](std::size_t idx) {
            taken[idx] = 1;
            return true;
        });
        pigs.push_back({(cand.col + n / 2.0) * rs, (cand.row + n / 2.0) * rs, config.pig_diameter});
    }
    return pigs;
}

Structure adjust_overlaps(Structure structure) {
    auto& blocks = structure.blocks;
    std::vector<std::size_t> order(blocks.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (blocks[a].cy != blocks[b].cy) return blocks[a].cy < blocks[b].cy;
        return blocks[a].cx < blocks[b].cx;
    });

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool moved = false;
        for (std::size_t i = 0; i < order.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                if (separate(blocks[order[j]], blocks[order[i]])) moved = true;
            }
        }
        if (!moved) return structure;
    }

    std::ostringstream msg;
    msg << "overlap adjustment did not converge after " << kMaxSweeps << " sweeps; offending pairs:";
    for (const auto& [i, j] : overlapping_pairs(structure)) msg << " (" << i << ", " << j << ")";
    throw AdjustmentError(msg.str());
}

DecodeResult decode_detailed(const LayerTensor& tensor, const DecoderConfig& config) {
    const auto masks = material_masks(tensor);
    const double rs = config.raster.raster_size;

    DecodeResult result;
    for (std::size_t m = 0; m < kMaterials.size(); ++m) {
        const Material material = kMaterials[m];
        result.selections[m] = select_blocks(build_selection_ranking(masks.of(material), config), material);
        for (const auto& p : result.selections[m].placements) result.structure.blocks.push_back(to_block(p, rs));
    }
    result.structure.pigs = place_pigs(masks.pig, config);
    result.pig_iterations = result.structure.pigs.size();

    // True extents exceed the rounded footprints by up to half a cell, which
    // can push bottom-row blocks marginally below ground.
    for (auto& b : result.structure.blocks) {
        if (b.bottom() < 0.0) b.cy = b.effective_height() / 2;
    }
    result.structure = adjust_overlaps(std::move(result.structure));

    for (auto& p : result.structure.pigs) {
        const double r = p.diameter / 2;
        if (p.cy - r < 0.0) p.cy = r;
        for (int pass = 0; pass < kMaxSweeps; ++pass) {
            bool moved = false;
            for (const auto& b : result.structure.blocks) moved = push_out(p.cx, p.cy, r, r, b) || moved;
            if (!moved) break;
        }
    }
    return result;
}

Structure decode(const LayerTensor& tensor, const DecoderConfig& config) {
    return decode_detailed(tensor, config).structure;
}

}  // namespace structforge
