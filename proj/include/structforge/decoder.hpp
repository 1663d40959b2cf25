#pragma once

// Greedy decoding of a five-layer confidence tensor back into a Structure.
//
// Pipeline: argmax labels -> one binary mask per material -> per material a
// 13-layer Selection-Ranking (clipped hit probability times covered-cell
// count, one layer per block type/orientation) -> repeated global argmax
// placement with overlap zeroing -> disc-kernel pig placement -> mapping to
// continuous coordinates -> overlap adjustment.

#include "structforge/kernels.hpp"
#include "structforge/level.hpp"
#include "structforge/raster.hpp"

#include <array>
#include <string_view>
#include <vector>

namespace structforge {

struct DecoderLayer {
    BlockType type;
    Orientation orientation;
    std::string_view id;    // "1", "2h", "2v", ...
    std::string_view name;  // "RectBig (Vert)" style display name
};

inline constexpr std::size_t kDecoderLayerCount = 13;

inline constexpr std::array<DecoderLayer, kDecoderLayerCount> kDecoderLayers{{
    {BlockType::SquareHole, Orientation::Horizontal, "1", "SquareHole"},
    {BlockType::RectBig, Orientation::Horizontal, "2h", "RectBig"},
    {BlockType::RectBig, Orientation::Vertical, "2v", "RectBig (Vert)"},
    {BlockType::RectMedium, Orientation::Horizontal, "3h", "RectMedium"},
    {BlockType::RectMedium, Orientation::Vertical, "3v", "RectMedium (Vert)"},
    {BlockType::RectSmall, Orientation::Horizontal, "4h", "RectSmall"},
    {BlockType::RectSmall, Orientation::Vertical, "4v", "RectSmall (Vert)"},
    {BlockType::RectFat, Orientation::Horizontal, "5h", "RectFat"},
    {BlockType::RectFat, Orientation::Vertical, "5v", "RectFat (Vert)"},
    {BlockType::RectTiny, Orientation::Horizontal, "6h", "RectTiny"},
    {BlockType::RectTiny, Orientation::Vertical, "6v", "RectTiny (Vert)"},
    {BlockType::SquareTiny, Orientation::Horizontal, "7", "SquareTiny"},
    {BlockType::SquareSmall, Orientation::Horizontal, "8", "SquareSmall"},
}};

// Layer index of a block; square types always map to their single layer.
std::size_t decoder_layer_of(BlockType type, Orientation orientation);

struct DecoderConfig {
    RasterConfig raster{};
    double clip = 0.98;  // hit probabilities below this contribute nothing
    double pig_diameter = kDefaultPigDiameter;
};

struct MaterialMasks {
    BinaryMask wood;
    BinaryMask ice;
    BinaryMask stone;
    BinaryMask pig;

    const BinaryMask& of(Material m) const;
};

MaterialMasks material_masks(const LayerTensor& tensor);

// Three stacked 13 x H x W matrices; see kDecoderLayers for the layer order.
class SelectionRanking {
public:
    SelectionRanking() = default;
    SelectionRanking(int height, int width, double raster_size);

    int height() const { return height_; }
    int width() const { return width_; }
    const Footprint& footprint(std::size_t layer) const { return footprints_[layer]; }

    double& hit(std::size_t k, int r, int c) { return hit_[index(k, r, c)]; }
    double hit(std::size_t k, int r, int c) const { return hit_[index(k, r, c)]; }
    double& size(std::size_t k, int r, int c) { return size_[index(k, r, c)]; }
    double size(std::size_t k, int r, int c) const { return size_[index(k, r, c)]; }
    double& selection(std::size_t k, int r, int c) { return selection_[index(k, r, c)]; }
    double selection(std::size_t k, int r, int c) const { return selection_[index(k, r, c)]; }

    std::span<const double> selection_layer(std::size_t k) const {
        return std::span<const double>(selection_).subspan(k * std::size_t(height_) * width_,
                                                           std::size_t(height_) * width_);
    }

    friend bool operator==(const SelectionRanking&, const SelectionRanking&) = default;

private:
    std::size_t index(std::size_t k, int r, int c) const { return (k * height_ + r) * std::size_t(width_) + c; }

    int height_ = 0;
    int width_ = 0;
    std::array<Footprint, kDecoderLayerCount> footprints_{};
    std::vector<double> hit_;
    std::vector<double> size_;
    std::vector<double> selection_;
};

SelectionRanking build_selection_ranking(const BinaryMask& mask, const DecoderConfig& config = {});
SelectionRanking build_selection_ranking_reference(const BinaryMask& mask, const DecoderConfig& config = {});

struct Placement {
    std::size_t layer = 0;
    int row = 0;  // anchor = bottom-left cell of the footprint
    int col = 0;
    Footprint footprint{};
    Material material = Material::Wood;
    double value = 0.0;  // selection value at placement time
    double hit = 0.0;

    friend bool operator==(const Placement&, const Placement&) = default;
};

struct Selection {
    std::vector<Placement> placements;
    std::size_t iterations = 0;
};

// Repeated global argmax; ties go to larger footprint area, then lower row,
// lower column, lower layer index. Every entry whose footprint overlaps a
// placed block is zeroed; stops when nothing positive remains.
Selection select_blocks(const SelectionRanking& ranking, Material material);

// Literal argmax-and-zero loop over the full matrix, kept as the oracle for
// select_blocks.
Selection select_blocks_reference(SelectionRanking ranking, Material material);

Block to_block(const Placement& placement, double raster_size);

std::vector<Pig> place_pigs(const BinaryMask& pig_mask, const DecoderConfig& config = {});

// Moves blocks up and to the right until no pair interpenetrates by more than
// kOverlapEpsilon. Each pair is separated along its shallower axis by moving
// the right-hand or upper block. Throws AdjustmentError after 1000 sweeps.
Structure adjust_overlaps(Structure structure);

struct DecodeResult {
    Structure structure;
    std::array<Selection, 3> selections;  // wood, ice, stone
    std::size_t pig_iterations = 0;
};

DecodeResult decode_detailed(const LayerTensor& tensor, const DecoderConfig& config = {});
Structure decode(const LayerTensor& tensor, const DecoderConfig& config = {});

}  // namespace structforge
