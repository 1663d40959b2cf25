#pragma once

// Row-stacked training structures and the two de-duplication filters.

#include "structforge/level.hpp"
#include "structforge/raster.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace structforge {

struct GeneratorParams {
    std::uint64_t seed = 1;
    int min_rows = 1;
    int max_rows = 6;
    double min_row_width = 1.0;  // width of the bottom row, units
    double max_row_width = 6.0;
    std::array<double, 3> material_weights{1.0, 1.0, 1.0};  // wood, ice, stone
    double pig_probability = 0.6;
    RasterConfig raster{};

    // Throws ValidationError for empty ranges or bad weights and
    // CapacityError when the narrowest bottom row cannot fit the grid.
    void validate() const;
};

// Deterministic in (params, seed); params.seed is ignored here.
Structure generate_structure(const GeneratorParams& params, std::uint64_t seed);

// Structure i uses a seed derived from (params.seed, i).
std::vector<Structure> generate_corpus(const GeneratorParams& params, std::size_t count);
std::uint64_t corpus_seed(std::uint64_t base, std::size_t index);

struct MetadataKey {
    int wood = 0;
    int ice = 0;
    int stone = 0;
    long width_bucket = 0;   // floor(width / 0.1)
    long height_bucket = 0;  // floor(height / 0.1)

    friend auto operator<=>(const MetadataKey&, const MetadataKey&) = default;
};

MetadataKey metadata_key(const Structure& structure);

// Hex SHA-256 of the cropped binary occupancy outline (materials and block
// boundaries erased).
std::string shape_key(const Structure& structure, const RasterConfig& config = {});

struct FilterDrop {
    std::size_t index;
    enum class Reason { Metadata, Shape } reason;
    std::size_t duplicate_of;
};

struct FilterResult {
    std::vector<std::size_t> kept;  // indices into the input, in input order
    std::vector<FilterDrop> drops;

    std::size_t dropped() const { return drops.size(); }
};

// Metadata pass first, then shape pass over the survivors; the first
// occurrence of a key always stays.
FilterResult filter_corpus(const std::vector<Structure>& structures, const RasterConfig& config = {});

std::string manifest_line(const std::string& path, const MetadataKey& key, const std::string& shape);

}  // namespace structforge
