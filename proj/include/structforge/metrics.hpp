#pragma once

#include "structforge/decoder.hpp"
#include "structforge/level.hpp"

#include <array>
#include <span>
#include <string>

namespace structforge {

struct StructureMetrics {
    bool empty = true;
    double width = 0.0;
    double height = 0.0;
    double density = 0.0;  // occupied cells / cells of the encoding's own bounding box
    double block_count = 0.0;
    double pig_count = 0.0;
    std::array<double, kDecoderLayerCount> frequency{};  // share per decoder layer
};

StructureMetrics structure_metrics(const Structure& structure, const RasterConfig& config = {});

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;  // population
};

struct CorpusSummary {
    std::size_t count = 0;
    MeanSd width, height, density, block_count, pig_count;
    std::array<MeanSd, kDecoderLayerCount> frequency{};
    double zero_pig_fraction = 0.0;
};

// Throws EmptyInputError for an empty list.
CorpusSummary corpus_summary(std::span<const StructureMetrics> metrics);

std::string format_summary_table(const CorpusSummary& summary);
// Header plus one "id,name,frequency_mean,frequency_sd" row per decoder layer.
std::string format_frequency_csv(const CorpusSummary& summary);

}  // namespace structforge
