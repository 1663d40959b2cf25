#include "structforge/metrics.hpp"

#include "structforge/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

namespace structforge {

namespace {

OccupancyGrid rasterize_fitting(const Structure& structure, RasterConfig config) {
    try {
        return rasterize(structure, config);
    } catch (const CapacityError& e) {
        config.width = std::max(config.width, e.required_width());
        config.height = std::max(config.height, e.required_height());
        return rasterize(structure, config);
    }
}

MeanSd mean_sd(std::span<const StructureMetrics> items, const std::function<double(const StructureMetrics&)>& field) {
    double sum = 0.0;
    for (const auto& m : items) sum += field(m);
    const double mean = sum / items.size();
    double sq = 0.0;
    for (const auto& m : items) {
        const double d = field(m) - mean;
        sq += d * d;
    }
    return {mean, std::sqrt(sq / items.size())};
}

std::string percent(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", v * 100.0);
    return buf;
}

std::string fixed(double v, int digits) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

StructureMetrics structure_metrics(const Structure& structure, const RasterConfig& config) {
    StructureMetrics m;
    if (structure.empty()) return m;
    m.empty = false;

    const auto box = *bounding_box(structure);
    m.width = box.width();
    m.height = box.height();
    m.block_count = static_cast<double>(structure.blocks.size());
    m.pig_count = static_cast<double>(structure.pigs.size());

    const auto grid = rasterize_fitting(structure, config);
    int r0 = grid.height(), r1 = -1, c0 = grid.width(), c1 = -1;
    std::size_t occupied = 0;
    for (int r = 0; r < grid.height(); ++r) {
        for (int c = 0; c < grid.width(); ++c) {
            if (grid.at(r, c) == Label::Air) continue;
            ++occupied;
            r0 = std::min(r0, r);
            r1 = std::max(r1, r);
            c0 = std::min(c0, c);
            c1 = std::max(c1, c);
        }
    }
    if (occupied > 0) m.density = double(occupied) / (double(r1 - r0 + 1) * double(c1 - c0 + 1));

    if (!structure.blocks.empty()) {
        for (const auto& b : structure.blocks) m.frequency[decoder_layer_of(b.type, b.orientation)] += 1.0;
        for (auto& f : m.frequency) f /= m.block_count;
    }
    return m;
}

CorpusSummary corpus_summary(std::span<const StructureMetrics> metrics) {
    if (metrics.empty()) throw EmptyInputError("corpus summary needs at least one structure");
    CorpusSummary s;
    s.count = metrics.size();
    s.width = mean_sd(metrics, [](const auto& m) { return m.width; });
    s.height = mean_sd(metrics, [](const auto& m) { return m.height; });
    s.density = mean_sd(metrics, [](const auto& m) { return m.density; });
    s.block_count = mean_sd(metrics, [](const auto& m) { return m.block_count; });
    s.pig_count = mean_sd(metrics, [](const auto& m) { return m.pig_count; });
    for (std::size_t k = 0; k < kDecoderLayerCount; ++k) {
        s.frequency[k] = mean_sd(metrics, [k](const auto& m) { return m.frequency[k]; });
    }
    const auto zero_pigs = std::count_if(metrics.begin(), metrics.end(), [](const auto& m) { return m.pig_count == 0; });
    s.zero_pig_fraction = double(zero_pigs) / metrics.size();
    return s;
}

std::string format_summary_table(const CorpusSummary& s) {
    std::ostringstream out;
    char line[160];
    out << "structures: " << s.count << "\n";
    auto row = [&](const char* name, const MeanSd& v, bool pct) {
        const std::string mean = pct ? percent(v.mean) : fixed(v.mean, 2);
        const std::string sd = pct ? percent(v.sd) : fixed(v.sd, 2);
        std::snprintf(line, sizeof line, "%-10s %10s (\xC2\xB1%s)\n", name, mean.c_str(), sd.c_str());
        out << line;
    };
    row("width", s.width, false);
    row("height", s.height, false);
    row("density", s.density, true);
    row("blocks", s.block_count, false);
    row("pigs", s.pig_count, false);
    out << "zero-pig   " << std::string(10 - std::min<std::size_t>(10, percent(s.zero_pig_fraction).size()), ' ')
        << percent(s.zero_pig_fraction) << "\n\n";

    std::snprintf(line, sizeof line, "%-4s %-18s %s\n", "Id", "Name", "Frequency");
    out << line;
    for (std::size_t k = 0; k < kDecoderLayerCount; ++k) {
        const auto& layer = kDecoderLayers[k];
        std::snprintf(line, sizeof line, "%-4s %-18s %s (\xC2\xB1%s)\n", std::string(layer.id).c_str(),
                      std::string(layer.name).c_str(), percent(s.frequency[k].mean).c_str(),
                      percent(s.frequency[k].sd).c_str());
        out << line;
    }
    return out.str();
}

std::string format_frequency_csv(const CorpusSummary& s) {
    std::ostringstream out;
    out << "id,name,frequency_mean,frequency_sd\n";
    for (std::size_t k = 0; k < kDecoderLayerCount; ++k) {
        out << kDecoderLayers[k].id << ',' << kDecoderLayers[k].name << ',' << fixed(s.frequency[k].mean, 6) << ','
            << fixed(s.frequency[k].sd, 6) << '\n';
    }
    return out.str();
}

}  // namespace structforge
