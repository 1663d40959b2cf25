#include "support.hpp"

#include <algorithm>
#include <cmath>

namespace structforge::testing {

namespace {

BlockType random_type(Rng& rng) {
    return kBlockCatalog[std::uniform_int_distribution<std::size_t>(0, kBlockTypeCount - 1)(rng)].type;
}

Material random_material(Rng& rng) { return kMaterials[std::uniform_int_distribution<std::size_t>(0, 2)(rng)]; }

Orientation random_orientation(Rng& rng, BlockType type) {
    if (spec_of(type).square) return Orientation::Horizontal;
    return std::bernoulli_distribution(0.5)(rng) ? Orientation::Horizontal : Orientation::Vertical;
}

}  // namespace

Structure random_structure(Rng& rng, int blocks, int pigs) {
    // One object per 2.2 x 2.2 slot, jittered inside the slot.
    constexpr double kSlot = 2.2;
    Structure s;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int slot = 0;
    auto next_slot = [&](double w, double h) {
        const int col = slot % 4;
        const int row = slot / 4;
        ++slot;
        const double x = col * kSlot + w / 2 + unit(rng) * (kSlot - w - 0.01);
        const double y = row * kSlot + h / 2 + unit(rng) * (kSlot - h - 0.01);
        return std::pair{x - 3.0, y};
    };
    for (int i = 0; i < blocks; ++i) {
        Block b;
        b.type = random_type(rng);
        b.orientation = random_orientation(rng, b.type);
        b.material = random_material(rng);
        std::tie(b.cx, b.cy) = next_slot(b.effective_width(), b.effective_height());
        s.blocks.push_back(b);
    }
    for (int i = 0; i < pigs; ++i) {
        Pig p;
        std::tie(p.cx, p.cy) = next_slot(p.diameter, p.diameter);
        s.pigs.push_back(p);
    }
    return s;
}

Structure grid_aligned_structure(Rng& rng, int max_blocks, int max_pigs, double rs, int gap) {
    constexpr int kRegion = 110;
    std::vector<std::uint8_t> used(kRegion * kRegion, 0);
    auto free = [&](int r, int c, int w, int h) {
        for (int i = std::max(0, r - gap); i < std::min(kRegion, r + h + gap); ++i)
            for (int j = std::max(0, c - gap); j < std::min(kRegion, c + w + gap); ++j)
                if (used[i * kRegion + j]) return false;
        return true;
    };
    auto mark = [&](int r, int c, int w, int h) {
        for (int i = r; i < r + h; ++i)
            for (int j = c; j < c + w; ++j) used[i * kRegion + j] = 1;
    };

    Structure s;
    const int n_blocks = std::uniform_int_distribution<int>(1, max_blocks)(rng);
    const int n_pigs = max_pigs > 0 ? std::uniform_int_distribution<int>(0, max_pigs)(rng) : 0;
    for (int attempt = 0; attempt < n_blocks * 30 && int(s.blocks.size()) < n_blocks; ++attempt) {
        Block b;
        b.type = random_type(rng);
        b.orientation = random_orientation(rng, b.type);
        b.material = random_material(rng);
        const auto fp = canonical_footprint(b.type, b.orientation, rs);
        // The true extent can exceed the footprint by under half a cell; keep it in the region.
        const int r = std::uniform_int_distribution<int>(0, kRegion - fp.cells_high - 1)(rng);
        const int c = std::uniform_int_distribution<int>(0, kRegion - fp.cells_wide - 1)(rng);
        if (!free(r, c, fp.cells_wide, fp.cells_high)) continue;
        mark(r, c, fp.cells_wide, fp.cells_high);
        b.cx = c * rs + b.effective_width() / 2;
        b.cy = r * rs + b.effective_height() / 2;
        s.blocks.push_back(b);
    }
    const int n = pig_cells(kDefaultPigDiameter, rs);
    for (int attempt = 0; attempt < n_pigs * 30 && int(s.pigs.size()) < n_pigs; ++attempt) {
        const int r = std::uniform_int_distribution<int>(0, kRegion - n - 1)(rng);
        const int c = std::uniform_int_distribution<int>(0, kRegion - n - 1)(rng);
        if (!free(r, c, n, n)) continue;
        mark(r, c, n, n);
        s.pigs.push_back({c * rs + kDefaultPigDiameter / 2, r * rs + kDefaultPigDiameter / 2, kDefaultPigDiameter});
    }
    return s;
}

LayerTensor random_confidence_tensor(Rng& rng, int size) {
    LayerTensor t(kLabelCount, size, size);
    std::uniform_real_distribution<float> low(-1.0f, -0.4f);
    for (auto& v : t.values()) v = low(rng);
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) t.at(0, r, c) = 0.0f;

    std::uniform_int_distribution<int> label(1, kLabelCount - 1);
    std::uniform_int_distribution<int> extent(2, 40);
    std::uniform_int_distribution<int> pos(0, size - 1);
    std::uniform_real_distribution<float> high(0.3f, 1.0f);
    const int blobs = std::uniform_int_distribution<int>(0, 25)(rng);
    for (int i = 0; i < blobs; ++i) {
        const int l = label(rng);
        const int r0 = pos(rng), c0 = pos(rng);
        const int h = extent(rng), w = extent(rng);
        for (int r = r0; r < std::min(size, r0 + h); ++r)
            for (int c = c0; c < std::min(size, c0 + w); ++c) t.at(l, r, c) = std::max(t.at(l, r, c), high(rng));
    }
    std::uniform_real_distribution<float> any(-1.0f, 1.0f);
    std::bernoulli_distribution salt(0.02);
    for (auto& v : t.values())
        if (salt(rng)) v = any(rng);
    return t;
}

LayerTensor noisy_encoding(const Structure& s, Rng& rng, double noise) {
    auto t = to_multilayer(rasterize(s));
    std::normal_distribution<float> n(0.0f, static_cast<float>(noise));
    for (auto& v : t.values()) v = std::clamp(v * 2.0f - 1.0f + n(rng), -1.0f, 1.0f);
    return t;
}

std::map<BlockKind, int> block_multiset(const Structure& s) {
    std::map<BlockKind, int> out;
    for (const auto& b : s.blocks) {
        const auto o = spec_of(b.type).square ? Orientation::Horizontal : b.orientation;
        ++out[{b.type, o, b.material}];
    }
    return out;
}

int brute_window_count(const BinaryMask& mask, int row, int col, int w, int h) {
    int n = 0;
    for (int r = row; r < row + h; ++r)
        for (int c = col; c < col + w; ++c)
            if (r >= 0 && c >= 0 && r < mask.height && c < mask.width && mask.cells[r * mask.width + c]) ++n;
    return n;
}

int brute_cells(double start, double end, double rs) {
    int n = 0;
    for (int k = -1000; k < 1000; ++k) {
        const double center = (k + 0.5) * rs;
        if (center >= start && center < end) ++n;
    }
    return n;
}

std::string data_path(const std::string& name) { return std::string(STRUCTFORGE_TEST_DATA) + "/" + name; }

}  // namespace structforge::testing
