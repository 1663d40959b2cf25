#include "structforge/corpus.hpp"

#include "structforge/error.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

namespace structforge {

namespace {

constexpr double kMaxExtent = 8.4;  // keeps every structure inside 120 of the 128 cells

struct RowBlock {
    BlockType type;
    Orientation orientation;
    double width;
};

struct HeightClass {
    double height;
    std::vector<RowBlock> members;
};

const std::vector<HeightClass>& height_classes() {
    static const std::vector<HeightClass> classes = [] {
        std::map<double, std::vector<RowBlock>> by_height;
        for (const auto& spec : kBlockCatalog) {
            for (auto o : {Orientation::Horizontal, Orientation::Vertical}) {
                if (spec.square && o == Orientation::Vertical) continue;
                Block b{spec.type, Material::Wood, o, 0, 0};
                by_height[b.effective_height()].push_back({spec.type, o, b.effective_width()});
            }
        }
        std::vector<HeightClass> out;
        for (auto& [h, members] : by_height) out.push_back({h, std::move(members)});
        return out;
    }();
    return classes;
}

class Builder {
public:
    Builder(const GeneratorParams& params, std::uint64_t seed) : params_(params), rng_(seed) {}

    Structure build() {
        const int rows = uniform_int(params_.min_rows, params_.max_rows);
        double support = std::min(uniform(params_.min_row_width, params_.max_row_width), kMaxExtent);
        double y = 0.0;
        bool first = true;
        for (int row = 0; row < rows; ++row) {
            const bool pillars = rows - row >= 2 && chance(0.35);
            const double added = pillars ? pillar_pair(y, support) : solid_row(y, support, first);
            if (added <= 0.0) break;
            y += added;
            first = false;
            if (pillars) ++row;
        }
        if (structure_.blocks.empty()) {
            support = std::max(support, 0.43);
            solid_row(0.0, support, true);
        }
        top_pig();
        return std::move(structure_);
    }

private:
    double uniform(double lo, double hi) { return lo >= hi ? lo : std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool chance(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }

    Material material() {
        const auto& w = params_.material_weights;
        std::discrete_distribution<int> d({w[0], w[1], w[2]});
        return kMaterials[static_cast<std::size_t>(d(rng_))];
    }

    template <typename T>
    const T& pick(const std::vector<T>& items) {
        return items[static_cast<std::size_t>(uniform_int(0, static_cast<int>(items.size()) - 1))];
    }

    void add(const RowBlock& rb, Material m, double cx, double bottom) {
        Block b{rb.type, m, rb.orientation, cx, 0.0};
        b.cy = bottom + b.effective_height() / 2;
        structure_.blocks.push_back(b);
        top_y_ = std::max(top_y_, b.top());
    }

    // Symmetric row of same-height blocks centered on x = 0; returns the row
    // height or 0 when nothing fits.
    double solid_row(double y, double& support, bool first) {
        const double target = first ? support : support * uniform(0.55, 1.0);
        std::vector<HeightClass> fitting;
        for (const auto& hc : height_classes()) {
            // Thin vertical planks only appear as pillars, never packed into walls.
            HeightClass row{hc.height, {}};
            for (const auto& rb : hc.members)
                if (rb.width <= target && (rb.width >= 0.4 || spec_of(rb.type).square)) row.members.push_back(rb);
            if (!row.members.empty() && y + hc.height <= kMaxExtent - 0.5) fitting.push_back(std::move(row));
        }
        if (fitting.empty()) return 0.0;
        const HeightClass hc = pick(fitting);

        std::vector<RowBlock> half;
        std::optional<RowBlock> center;
        double width = 0.0;
        if (chance(0.5)) {
            std::vector<RowBlock> c;
            for (const auto& rb : hc.members)
                if (rb.width <= target) c.push_back(rb);
            center = pick(c);
            width = center->width;
        }
        const int max_pairs = uniform_int(1, 6);
        for (int i = 0; i < max_pairs; ++i) {
            std::vector<RowBlock> c;
            for (const auto& rb : hc.members)
                if (width + 2 * rb.width <= target) c.push_back(rb);
            if (c.empty()) break;
            half.push_back(pick(c));
            width += 2 * half.back().width;
        }
        if (!center && half.empty()) {
            std::vector<RowBlock> c;
            for (const auto& rb : hc.members)
                if (rb.width <= target) c.push_back(rb);
            center = pick(c);
            width = center->width;
        }

        const bool uniform_material = chance(0.6);
        const Material row_material = material();
        std::vector<std::pair<RowBlock, Material>> row;
        for (auto it = half.rbegin(); it != half.rend(); ++it)
            row.emplace_back(*it, uniform_material ? row_material : material());
        std::vector<std::pair<RowBlock, Material>> right(row.rbegin(), row.rend());
        if (center) row.emplace_back(*center, uniform_material ? row_material : material());
        row.insert(row.end(), right.begin(), right.end());

        double x = -width / 2;
        for (const auto& [rb, m] : row) {
            add(rb, m, x + rb.width / 2, y);
            x += rb.width;
        }
        support = width;
        return hc.height;
    }

    // Two (or three) equal pillars capped by a horizontal plank.
    double pillar_pair(double y, double& support) {
        std::vector<RowBlock> planks;
        for (const auto& hc : height_classes())
            for (const auto& rb : hc.members)
                if (rb.orientation == Orientation::Horizontal && rb.width >= 0.85 && rb.width <= support &&
                    !spec_of(rb.type).square)
                    planks.push_back(rb);
        std::vector<RowBlock> posts;
        for (const auto& hc : height_classes())
            for (const auto& rb : hc.members)
                if (hc.height >= 0.4 && rb.width <= 0.45) posts.push_back(rb);
        if (planks.empty() || posts.empty()) return 0.0;

        const RowBlock plank = pick(planks);
        const RowBlock post = pick(posts);
        Block probe{post.type, Material::Wood, post.orientation, 0, 0};
        const double post_h = probe.effective_height();
        Block plank_probe{plank.type, Material::Wood, plank.orientation, 0, 0};
        if (plank.width < 2 * post.width + 0.1) return 0.0;
        if (y + post_h + plank_probe.effective_height() > kMaxExtent - 0.5) return 0.0;

        const Material post_material = material();
        const double offset = plank.width / 2 - post.width / 2;
        add(post, post_material, -offset, y);
        add(post, post_material, offset, y);
        const double gap = plank.width - 2 * post.width;
        const bool middle = gap > 1.2 && chance(0.5);
        if (middle) add(post, post_material, 0.0, y);
        add(plank, material(), 0.0, y + post_h);

        const double pig_gap = middle ? (gap - post.width) / 2 : gap;
        if (!middle && pig_gap >= kDefaultPigDiameter + 0.04 && post_h >= kDefaultPigDiameter + 0.02 &&
            chance(params_.pig_probability)) {
            structure_.pigs.push_back({0.0, y + kDefaultPigDiameter / 2, kDefaultPigDiameter});
        }
        support = plank.width;
        return post_h + plank_probe.effective_height();
    }

    void top_pig() {
        if (!chance(params_.pig_probability) || top_y_ + kDefaultPigDiameter > kMaxExtent) return;
        // Rest the pig on the highest block whose span can carry it.
        const Block* top = nullptr;
        for (const auto& b : structure_.blocks) {
            if (std::abs(b.top() - top_y_) < 1e-9 && (!top || b.effective_width() > top->effective_width())) top = &b;
        }
        if (!top) return;
        structure_.pigs.push_back({top->cx, top->top() + kDefaultPigDiameter / 2, kDefaultPigDiameter});
    }

    const GeneratorParams& params_;
    std::mt19937_64 rng_;
    Structure structure_;
    double top_y_ = 0.0;
};

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0xF]);
    }
    return out;
}

}  // namespace

void GeneratorParams::validate() const {
    if (min_rows < 1 || max_rows < min_rows) throw ValidationError("generator: row range is empty");
    if (!(min_row_width > 0.0) || max_row_width < min_row_width) {
        throw ValidationError("generator: row width range is empty");
    }
    if (pig_probability < 0.0 || pig_probability > 1.0) {
        throw ValidationError("generator: pig probability must lie in [0, 1]");
    }
    double total = 0.0;
    for (double w : material_weights) {
        if (w < 0.0 || !std::isfinite(w)) throw ValidationError("generator: material weights must be >= 0");
        total += w;
    }
    if (total <= 0.0) throw ValidationError("generator: material weights sum to zero");
    raster.validate();
    const double capacity = raster.width * raster.raster_size;
    if (min_row_width > capacity) {
        const int need = cell_index(min_row_width, raster.raster_size);
        throw CapacityError("generator: minimum row width " + format_number(min_row_width) + " exceeds grid capacity " +
                                format_number(capacity),
                            need, 0);
    }
}

Structure generate_structure(const GeneratorParams& params, std::uint64_t seed) {
    params.validate();
    GeneratorParams clamped = params;
    const double capacity = std::min(kMaxExtent, params.raster.width * params.raster.raster_size * 0.94);
    clamped.max_row_width = std::min(clamped.max_row_width, capacity);
    clamped.min_row_width = std::min(clamped.min_row_width, clamped.max_row_width);
    return Builder(clamped, seed).build();
}

std::uint64_t corpus_seed(std::uint64_t base, std::size_t index) {
    // splitmix64 finalizer
    std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::vector<Structure> generate_corpus(const GeneratorParams& params, std::size_t count) {
    params.validate();
    std::vector<Structure> out(count);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < count; ++i) out[i] = generate_structure(params, corpus_seed(params.seed, i));
    return out;
}

MetadataKey metadata_key(const Structure& structure) {
    MetadataKey key;
    for (const auto& b : structure.blocks) {
        switch (b.material) {
            case Material::Wood: ++key.wood; break;
            case Material::Ice: ++key.ice; break;
            case Material::Stone: ++key.stone; break;
        }
    }
    if (auto box = bounding_box(structure)) {
        // The small offset keeps exact multiples (4.3 / 0.1 = 42.999...) in their own bucket.
        key.width_bucket = static_cast<long>(std::floor(box->width() / 0.1 + 1e-9));
        key.height_bucket = static_cast<long>(std::floor(box->height() / 0.1 + 1e-9));
    }
    return key;
}

std::string shape_key(const Structure& structure, const RasterConfig& config) {
    const auto grid = rasterize(structure, config);
    int r0 = grid.height(), r1 = -1, c0 = grid.width(), c1 = -1;
    for (int r = 0; r < grid.height(); ++r) {
        for (int c = 0; c < grid.width(); ++c) {
            if (grid.at(r, c) == Label::Air) continue;
            r0 = std::min(r0, r);
            r1 = std::max(r1, r);
            c0 = std::min(c0, c);
            c1 = std::max(c1, c);
        }
    }
    std::string canonical;
    if (r1 >= 0) {
        canonical = std::to_string(c1 - c0 + 1) + "x" + std::to_string(r1 - r0 + 1) + ":";
        for (int r = r0; r <= r1; ++r)
            for (int c = c0; c <= c1; ++c) canonical.push_back(grid.at(r, c) == Label::Air ? '0' : '1');
    }
    return sha256_hex(canonical);
}

FilterResult filter_corpus(const std::vector<Structure>& structures, const RasterConfig& config) {
    std::vector<MetadataKey> meta(structures.size());
    std::vector<std::string> shapes(structures.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < structures.size(); ++i) {
        meta[i] = metadata_key(structures[i]);
        shapes[i] = shape_key(structures[i], config);
    }

    FilterResult result;
    std::map<MetadataKey, std::size_t> seen_meta;
    std::vector<std::size_t> survivors;
    for (std::size_t i = 0; i < structures.size(); ++i) {
        auto [it, inserted] = seen_meta.emplace(meta[i], i);
        if (inserted) {
            survivors.push_back(i);
        } else {
            result.drops.push_back({i, FilterDrop::Reason::Metadata, it->second});
        }
    }
    std::map<std::string, std::size_t> seen_shape;
    for (std::size_t i : survivors) {
        auto [it, inserted] = seen_shape.emplace(shapes[i], i);
        if (inserted) {
            result.kept.push_back(i);
        } else {
            result.drops.push_back({i, FilterDrop::Reason::Shape, it->second});
        }
    }
    return result;
}

std::string manifest_line(const std::string& path, const MetadataKey& key, const std::string& shape) {
    std::ostringstream line;
    line << path << '\t' << key.wood << '\t' << key.ice << '\t' << key.stone << '\t' << key.width_bucket << '\t'
         << key.height_bucket << '\t' << shape;
    return line.str();
}

}  // namespace structforge
