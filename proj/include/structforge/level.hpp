#pragma once

// Domain model for Science Birds structures and the XML level dialect.
//
// Coordinates: x grows rightward, y grows upward, the ground plane is y = 0.
// All lengths are in-game units.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace structforge {

enum class BlockType : unsigned char {
    SquareHole,
    RectBig,
    RectMedium,
    RectSmall,
    RectFat,
    RectTiny,
    SquareTiny,
    SquareSmall,
};

inline constexpr std::size_t kBlockTypeCount = 8;

struct BlockSpec {
    BlockType type;
    int id;  // catalog id, 1-based
    std::string_view name;
    double width;
    double height;
    bool square;
};

// Catalog of the rectangular block shapes the engine offers, in catalog id order.
inline constexpr std::array<BlockSpec, kBlockTypeCount> kBlockCatalog{{
    {BlockType::SquareHole, 1, "SquareHole", 0.85, 0.85, true},
    {BlockType::RectBig, 2, "RectBig", 2.06, 0.22, false},
    {BlockType::RectMedium, 3, "RectMedium", 1.68, 0.22, false},
    {BlockType::RectSmall, 4, "RectSmall", 0.85, 0.2, false},
    {BlockType::RectFat, 5, "RectFat", 0.85, 0.43, false},
    {BlockType::RectTiny, 6, "RectTiny", 0.42, 0.22, false},
    {BlockType::SquareTiny, 7, "SquareTiny", 0.22, 0.22, true},
    {BlockType::SquareSmall, 8, "SquareSmall", 0.43, 0.43, true},
}};

constexpr const BlockSpec& spec_of(BlockType type) {
    return kBlockCatalog[static_cast<std::size_t>(type)];
}

std::optional<BlockType> block_type_from_name(std::string_view name);

enum class Material : unsigned char { Wood, Ice, Stone };

inline constexpr std::array<Material, 3> kMaterials{Material::Wood, Material::Ice, Material::Stone};

std::string_view material_name(Material material);
std::optional<Material> material_from_name(std::string_view name);

enum class Orientation : unsigned char { Horizontal, Vertical };

constexpr int rotation_degrees(Orientation o) { return o == Orientation::Horizontal ? 0 : 90; }

struct Block {
    BlockType type = BlockType::SquareSmall;
    Material material = Material::Wood;
    Orientation orientation = Orientation::Horizontal;
    double cx = 0.0;
    double cy = 0.0;

    double effective_width() const {
        const auto& s = spec_of(type);
        return orientation == Orientation::Horizontal ? s.width : s.height;
    }
    double effective_height() const {
        const auto& s = spec_of(type);
        return orientation == Orientation::Horizontal ? s.height : s.width;
    }
    double left() const { return cx - effective_width() / 2; }
    double right() const { return cx + effective_width() / 2; }
    double bottom() const { return cy - effective_height() / 2; }
    double top() const { return cy + effective_height() / 2; }

    friend bool operator==(const Block&, const Block&) = default;
};

inline constexpr double kDefaultPigDiameter = 0.5;

struct Pig {
    double cx = 0.0;
    double cy = 0.0;
    double diameter = kDefaultPigDiameter;

    friend bool operator==(const Pig&, const Pig&) = default;
};

struct Structure {
    std::vector<Block> blocks;
    std::vector<Pig> pigs;

    bool empty() const { return blocks.empty() && pigs.empty(); }
    friend bool operator==(const Structure&, const Structure&) = default;
};

struct BoundingBox {
    double min_x;
    double min_y;
    double max_x;
    double max_y;

    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }
};

// Tight box over all block rectangles and pig circles; nullopt for an empty structure.
std::optional<BoundingBox> bounding_box(const Structure& structure);

inline constexpr double kOverlapEpsilon = 1e-6;

// Interpenetration depth of two blocks along each axis (<= 0 means separated).
struct Penetration {
    double x;
    double y;
};
Penetration penetration(const Block& a, const Block& b);
bool interpenetrate(const Block& a, const Block& b, double epsilon = kOverlapEpsilon);

// Index pairs (i < j) of blocks that overlap by more than epsilon on both axes.
std::vector<std::pair<std::size_t, std::size_t>> overlapping_pairs(const Structure& structure,
                                                                    double epsilon = kOverlapEpsilon);

Structure translated(const Structure& structure, double dx, double dy);

// ---------------------------------------------------------------------------
// XML dialect

struct LevelMeta {
    double camera_x = 0.0;
    double camera_y = 2.0;
    double camera_min_width = 20.0;
    double camera_max_width = 30.0;
    double slingshot_x = -8.0;
    double slingshot_y = -2.5;
    std::vector<std::string> birds{"BirdRed"};
};

struct ParsedLevel {
    Structure structure;
    std::vector<std::string> warnings;
};

// Throws ParseError for malformed XML and ValidationError for bad Block attributes.
ParsedLevel parse_level(std::string_view xml_text);

std::string serialize_level(const Structure& structure, const LevelMeta& meta = {});

// Shortest round-trip decimal with at least four fractional digits.
std::string format_number(double value);

}  // namespace structforge
