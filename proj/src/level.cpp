#include "structforge/level.hpp"

#include "structforge/error.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace structforge {

namespace {

namespace pt = boost::property_tree;

// Shapes the engine knows but the toolchain does not model.
constexpr std::array<std::string_view, 4> kIrregularBlocks{"Circle", "CircleSmall", "Triangle", "TriangleHole"};

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string trim(std::string_view s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return {};
    auto end = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(begin, end - begin + 1));
}

double parse_real(const std::string& text, const std::string& element, const std::string& attribute) {
    std::string t = trim(text);
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (first != last && *first == '+') ++first;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        throw ValidationError(element + ": attribute '" + attribute + "' is not a number: \"" + text + "\"");
    }
    return value;
}

const pt::ptree* find_child(const pt::ptree& node, const std::string& name) {
    for (const auto& [key, child] : node) {
        if (key == name) return &child;
    }
    return nullptr;
}

const pt::ptree* find_game_objects(const pt::ptree& node) {
    if (const auto* found = find_child(node, "GameObjects")) return found;
    for (const auto& [key, child] : node) {
        if (key == "<xmlattr>" || key == "<xmlcomment>") continue;
        if (const auto* found = find_game_objects(child)) return found;
    }
    return nullptr;
}

std::optional<std::string> attribute(const pt::ptree& element, const std::string& name) {
    if (const auto* attrs = find_child(element, "<xmlattr>")) {
        if (const auto* value = find_child(*attrs, name)) return value->data();
    }
    return std::nullopt;
}

std::string require(const pt::ptree& element, const std::string& element_name, const std::string& name) {
    auto value = attribute(element, name);
    if (!value) throw ValidationError(element_name + ": missing attribute '" + name + "'");
    return *value;
}

Orientation normalize_rotation(double degrees, const std::string& element) {
    constexpr double kTolerance = 1e-3;
    double r = std::fmod(degrees, 180.0);
    if (r < 0) r += 180.0;
    if (r < kTolerance || 180.0 - r < kTolerance) return Orientation::Horizontal;
    if (std::abs(r - 90.0) < kTolerance) return Orientation::Vertical;
    throw ValidationError(element + ": attribute 'rotation' must be 0 or 90 (mod 180), got " + format_number(degrees));
}

}  // namespace

std::optional<BlockType> block_type_from_name(std::string_view name) {
    for (const auto& spec : kBlockCatalog) {
        if (spec.name == name) return spec.type;
    }
    return std::nullopt;
}

std::string_view material_name(Material material) {
    switch (material) {
        case Material::Wood: return "wood";
        case Material::Ice: return "ice";
        case Material::Stone: return "stone";
    }
    return "wood";
}

std::optional<Material> material_from_name(std::string_view name) {
    const std::string l = lower(trim(name));
    if (l == "wood") return Material::Wood;
    if (l == "ice") return Material::Ice;
    if (l == "stone") return Material::Stone;
    return std::nullopt;
}

std::optional<BoundingBox> bounding_box(const Structure& structure) {
    if (structure.empty()) return std::nullopt;
    BoundingBox box{INFINITY, INFINITY, -INFINITY, -INFINITY};
    auto include = [&box](double x0, double y0, double x1, double y1) {
        box.min_x = std::min(box.min_x, x0);
        box.min_y = std::min(box.min_y, y0);
        box.max_x = std::max(box.max_x, x1);
        box.max_y = std::max(box.max_y, y1);
    };
    for (const auto& b : structure.blocks) include(b.left(), b.bottom(), b.right(), b.top());
    for (const auto& p : structure.pigs) {
        const double r = p.diameter / 2;
        include(p.cx - r, p.cy - r, p.cx + r, p.cy + r);
    }
    return box;
}

Penetration penetration(const Block& a, const Block& b) {
    return {std::min(a.right(), b.right()) - std::max(a.left(), b.left()),
            std::min(a.top(), b.top()) - std::max(a.bottom(), b.bottom())};
}

bool interpenetrate(const Block& a, const Block& b, double epsilon) {
    const auto p = penetration(a, b);
    return p.x > epsilon && p.y > epsilon;
}

std::vector<std::pair<std::size_t, std::size_t>> overlapping_pairs(const Structure& structure, double epsilon) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const auto& blocks = structure.blocks;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        for (std::size_t j = i + 1; j < blocks.size(); ++j) {
            if (interpenetrate(blocks[i], blocks[j], epsilon)) out.emplace_back(i, j);
        }
    }
    return out;
}

Structure translated(const Structure& structure, double dx, double dy) {
    Structure out = structure;
    for (auto& b : out.blocks) {
        b.cx += dx;
        b.cy += dy;
    }
    for (auto& p : out.pigs) {
        p.cx += dx;
        p.cy += dy;
    }
    return out;
}

ParsedLevel parse_level(std::string_view xml_text) {
    // Tolerate a UTF-8 byte order mark.
    if (xml_text.size() >= 3 && static_cast<unsigned char>(xml_text[0]) == 0xEF &&
        static_cast<unsigned char>(xml_text[1]) == 0xBB && static_cast<unsigned char>(xml_text[2]) == 0xBF) {
        xml_text.remove_prefix(3);
    }

    pt::ptree tree;
    try {
        std::istringstream in{std::string(xml_text)};
        pt::read_xml(in, tree, pt::xml_parser::no_comments);
    } catch (const pt::xml_parser_error& e) {
        throw ParseError(e.message(), static_cast<long>(e.line()));
    }

    const pt::ptree* objects = find_game_objects(tree);
    if (!objects) throw ValidationError("document has no GameObjects element");

    ParsedLevel result;
    std::size_t index = 0;
    for (const auto& [name, element] : *objects) {
        if (name == "<xmlattr>" || name == "<xmlcomment>") continue;
        const std::string where = name + " #" + std::to_string(index++);
        if (name == "Block") {
            const std::string type_name = trim(require(element, where, "type"));
            auto type = block_type_from_name(type_name);
            if (!type) {
                if (std::find(kIrregularBlocks.begin(), kIrregularBlocks.end(), type_name) != kIrregularBlocks.end()) {
                    result.warnings.push_back(where + ": skipped irregular block type '" + type_name + "'");
                    continue;
                }
                throw ValidationError(where + ": attribute 'type' has unknown block type \"" + type_name + "\"");
            }
            const std::string material_text = require(element, where, "material");
            auto material = material_from_name(material_text);
            if (!material) {
                throw ValidationError(where + ": attribute 'material' has unknown material \"" + material_text + "\"");
            }
            Block block;
            block.type = *type;
            block.material = *material;
            block.cx = parse_real(require(element, where, "x"), where, "x");
            block.cy = parse_real(require(element, where, "y"), where, "y");
            const auto rotation = attribute(element, "rotation");
            block.orientation = rotation ? normalize_rotation(parse_real(*rotation, where, "rotation"), where)
                                         : Orientation::Horizontal;
            result.structure.blocks.push_back(block);
        } else if (name == "Pig") {
            Pig pig;
            pig.cx = parse_real(require(element, where, "x"), where, "x");
            pig.cy = parse_real(require(element, where, "y"), where, "y");
            result.structure.pigs.push_back(pig);
        } else {
            result.warnings.push_back(where + ": skipped unsupported element");
        }
    }
    return result;
}

std::string format_number(double value) {
    if (value == 0.0) value = 0.0;  // drop the sign of negative zero
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed);
    std::string out(buf.data(), ec == std::errc{} ? ptr : buf.data());
    auto dot = out.find('.');
    if (dot == std::string::npos) {
        out += '.';
        dot = out.size() - 1;
    }
    const auto decimals = out.size() - dot - 1;
    if (decimals < 4) out.append(4 - decimals, '0');
    return out;
}

std::string serialize_level(const Structure& structure, const LevelMeta& meta) {
    std::ostringstream xml;
    xml << "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n";
    xml << "<Level width=\"2\">\n";
    xml << "  <Camera x=\"" << format_number(meta.camera_x) << "\" y=\"" << format_number(meta.camera_y)
        << "\" minWidth=\"" << format_number(meta.camera_min_width) << "\" maxWidth=\""
        << format_number(meta.camera_max_width) << "\" />\n";
    xml << "  <Birds>\n";
    for (const auto& bird : meta.birds) xml << "    <Bird type=\"" << bird << "\" />\n";
    xml << "  </Birds>\n";
    xml << "  <Slingshot x=\"" << format_number(meta.slingshot_x) << "\" y=\"" << format_number(meta.slingshot_y)
        << "\" />\n";
    xml << "  <GameObjects>\n";
    for (const auto& b : structure.blocks) {
        xml << "    <Block type=\"" << spec_of(b.type).name << "\" material=\"" << material_name(b.material)
            << "\" x=\"" << format_number(b.cx) << "\" y=\"" << format_number(b.cy) << "\" rotation=\""
            << rotation_degrees(b.orientation) << "\" />\n";
    }
    for (const auto& p : structure.pigs) {
        xml << "    <Pig type=\"BasicSmall\" material=\"\" x=\"" << format_number(p.cx) << "\" y=\""
            << format_number(p.cy) << "\" rotation=\"0\" />\n";
    }
    xml << "  </GameObjects>\n";
    xml << "</Level>\n";
    return xml.str();
}

}  // namespace structforge
