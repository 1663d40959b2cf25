#include "structforge/error.hpp"
#include "structforge/level.hpp"
#include "support.hpp"

#include <doctest.h>

#include <regex>

using namespace structforge;

namespace {

std::string level_with(const std::string& objects) {
    return "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<Level width=\"2\">\n  <GameObjects>\n" + objects +
           "  </GameObjects>\n</Level>\n";
}

}  // namespace

TEST_CASE("block catalog matches the published dimensions") {
    CHECK(kBlockCatalog.size() == 8);
    struct Expected {
        const char* name;
        double w, h;
    };
    const Expected expected[] = {{"SquareHole", 0.85, 0.85}, {"RectBig", 2.06, 0.22},   {"RectMedium", 1.68, 0.22},
                                 {"RectSmall", 0.85, 0.2},   {"RectFat", 0.85, 0.43},   {"RectTiny", 0.42, 0.22},
                                 {"SquareTiny", 0.22, 0.22}, {"SquareSmall", 0.43, 0.43}};
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(kBlockCatalog[i].name == expected[i].name);
        CHECK(kBlockCatalog[i].width == expected[i].w);
        CHECK(kBlockCatalog[i].height == expected[i].h);
        CHECK(kBlockCatalog[i].id == int(i) + 1);
    }
}

TEST_CASE("effective extents swap for vertical blocks") {
    Block b{BlockType::RectBig, Material::Stone, Orientation::Vertical, 1.0, 2.0};
    CHECK(b.effective_width() == 0.22);
    CHECK(b.effective_height() == 2.06);
    b.orientation = Orientation::Horizontal;
    CHECK(b.effective_width() == 2.06);
}

TEST_CASE("parse_level reads a single block") {
    const auto parsed =
        parse_level(level_with("<Block type=\"RectFat\" material=\"wood\" x=\"0\" y=\"0.215\" rotation=\"0\" />\n"));
    REQUIRE(parsed.structure.blocks.size() == 1);
    const auto& b = parsed.structure.blocks[0];
    CHECK(b.type == BlockType::RectFat);
    CHECK(b.material == Material::Wood);
    CHECK(b.orientation == Orientation::Horizontal);
    CHECK(b.cx == 0.0);
    CHECK(b.cy == 0.215);
    CHECK(parsed.warnings.empty());
}

TEST_CASE("rotation normalizes modulo 180") {
    auto orient = [](const char* rot) {
        return parse_level(level_with(std::string("<Block type=\"RectBig\" material=\"ice\" x=\"0\" y=\"1\" rotation=\"") +
                                      rot + "\" />\n"))
            .structure.blocks.at(0)
            .orientation;
    };
    CHECK(orient("270") == Orientation::Vertical);
    CHECK(orient("90") == Orientation::Vertical);
    CHECK(orient("-90") == Orientation::Vertical);
    CHECK(orient("180") == Orientation::Horizontal);
    CHECK(orient("359.9995") == Orientation::Horizontal);
    CHECK(orient("90.0004") == Orientation::Vertical);
    CHECK_THROWS_AS(orient("45"), ValidationError);
    CHECK_THROWS_AS(orient("90.01"), ValidationError);
}

TEST_CASE("parse_level error paths") {
    SUBCASE("misspelled type names the attribute") {
        try {
            parse_level(level_with("<Block type=\"RectBg\" material=\"wood\" x=\"0\" y=\"0\" rotation=\"0\" />\n"));
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("'type'") != std::string::npos);
        }
    }
    SUBCASE("bad material") {
        CHECK_THROWS_AS(
            parse_level(level_with("<Block type=\"RectBig\" material=\"gold\" x=\"0\" y=\"0\" rotation=\"0\" />\n")),
            ValidationError);
    }
    SUBCASE("non-numeric coordinate") {
        CHECK_THROWS_AS(
            parse_level(level_with("<Block type=\"RectBig\" material=\"wood\" x=\"abc\" y=\"0\" rotation=\"0\" />\n")),
            ValidationError);
    }
    SUBCASE("malformed XML reports a line") {
        try {
            parse_level("<Level>\n<GameObjects>\n<Block type=\"RectBig\"\n</Level>");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() > 0);
            CHECK(std::string(e.what()).rfind("line ", 0) == 0);
        }
    }
    SUBCASE("missing GameObjects") { CHECK_THROWS_AS(parse_level("<Level></Level>"), ValidationError); }
}

TEST_CASE("unsupported elements are skipped with warnings") {
    const auto parsed = parse_level(
        "\xEF\xBB\xBF<?xml version=\"1.0\" encoding=\"utf-16\"?>\n"
        "<Level width=\"2\">\n"
        "  <Camera x=\"0\" y=\"2\" minWidth=\"20\" maxWidth=\"30\" />\n"
        "  <Birds><Bird type=\"BirdRed\" /></Birds>\n"
        "  <Slingshot x=\"-8\" y=\"-2.5\" />\n"
        "  <GameObjects>\n"
        "    <Block type=\"SquareSmall\" material=\"stone\" x=\"1\" y=\"0.215\" rotation=\"0\" />\n"
        "    <Block type=\"Circle\" material=\"wood\" x=\"2\" y=\"0.5\" rotation=\"0\" />\n"
        "    <TNT type=\"\" x=\"3\" y=\"0.5\" rotation=\"0\" />\n"
        "    <Platform type=\"Platform\" x=\"0\" y=\"3\" />\n"
        "    <Pig type=\"BasicSmall\" material=\"\" x=\"1\" y=\"0.68\" rotation=\"0\" />\n"
        "  </GameObjects>\n"
        "</Level>\n");
    CHECK(parsed.structure.blocks.size() == 1);
    CHECK(parsed.structure.pigs.size() == 1);
    CHECK(parsed.warnings.size() == 3);
    CHECK(parsed.structure.pigs[0].diameter == kDefaultPigDiameter);
}

TEST_CASE("serialize_level emits the dialect") {
    SUBCASE("empty structure") {
        const auto xml = serialize_level(Structure{});
        CHECK(xml.find("<GameObjects>\n  </GameObjects>") != std::string::npos);
        CHECK(xml.find("<Block") == std::string::npos);
        CHECK(xml.find("<Camera") != std::string::npos);
        CHECK(xml.find("<Bird type=\"BirdRed\"") != std::string::npos);
        CHECK(xml.find("<Slingshot x=\"-8.0000\" y=\"-2.5000\"") != std::string::npos);
        CHECK(parse_level(xml).structure.empty());
    }
    SUBCASE("one block") {
        Structure s;
        s.blocks.push_back({BlockType::RectMedium, Material::Ice, Orientation::Vertical, 0.5, 0.84});
        const auto xml = serialize_level(s);
        std::size_t count = 0;
        for (auto pos = xml.find("<Block"); pos != std::string::npos; pos = xml.find("<Block", pos + 1)) ++count;
        CHECK(count == 1);
        CHECK(xml.find("rotation=\"90\"") != std::string::npos);
    }
}

TEST_CASE("format_number keeps at least four decimals and round-trips") {
    CHECK(format_number(0.0) == "0.0000");
    CHECK(format_number(-0.0) == "0.0000");
    CHECK(format_number(1.5) == "1.5000");
    CHECK(format_number(-8) == "-8.0000");
    CHECK(format_number(0.123456789) == "0.123456789");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("parse(serialize(s)) == s on random structures") {
    testing::Rng rng(2024);
    const std::regex number_attr(R"re((x|y)="(-?\d+)\.(\d+)")re");
    const std::regex type_attr(R"re(<Block type="(\w+)")re");
    const std::regex rotation_attr(R"re(<Block [^>]*rotation="(\d+)")re");
    for (int i = 0; i < 100; ++i) {
        const auto s = testing::random_structure(rng, 1 + i % 12, i % 4);
        const auto xml = serialize_level(s);
        const auto back = parse_level(xml);
        CHECK(back.warnings.empty());
        REQUIRE(back.structure.blocks.size() == s.blocks.size());
        REQUIRE(back.structure.pigs.size() == s.pigs.size());
        for (std::size_t k = 0; k < s.blocks.size(); ++k) {
            const auto& a = s.blocks[k];
            const auto& b = back.structure.blocks[k];
            CHECK(a.type == b.type);
            CHECK(a.material == b.material);
            CHECK(a.orientation == b.orientation);
            CHECK(std::abs(a.cx - b.cx) <= 1e-9);
            CHECK(std::abs(a.cy - b.cy) <= 1e-9);
        }
        CHECK(back.structure == s);
        for (auto it = std::sregex_iterator(xml.begin(), xml.end(), number_attr); it != std::sregex_iterator(); ++it) {
            CHECK((*it)[3].length() >= 4);
        }
        for (auto it = std::sregex_iterator(xml.begin(), xml.end(), type_attr); it != std::sregex_iterator(); ++it) {
            CHECK(block_type_from_name((*it)[1].str()).has_value());
        }
        for (auto it = std::sregex_iterator(xml.begin(), xml.end(), rotation_attr); it != std::sregex_iterator();
             ++it) {
            const auto r = (*it)[1].str();
            CHECK((r == "0" || r == "90"));
        }
    }
}

TEST_CASE("bounding_box") {
    SUBCASE("empty is an error value") { CHECK_FALSE(bounding_box(Structure{}).has_value()); }
    SUBCASE("SquareTiny at origin") {
        Structure s;
        s.blocks.push_back({BlockType::SquareTiny, Material::Wood, Orientation::Horizontal, 0, 0});
        const auto box = *bounding_box(s);
        CHECK(box.min_x == doctest::Approx(-0.11));
        CHECK(box.min_y == doctest::Approx(-0.11));
        CHECK(box.max_x == doctest::Approx(0.11));
        CHECK(box.max_y == doctest::Approx(0.11));
    }
    SUBCASE("RectBig horizontal at origin") {
        Structure s;
        s.blocks.push_back({BlockType::RectBig, Material::Wood, Orientation::Horizontal, 0, 0});
        const auto box = *bounding_box(s);
        CHECK(box.min_x == doctest::Approx(-1.03));
        CHECK(box.min_y == doctest::Approx(-0.11));
        CHECK(box.max_x == doctest::Approx(1.03));
        CHECK(box.max_y == doctest::Approx(0.11));
    }
    SUBCASE("two stacked SquareSmall") {
        Structure s;
        s.blocks.push_back({BlockType::SquareSmall, Material::Wood, Orientation::Horizontal, 0, 0.215});
        s.blocks.push_back({BlockType::SquareSmall, Material::Wood, Orientation::Horizontal, 0, 0.645});
        // sum of the two extents
        CHECK(bounding_box(s)->height() == doctest::Approx(0.43 + 0.43));
    }
    SUBCASE("pigs contribute their circle") {
        Structure s;
        s.pigs.push_back({1.0, 1.0, 0.5});
        const auto box = *bounding_box(s);
        CHECK(box.min_x == doctest::Approx(0.75));
        CHECK(box.max_y == doctest::Approx(1.25));
    }
    SUBCASE("adding a block never shrinks the box") {
        testing::Rng rng(7);
        for (int i = 0; i < 50; ++i) {
            auto s = testing::random_structure(rng, 1 + i % 10, i % 3);
            const auto before = *bounding_box(s);
            auto extra = testing::random_structure(rng, 1, 0).blocks[0];
            extra.cx += (i - 25) * 0.3;
            s.blocks.push_back(extra);
            const auto after = *bounding_box(s);
            CHECK(after.min_x <= before.min_x);
            CHECK(after.min_y <= before.min_y);
            CHECK(after.max_x >= before.max_x);
            CHECK(after.max_y >= before.max_y);
        }
    }
}

TEST_CASE("overlap detection uses the 1e-6 tolerance") {
    Structure s;
    s.blocks.push_back({BlockType::SquareSmall, Material::Wood, Orientation::Horizontal, 0, 0.215});
    s.blocks.push_back({BlockType::SquareSmall, Material::Wood, Orientation::Horizontal, 0.43, 0.215});
    CHECK(overlapping_pairs(s).empty());
    s.blocks[1].cx = 0.42;
    CHECK(overlapping_pairs(s).size() == 1);
}
