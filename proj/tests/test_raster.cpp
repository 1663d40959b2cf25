#include "structforge/error.hpp"
#include "structforge/raster.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace structforge;

TEST_CASE("canonical footprints") {
    CHECK(canonical_footprint(BlockType::SquareTiny, Orientation::Horizontal) == Footprint{3, 3});
    CHECK(canonical_footprint(BlockType::RectBig, Orientation::Horizontal) == Footprint{29, 3});
    CHECK(canonical_footprint(BlockType::RectBig, Orientation::Vertical) == Footprint{3, 29});
    CHECK(canonical_footprint(BlockType::RectMedium, Orientation::Horizontal) == Footprint{24, 3});
    CHECK(canonical_footprint(BlockType::SquareSmall, Orientation::Horizontal) == Footprint{6, 6});

    // Oracle: count cells whose center falls inside [0, extent).
    for (const auto& spec : kBlockCatalog) {
        for (auto o : {Orientation::Horizontal, Orientation::Vertical}) {
            const Block b{spec.type, Material::Wood, o, 0, 0};
            const auto fp = canonical_footprint(spec.type, o);
            CHECK(fp.cells_wide == testing::brute_cells(0.0, b.effective_width(), 0.07));
            CHECK(fp.cells_high == testing::brute_cells(0.0, b.effective_height(), 0.07));
        }
    }
}

TEST_CASE("every catalog dimension is within 0.45 cells of an integer") {
    double worst = 0.0;
    for (const auto& spec : kBlockCatalog) {
        for (double d : {spec.width, spec.height}) {
            const double q = d / 0.07;
            worst = std::max(worst, std::abs(q - std::round(q)));
        }
    }
    CHECK(worst <= 0.45);
    CHECK(worst == doctest::Approx(2.06 / 0.07 - 29));
}

TEST_CASE("rasterize a single SquareSmall anywhere gives 36 cells") {
    testing::Rng rng(3);
    std::uniform_real_distribution<double> pos(-20.0, 20.0);
    for (int i = 0; i < 200; ++i) {
        Structure s;
        s.blocks.push_back({BlockType::SquareSmall, Material::Ice, Orientation::Horizontal, pos(rng), pos(rng)});
        const auto grid = rasterize(s);
        CHECK(grid.count(Label::Ice) == 36);
        CHECK(grid.count_occupied() == 36);
    }
}

TEST_CASE("empty structure rasterizes to air") {
    const auto grid = rasterize(Structure{});
    CHECK(grid.width() == 128);
    CHECK(grid.height() == 128);
    CHECK(grid.count(Label::Air) == 128u * 128u);
}

TEST_CASE("edge-to-edge SquareSmall pair leaves no gap and no overlap") {
    Structure s;
    s.blocks.push_back({BlockType::SquareSmall, Material::Wood, Orientation::Horizontal, 0.215, 0.215});
    s.blocks.push_back({BlockType::SquareSmall, Material::Stone, Orientation::Horizontal, 0.645, 0.215});
    const auto grid = rasterize(s);
    CHECK(grid.count_occupied() == 72);
    CHECK(grid.count(Label::Wood) == 36);
    CHECK(grid.count(Label::Stone) == 36);
    // Brute force: the occupied columns of row 0 are one contiguous run.
    int first = -1, last = -1, occupied = 0;
    for (int c = 0; c < grid.width(); ++c) {
        if (grid.at(0, c) == Label::Air) continue;
        if (first < 0) first = c;
        last = c;
        ++occupied;
    }
    CHECK(last - first + 1 == occupied);
    CHECK(occupied == 12);
}

TEST_CASE("structure sits bottom-aligned and horizontally centered") {
    Structure s;
    s.blocks.push_back({BlockType::RectBig, Material::Wood, Orientation::Horizontal, 5.0, 3.0});
    const auto grid = rasterize(s);
    CHECK(grid.at(0, 49) == Label::Wood);
    CHECK(grid.at(0, 48) == Label::Air);
    CHECK(grid.at(0, 77) == Label::Wood);
    CHECK(grid.at(0, 78) == Label::Air);
    CHECK(grid.at(3, 60) == Label::Air);
}

TEST_CASE("later objects overwrite earlier ones") {
    Structure s;
    s.blocks.push_back({BlockType::SquareSmall, Material::Wood, Orientation::Horizontal, 0.215, 0.215});
    s.blocks.push_back({BlockType::SquareSmall, Material::Stone, Orientation::Horizontal, 0.3, 0.215});
    const auto grid = rasterize(s);
    CHECK(grid.count(Label::Stone) == 36);
    CHECK(grid.count(Label::Wood) == 36 - 30);
}

TEST_CASE("pigs paint a 37-cell disc") {
    CHECK(pig_cells(0.5, 0.07) == 7);
    const auto mask = disc_mask(7);
    CHECK(std::count(mask.begin(), mask.end(), 1) == 37);
    Structure s;
    s.pigs.push_back({1.0, 1.0, 0.5});
    CHECK(rasterize(s).count(Label::Pig) == 37);
}

TEST_CASE("rasterized extents stay within one cell of the footprint") {
    testing::Rng rng(11);
    std::uniform_real_distribution<double> pos(1.5, 7.5);
    for (int i = 0; i < 2000; ++i) {
        const auto& spec = kBlockCatalog[i % kBlockTypeCount];
        const auto o = (i / kBlockTypeCount) % 2 ? Orientation::Vertical : Orientation::Horizontal;
        Structure s;
        s.blocks.push_back({spec.type, Material::Wood, o, pos(rng), pos(rng)});
        const auto grid = rasterize(s, {}, Anchoring::GridFrame);
        int r0 = 1000, r1 = -1, c0 = 1000, c1 = -1;
        for (int r = 0; r < grid.height(); ++r)
            for (int c = 0; c < grid.width(); ++c)
                if (grid.at(r, c) != Label::Air) {
                    r0 = std::min(r0, r), r1 = std::max(r1, r), c0 = std::min(c0, c), c1 = std::max(c1, c);
                }
        const auto fp = canonical_footprint(spec.type, o);
        CHECK(std::abs((c1 - c0 + 1) - fp.cells_wide) <= 1);
        CHECK(std::abs((r1 - r0 + 1) - fp.cells_high) <= 1);
    }
}

TEST_CASE("rasterize is translation invariant") {
    testing::Rng rng(5);
    std::uniform_real_distribution<double> shift(-50.0, 50.0);
    for (int i = 0; i < 100; ++i) {
        const auto s = testing::random_structure(rng, 1 + i % 9, i % 3);
        const auto moved = translated(s, shift(rng), shift(rng));
        CHECK(rasterize(s) == rasterize(moved));
    }
}

TEST_CASE("oversized structures raise a capacity error") {
    Structure s;
    for (int i = 0; i < 6; ++i) {
        s.blocks.push_back({BlockType::RectBig, Material::Wood, Orientation::Horizontal, i * 2.06, 0.11});
    }
    try {
        rasterize(s);
        FAIL("expected CapacityError");
    } catch (const CapacityError& e) {
        CHECK(e.required_width() > 128);
        CHECK(std::string(e.what()).find("cells") != std::string::npos);
    }
}

TEST_CASE("raster config validation") {
    CHECK_NOTHROW(RasterConfig{}.validate());
    CHECK_THROWS_AS((RasterConfig{0.0, 128, 128}.validate()), ValidationError);
    CHECK_THROWS_AS((RasterConfig{0.07, 20, 128}.validate()), ValidationError);
}

TEST_CASE("multilayer encoding") {
    SUBCASE("all air") {
        const auto t = to_multilayer(OccupancyGrid(128, 128));
        CHECK(t.layers() == 5);
        for (int r = 0; r < 128; ++r)
            for (int c = 0; c < 128; ++c) {
                CHECK(t.at(0, r, c) == 1.0f);
                for (int l = 1; l < 5; ++l) CHECK(t.at(l, r, c) == 0.0f);
            }
    }
    SUBCASE("one wood cell") {
        OccupancyGrid g(128, 128);
        g.set(10, 20, Label::Wood);
        const auto t = to_multilayer(g);
        int ones = 0;
        for (int r = 0; r < 128; ++r)
            for (int c = 0; c < 128; ++c) ones += t.at(1, r, c) == 1.0f;
        CHECK(ones == 1);
        CHECK(t.at(1, 10, 20) == 1.0f);
    }
    SUBCASE("argmax reproduces random grids and layers sum to one") {
        testing::Rng rng(9);
        std::uniform_int_distribution<int> label(0, 4);
        for (int i = 0; i < 20; ++i) {
            OccupancyGrid g(128, 128);
            for (int r = 0; r < 128; ++r)
                for (int c = 0; c < 128; ++c) g.set(r, c, static_cast<Label>(label(rng)));
            const auto t = to_multilayer(g);
            for (int r = 0; r < 128; ++r)
                for (int c = 0; c < 128; ++c) {
                    float sum = 0;
                    for (int l = 0; l < 5; ++l) sum += t.at(l, r, c);
                    REQUIRE(sum == 1.0f);
                }
            CHECK(from_multilayer(t) == g);
        }
    }
}

TEST_CASE("from_multilayer argmax and tie-break") {
    LayerTensor t(5, 128, 128);
    const float cell[5] = {0.2f, 0.9f, 0.1f, 0.0f, 0.0f};
    for (int l = 0; l < 5; ++l) t.at(l, 0, 0) = cell[l];
    for (int l = 0; l < 5; ++l) t.at(l, 0, 1) = 0.3f;
    t.at(3, 0, 2) = 0.5f;
    t.at(4, 0, 2) = 0.5f;
    const auto g = from_multilayer(t);
    CHECK(g.at(0, 0) == Label::Wood);
    CHECK(g.at(0, 1) == Label::Air);
    CHECK(g.at(0, 2) == Label::Stone);
    CHECK(g.at(5, 5) == Label::Air);
    CHECK_THROWS_AS(from_multilayer(LayerTensor(4, 8, 8)), ValidationError);
}

TEST_CASE("label_iou") {
    OccupancyGrid a(4, 4), b(4, 4);
    CHECK(label_iou(a, b) == 1.0);
    a.set(0, 0, Label::Wood);
    a.set(0, 1, Label::Wood);
    b.set(0, 0, Label::Wood);
    b.set(0, 1, Label::Ice);
    CHECK(label_iou(a, b) == doctest::Approx(0.5));
}
