#include <gtest/gtest.h>

#include <sstream>

#include "biogeo/netpbm.hpp"
#include "biogeo/raster.hpp"
#include "biogeo/raster_io.hpp"
#include "test_util.hpp"

using namespace biogeo;
using biogeo::testing::TempDir;

namespace {

void write_band(const TempDir& dir, const std::string& name, std::size_t w, std::size_t h, std::vector<Dn> px) {
    write_pgm(dir.file(name), GrayImage{w, h, std::move(px)});
}

}  // namespace

TEST(MultibandImage, RejectsInvalidConstruction) {
    EXPECT_THROW(MultibandImage(0, 1, {"A"}, {{}}), Error);
    EXPECT_THROW(MultibandImage(1, 1, {}, {}), Error);
    EXPECT_THROW(MultibandImage(1, 1, {"A", "A"}, {{1}, {2}}), Error);
    EXPECT_THROW(MultibandImage(2, 1, {"A"}, {{1}}), Error);
}

TEST(MultibandImage, PixelVectorConstantImage) {
    std::vector<std::vector<Dn>> bands(7, std::vector<Dn>{42});
    MultibandImage img(1, 1, biogeo::testing::seven_bands(), bands);
    EXPECT_EQ(img.pixel_vector(0, 0), (DnVector{42, 42, 42, 42, 42, 42, 42}));
    EXPECT_THROW(img.pixel_vector(1, 0), Error);
    EXPECT_THROW(img.pixel_vector(0, 1), Error);
}

TEST(Manifest, LoadsSevenBandsAndReadsTrainingPixels) {
    // Two pixels carrying the first Barren and first Rocky training rows.
    TempDir dir;
    const DnVector barren{127, 96, 184, 131, 17, 32, 29};
    const DnVector rocky{62, 49, 135, 91, 44, 40, 94};
    std::ostringstream manifest;
    manifest << "# seven-band scene\n";
    for (std::size_t b = 0; b < 7; ++b) {
        const auto& name = biogeo::testing::seven_bands()[b];
        write_band(dir, name + ".pgm", 2, 1, {barren[b], rocky[b]});
        manifest << name << " = " << name << ".pgm   # band " << b << "\n";
    }
    biogeo::testing::spit(dir.file("scene.txt"), manifest.str());
    const auto img = load_manifest(dir.file("scene.txt"));
    EXPECT_EQ(img.band_names(), biogeo::testing::seven_bands());
    EXPECT_EQ(img.pixel_vector(0, 0), barren);
    EXPECT_EQ(img.pixel_vector(1, 0), rocky);
}

TEST(Manifest, FullSizeSceneKeepsManifestOrder) {
    TempDir dir;
    const std::size_t w = 472, h = 546;
    std::ostringstream manifest;
    for (std::size_t b = 0; b < 7; ++b) {
        const auto& name = biogeo::testing::seven_bands()[b];
        write_band(dir, name + ".pgm", w, h, std::vector<Dn>(w * h, static_cast<Dn>(b)));
        manifest << name << "=" << name << ".pgm\n";
    }
    biogeo::testing::spit(dir.file("m.txt"), manifest.str());
    const auto img = load_manifest(dir.file("m.txt"));
    EXPECT_EQ(img.width(), w);
    EXPECT_EQ(img.height(), h);
    EXPECT_EQ(img.band_names(), biogeo::testing::seven_bands());
    EXPECT_EQ(img.value(6, 1234), 6);
}

TEST(Manifest, SinglePixelBand) {
    TempDir dir;
    write_band(dir, "a.pgm", 1, 1, {0});
    biogeo::testing::spit(dir.file("m.txt"), "A = a.pgm\n");
    EXPECT_EQ(load_manifest(dir.file("m.txt")).pixel_vector(0, 0), DnVector{0});
}

TEST(Manifest, Errors) {
    TempDir dir;
    write_band(dir, "a.pgm", 2, 2, {1, 2, 3, 4});
    write_band(dir, "b.pgm", 2, 1, {1, 2});
    biogeo::testing::spit(dir.file("mismatch.txt"), "A = a.pgm\nB = b.pgm\n");
    EXPECT_THROW(load_manifest(dir.file("mismatch.txt")), Error);

    biogeo::testing::spit(dir.file("missing.txt"), "A = nope.pgm\n");
    EXPECT_THROW(load_manifest(dir.file("missing.txt")), Error);
    EXPECT_THROW(load_manifest(dir.file("no_manifest.txt")), Error);

    biogeo::testing::spit(dir.file("dup.txt"), "A = a.pgm\nA = a.pgm\n");
    try {
        load_manifest(dir.file("dup.txt"));
        FAIL() << "duplicate band accepted";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }

    biogeo::testing::spit(dir.file("wide.pgm"), "P2\n1 1\n65535\n300\n");
    biogeo::testing::spit(dir.file("wide.txt"), "A = wide.pgm\n");
    EXPECT_THROW(load_manifest(dir.file("wide.txt")), ParseError);

    biogeo::testing::spit(dir.file("bad.txt"), "A a.pgm\n");
    EXPECT_THROW(load_manifest(dir.file("bad.txt")), ParseError);
}

TEST(Pgm, ReadsAsciiWithComments) {
    std::istringstream in("P2\n# comment\n3 1 # trailing\n200\n0 100\n200\n");
    const auto g = read_pgm(in);
    EXPECT_EQ(g.width, 3u);
    EXPECT_EQ(g.pixels, (std::vector<Dn>{0, 100, 200}));
}

TEST(Pgm, RejectsMalformed) {
    std::istringstream magic("P3\n1 1\n255\n0 0 0\n");
    EXPECT_THROW(read_pgm(magic), ParseError);
    std::istringstream over("P2\n1 1\n10\n11\n");
    EXPECT_THROW(read_pgm(over), ParseError);
    std::istringstream truncated("P5\n4 1\n255\nab");
    EXPECT_THROW(read_pgm(truncated), ParseError);
}

TEST(LabelMap, RoundTrip3x3) {
    LabelMap m(3, 3, {"water", "urban"}, {0, 1, -1, 1, 1, 0, -1, -1, 0});
    std::stringstream ss;
    save_label_map(ss, m);
    EXPECT_EQ(load_label_map(ss), m);
}

TEST(LabelMap, AllUnclassifiedRoundTrip) {
    TempDir dir;
    LabelMap m(4, 2, {"water"});
    save_label_map(dir.file("l.txt"), m);
    const auto back = load_label_map(dir.file("l.txt"));
    EXPECT_EQ(back, m);
    EXPECT_EQ(back.unclassified_count(), 8u);
}

TEST(LabelMap, ParseErrors) {
    std::istringstream ragged("3 2\na b\n0 1 0\n1 0\n");
    try {
        load_label_map(ragged, "ragged");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4u);
    }
    std::istringstream unknown("2 1\na\n0 1\n");
    EXPECT_THROW(load_label_map(unknown), ParseError);
    std::istringstream junk("2 1\na\n0 x\n");
    EXPECT_THROW(load_label_map(junk), ParseError);
    std::istringstream short_rows("2 2\na\n0 0\n");
    EXPECT_THROW(load_label_map(short_rows), ParseError);
    std::istringstream minus2("1 1\na\n-2\n");
    EXPECT_THROW(load_label_map(minus2), ParseError);
}

TEST(LabelMap, RejectsWhitespaceInClassNames) {
    LabelMap m(1, 1, {"bare soil"});
    std::ostringstream out;
    EXPECT_THROW(save_label_map(out, m), Error);
}

namespace {

std::vector<Rgb> render(const LabelMap& m, const Palette& p = Palette::standard()) {
    std::stringstream ss;
    render_ppm(m, p, ss);
    std::size_t w = 0, h = 0;
    auto px = read_ppm(ss, w, h);
    EXPECT_EQ(w, m.width());
    EXPECT_EQ(h, m.height());
    return px;
}

}  // namespace

TEST(Render, StandardPalette) {
    EXPECT_EQ(render(LabelMap(1, 1, {"water"}, {0})), (std::vector<Rgb>{{0, 0, 255}}));
    EXPECT_EQ(render(LabelMap(1, 1, {"water"})), (std::vector<Rgb>{{255, 255, 255}}));
    EXPECT_EQ(render(LabelMap(2, 1, {"rocky", "barren"}, {0, 1})), (std::vector<Rgb>{{255, 255, 0}, {0, 0, 0}}));
    EXPECT_EQ(render(LabelMap(2, 1, {"Vegetation", "URBAN"}, {0, 1})), (std::vector<Rgb>{{0, 255, 0}, {255, 0, 0}}));
}

TEST(Render, HeaderIsP6) {
    std::ostringstream out;
    render_ppm(LabelMap(2, 1, {"water"}, {0, 0}), Palette::standard(), out);
    EXPECT_EQ(out.str().substr(0, 11), "P6\n2 1\n255\n");
    EXPECT_EQ(out.str().size(), 11u + 6u);
}

TEST(Render, CustomPaletteOverridesAndExtends) {
    std::istringstream in("# custom\nwater 10 20 30\nsnow 250 250 250\n");
    const auto p = Palette::parse(in, "palette");
    EXPECT_EQ(render(LabelMap(2, 1, {"water", "snow"}, {0, 1}), p), (std::vector<Rgb>{{10, 20, 30}, {250, 250, 250}}));
    std::istringstream bad("water 10 20\n");
    EXPECT_THROW(Palette::parse(bad, "bad"), ParseError);
    std::istringstream range("water 10 20 256\n");
    EXPECT_THROW(Palette::parse(range, "range"), ParseError);
}

TEST(Render, MissingPaletteEntry) {
    std::ostringstream out;
    EXPECT_THROW(render_ppm(LabelMap(1, 1, {"glacier"}, {0}), Palette::standard(), out), Error);
    TempDir dir;
    EXPECT_THROW(render_ppm(LabelMap(1, 1, {"water"}, {0}), Palette::standard(), dir.file("no/such/dir/x.ppm")),
                 Error);
}
