#include <gtest/gtest.h>

#include <map>
#include <numeric>
#include <set>

#include "biogeo/random.hpp"
#include "biogeo/roughset.hpp"
#include "test_util.hpp"

using namespace biogeo;

namespace {

std::vector<PixelIndex> all_pixels(const MultibandImage& img) {
    std::vector<PixelIndex> v(img.pixel_count());
    std::iota(v.begin(), v.end(), PixelIndex{0});
    return v;
}

// Independent oracle: linear scan over cuts, grouping in a plain map.
std::map<std::vector<std::size_t>, std::set<PixelIndex>> brute_partition(const MultibandImage& img,
                                                                         const DiscretizationScheme& s,
                                                                         const std::vector<PixelIndex>& pool) {
    std::map<std::vector<std::size_t>, std::set<PixelIndex>> out;
    for (PixelIndex p : pool) {
        std::vector<std::size_t> sig;
        for (std::size_t i = 0; i < s.bands.size(); ++i) {
            const double v = img.value(s.bands[i], p);
            std::size_t k = 0;
            while (k < s.cuts[i].size() && v >= s.cuts[i][k])
                ++k;
            sig.push_back(k);
        }
        out[sig].insert(p);
    }
    return out;
}

MultibandImage checker(std::size_t n) {
    // Two bands with alternating low/high tiles of varying DN.
    std::vector<DnVector> px;
    for (std::size_t y = 0; y < n; ++y)
        for (std::size_t x = 0; x < n; ++x) {
            const bool dark = (x + y) % 2 == 0;
            px.push_back({static_cast<Dn>(dark ? 10 + x : 200 + y), static_cast<Dn>(dark ? 250 - y : 40 + x)});
        }
    return biogeo::testing::image_from_vectors(n, n, px, {"NIR", "MIR"});
}

}  // namespace

TEST(EqualWidthCuts, Examples) {
    EXPECT_EQ(equal_width_cuts(0, 255, 4), (std::vector<double>{63.75, 127.5, 191.25}));
    EXPECT_TRUE(equal_width_cuts(0, 255, 1).empty());
    EXPECT_EQ(equal_width_cuts(100, 200, 2), (std::vector<double>{150.0}));
}

TEST(EqualWidthCuts, Errors) {
    EXPECT_THROW(equal_width_cuts(0, 255, 0), Error);
    EXPECT_THROW(equal_width_cuts(5, 5, 2), Error);
    EXPECT_THROW(equal_width_cuts(6, 5, 2), Error);
}

TEST(IntervalOf, Examples) {
    const std::vector<double> cuts{63.75, 127.5, 191.25};
    EXPECT_EQ(interval_of(10, cuts), 0u);
    EXPECT_EQ(interval_of(128, cuts), 2u);
    EXPECT_EQ(interval_of(127.5, cuts), 2u);  // equal to a cut falls right
    EXPECT_EQ(interval_of(255, cuts), 3u);
    EXPECT_EQ(interval_of(0, std::vector<double>{}), 0u);
}

TEST(IntervalOf, MonotoneInValue) {
    Random rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const auto k = 1 + rng.index(12);
        const double lo = rng.uniform(0, 100), hi = lo + 1 + rng.uniform(0, 155);
        const auto cuts = equal_width_cuts(lo, hi, k);
        std::size_t prev = 0;
        for (int v = 0; v <= 255; ++v) {
            const auto i = interval_of(v, cuts);
            ASSERT_GE(i, prev);
            ASSERT_LE(i, cuts.size());
            prev = i;
        }
    }
}

TEST(FormSpecies, ConstantImageIsOneSpecies) {
    std::vector<DnVector> px(12, DnVector{7, 7});
    const auto img = biogeo::testing::image_from_vectors(4, 3, px, {"NIR", "MIR"});
    const auto pool = all_pixels(img);
    const auto scheme = observed_range_scheme(img, {0, 1}, pool, 8, 0);
    const auto species = form_species(img, scheme, pool);
    ASSERT_EQ(species.size(), 1u);
    EXPECT_EQ(species[0].pixels, pool);

    DiscretizationScheme fixed{{0, 1}, {{63.75, 127.5}, {100}}, 3, 0};
    EXPECT_EQ(form_species(img, fixed, pool).size(), 1u);
}

TEST(FormSpecies, TwoPixelsAcrossOneCut) {
    const auto img = biogeo::testing::image_from_vectors(2, 1, {{10, 5}, {200, 5}}, {"NIR", "MIR"});
    DiscretizationScheme s{{0}, {{127.5}}, 2, 0};
    const auto species = form_species(img, s, all_pixels(img));
    ASSERT_EQ(species.size(), 2u);
    EXPECT_EQ(species[0].pixels, std::vector<PixelIndex>{0});
    EXPECT_EQ(species[0].signature, std::vector<std::size_t>{0});
    EXPECT_EQ(species[1].pixels, std::vector<PixelIndex>{1});
    EXPECT_NE(species[0].id, species[1].id);
}

TEST(FormSpecies, CheckerMatchesBruteForcePartition) {
    const auto img = checker(16);
    const auto pool = all_pixels(img);
    const auto scheme = observed_range_scheme(img, {0, 1}, pool, 4, 0);
    const auto species = form_species(img, scheme, pool);
    EXPECT_LE(species.size(), 16u);

    const auto oracle = brute_partition(img, scheme, pool);
    ASSERT_EQ(species.size(), oracle.size());
    std::set<PixelIndex> seen;
    for (const auto& s : species) {
        const auto it = oracle.find(s.signature);
        ASSERT_NE(it, oracle.end());
        EXPECT_EQ(std::set<PixelIndex>(s.pixels.begin(), s.pixels.end()), it->second);
        for (PixelIndex p : s.pixels)
            EXPECT_TRUE(seen.insert(p).second) << "pixel in two species";
    }
    EXPECT_EQ(seen.size(), pool.size());
}

TEST(FormSpecies, OrderedBySizeThenSignature) {
    // NIR values: three pixels low, one high, one middle.
    const auto img = biogeo::testing::image_from_vectors(5, 1, {{0}, {0}, {0}, {255}, {128}}, {"NIR"});
    DiscretizationScheme s{{0}, {{85, 170}}, 3, 0};
    const auto species = form_species(img, s, all_pixels(img));
    ASSERT_EQ(species.size(), 3u);
    EXPECT_EQ(species[0].size(), 3u);
    EXPECT_EQ(species[1].signature, std::vector<std::size_t>{1});
    EXPECT_EQ(species[2].signature, std::vector<std::size_t>{2});
}

TEST(FormSpecies, Errors) {
    const auto img = biogeo::testing::image_from_vectors(2, 1, {{1}, {2}}, {"NIR"});
    DiscretizationScheme s{{0}, {{1.5}}, 2, 0};
    EXPECT_THROW(form_species(img, s, std::vector<PixelIndex>{}), Error);
    DiscretizationScheme bad_band{{3}, {{1.5}}, 2, 0};
    EXPECT_THROW(form_species(img, bad_band, all_pixels(img)), Error);
    DiscretizationScheme unsorted{{0}, {{2, 1}}, 3, 0};
    EXPECT_THROW(form_species(img, unsorted, all_pixels(img)), Error);
    EXPECT_THROW(form_species(img, s, std::vector<PixelIndex>{0, 0}), Error);
}

TEST(Refine, SingletonIsSaturated) {
    const auto img = biogeo::testing::image_from_vectors(2, 1, {{1, 2}, {3, 4}}, {"NIR", "MIR"});
    DiscretizationScheme parent{{0, 1}, {{}, {}}, 8, 0};
    Species s{7, {1}, {0, 0}, 0, false};
    const auto r = refine(s, img, parent);
    EXPECT_TRUE(r.saturated);
    ASSERT_EQ(r.species.size(), 1u);
    EXPECT_EQ(r.species[0].pixels, s.pixels);
    EXPECT_EQ(r.species[0].id, 7u);
    EXPECT_TRUE(r.species[0].saturated);
}

TEST(Refine, IdenticalOnDiscretizationBandsIsSaturated) {
    // Third band differs but is not a discretization band.
    const auto img = biogeo::testing::image_from_vectors(3, 1, {{9, 9, 1}, {9, 9, 100}, {9, 9, 200}},
                                                         {"NIR", "MIR", "DEM"});
    DiscretizationScheme parent{{0, 1}, {{}, {}}, 8, 0};
    Species s{0, {0, 1, 2}, {0, 0}, 0, false};
    EXPECT_TRUE(refine(s, img, parent).saturated);
}

TEST(Refine, SplitsMixedSpecies) {
    const auto img = biogeo::testing::image_from_vectors(4, 1, {{10, 50}, {10, 50}, {200, 50}, {200, 50}},
                                                         {"NIR", "MIR"});
    DiscretizationScheme parent{{0, 1}, {{}, {}}, 8, 2};
    Species s{0, {0, 1, 2, 3}, {0, 0}, 2, false};
    SpeciesIds ids;
    const auto r = refine(s, img, parent, ids);
    EXPECT_FALSE(r.saturated);
    EXPECT_EQ(r.scheme.intervals, 16u);
    EXPECT_EQ(r.scheme.depth, 3u);
    ASSERT_GE(r.species.size(), 2u);
    std::set<PixelIndex> all;
    for (const auto& c : r.species) {
        EXPECT_EQ(c.depth, 3u);
        EXPECT_FALSE(c.saturated);
        // Members share the child's signature under the refined scheme.
        for (PixelIndex p : c.pixels)
            EXPECT_EQ(signature_of(img, r.scheme, p), c.signature);
        all.insert(c.pixels.begin(), c.pixels.end());
    }
    EXPECT_EQ(all, (std::set<PixelIndex>{0, 1, 2, 3}));
}

TEST(Refine, RandomPoolsNeverLosePixels) {
    Random rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng.index(60);
        std::vector<DnVector> px;
        for (std::size_t i = 0; i < n; ++i)
            px.push_back({static_cast<Dn>(rng.index(256)), static_cast<Dn>(rng.index(3))});
        const auto img = biogeo::testing::image_from_vectors(n, 1, px, {"NIR", "MIR"});
        const auto pool = all_pixels(img);
        const auto scheme = observed_range_scheme(img, {0, 1}, pool, 2, 0);
        for (const auto& s : form_species(img, scheme, pool)) {
            const auto r = refine(s, img, scheme);
            std::vector<PixelIndex> back;
            for (const auto& c : r.species) {
                back.insert(back.end(), c.pixels.begin(), c.pixels.end());
                EXPECT_EQ(c.depth, r.saturated ? s.depth : s.depth + 1);
            }
            std::sort(back.begin(), back.end());
            EXPECT_EQ(back, s.pixels);
        }
    }
}
