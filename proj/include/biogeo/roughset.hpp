#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "biogeo/error.hpp"
#include "biogeo/raster.hpp"

namespace biogeo {

// Interval partition of a subset of bands. `intervals` is the nominal count
// per band; a band whose observed range is a single value carries no cuts.
struct DiscretizationScheme {
    std::vector<std::size_t> bands;
    std::vector<std::vector<double>> cuts;  // parallel to bands, strictly ascending
    std::size_t intervals = 1;
    std::size_t depth = 0;

    void validate(const MultibandImage& image) const {
        if (bands.empty())
            throw Error("discretization needs at least one band");
        if (cuts.size() != bands.size())
            throw Error("one cut list per discretization band required");
        if (intervals == 0)
            throw Error("interval count must be positive");
        for (std::size_t i = 0; i < bands.size(); ++i) {
            if (bands[i] >= image.band_count())
                throw Error("discretization band " + std::to_string(bands[i]) + " not in image");
            for (std::size_t c = 1; c < cuts[i].size(); ++c)
                if (!(cuts[i][c - 1] < cuts[i][c]))
                    throw Error("cut list must be strictly ascending");
        }
    }
};

// A granule of pixels sharing one interval signature: the unit that migrates.
struct Species {
    std::uint64_t id = 0;
    std::vector<PixelIndex> pixels;         // ascending
    std::vector<std::size_t> signature;     // interval index per scheme band
    std::size_t depth = 0;
    bool saturated = false;                 // cannot be split any further

    std::size_t size() const noexcept { return pixels.size(); }
};

// Monotone id source so species stay uniquely identified across refinements.
class SpeciesIds {
public:
    std::uint64_t next() noexcept { return next_++; }

private:
    std::uint64_t next_ = 0;
};

// Cuts at lo + i*(hi-lo)/k for i = 1..k-1.
inline std::vector<double> equal_width_cuts(double lo, double hi, std::size_t k) {
    if (k == 0)
        throw Error("interval count must be positive");
    if (!(lo < hi))
        throw Error("equal-width cuts need lo < hi");
    std::vector<double> cuts;
    cuts.reserve(k - 1);
    for (std::size_t i = 1; i < k; ++i)
        cuts.push_back(lo + static_cast<double>(i) * (hi - lo) / static_cast<double>(k));
    return cuts;
}

// Index of the interval holding value; a value equal to a cut falls right.
inline std::size_t interval_of(double value, std::span<const double> cuts) {
    return static_cast<std::size_t>(std::upper_bound(cuts.begin(), cuts.end(), value) - cuts.begin());
}

// Equal-width scheme over the observed min/max of each band within pixels.
inline DiscretizationScheme observed_range_scheme(const MultibandImage& image, std::vector<std::size_t> bands,
                                                  std::span<const PixelIndex> pixels, std::size_t intervals,
                                                  std::size_t depth) {
    if (pixels.empty())
        throw Error("cannot discretize an empty pixel set");
    DiscretizationScheme scheme{std::move(bands), {}, intervals, depth};
    for (std::size_t b : scheme.bands) {
        if (b >= image.band_count())
            throw Error("discretization band " + std::to_string(b) + " not in image");
        const auto band = image.band(b);
        Dn lo = 255, hi = 0;
        for (PixelIndex p : pixels) {
            lo = std::min(lo, band[p]);
            hi = std::max(hi, band[p]);
        }
        scheme.cuts.push_back(lo < hi && intervals > 1 ? equal_width_cuts(lo, hi, intervals) : std::vector<double>{});
    }
    return scheme;
}

inline std::vector<std::size_t> signature_of(const MultibandImage& image, const DiscretizationScheme& scheme,
                                             PixelIndex p) {
    std::vector<std::size_t> sig(scheme.bands.size());
    for (std::size_t i = 0; i < scheme.bands.size(); ++i)
        sig[i] = interval_of(image.value(scheme.bands[i], p), scheme.cuts[i]);
    return sig;
}

// Partitions pool by interval signature. Output is ordered by descending
// size, ties by ascending signature.
inline std::vector<Species> form_species(const MultibandImage& image, const DiscretizationScheme& scheme,
                                         std::span<const PixelIndex> pool, SpeciesIds& ids) {
    if (pool.empty())
        throw Error("cannot form species from an empty pixel pool");
    scheme.validate(image);
    std::map<std::vector<std::size_t>, std::vector<PixelIndex>> groups;
    for (PixelIndex p : pool) {
        if (p >= image.pixel_count())
            throw Error("pixel index " + std::to_string(p) + " out of range");
        groups[signature_of(image, scheme, p)].push_back(p);
    }
    std::vector<Species> species;
    species.reserve(groups.size());
    for (auto& [sig, pixels] : groups) {
        std::sort(pixels.begin(), pixels.end());
        if (std::adjacent_find(pixels.begin(), pixels.end()) != pixels.end())
            throw Error("pixel pool contains duplicates");
        species.push_back({0, std::move(pixels), sig, scheme.depth, false});
    }
    // Map iteration is already ascending by signature.
    std::stable_sort(species.begin(), species.end(),
                     [](const Species& a, const Species& b) { return a.size() > b.size(); });
    for (auto& s : species)
        s.id = ids.next();
    return species;
}

inline std::vector<Species> form_species(const MultibandImage& image, const DiscretizationScheme& scheme,
                                         std::span<const PixelIndex> pool) {
    SpeciesIds ids;
    return form_species(image, scheme, pool, ids);
}

struct Refinement {
    DiscretizationScheme scheme;   // scheme the children were cut with
    std::vector<Species> species;  // the input itself, flagged, when saturated
    bool saturated = false;
};

// Re-discretizes a rejected species: twice the parent's interval count, cut
// over the species' own range, one level deeper.
inline Refinement refine(const Species& species, const MultibandImage& image, const DiscretizationScheme& parent,
                         SpeciesIds& ids) {
    if (species.pixels.empty())
        throw Error("cannot refine an empty species");
    Refinement r;
    r.scheme = observed_range_scheme(image, parent.bands, species.pixels, parent.intervals * 2, species.depth + 1);
    const bool splittable =
        std::any_of(r.scheme.cuts.begin(), r.scheme.cuts.end(), [](const auto& c) { return !c.empty(); });
    if (!splittable) {
        Species same = species;
        same.saturated = true;
        r.species.push_back(std::move(same));
        r.saturated = true;
        return r;
    }
    r.species = form_species(image, r.scheme, species.pixels, ids);
    return r;
}

inline Refinement refine(const Species& species, const MultibandImage& image, const DiscretizationScheme& parent) {
    SpeciesIds ids;
    return refine(species, image, parent, ids);
}

}  // namespace biogeo
