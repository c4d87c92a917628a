#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "biogeo/error.hpp"
#include "biogeo/raster.hpp"
#include "biogeo/roughset.hpp"

namespace biogeo {

enum class AssignmentPolicy { FirstFit, BestFit };
enum class Aggregate { MaxAbs, MeanAbs };
enum class StddevConvention { Sample, Population };

// Per-band standard deviation: the habitat suitability index.
using HsiVector = std::vector<double>;

// Subset of bands taking part in HSI comparison.
class BandMask {
public:
    BandMask() = default;

    static BandMask all(std::size_t bands) { return BandMask(std::vector<bool>(bands, true)); }

    static BandMask of(std::size_t bands, std::span<const std::size_t> selected) {
        std::vector<bool> on(bands, false);
        for (std::size_t b : selected) {
            if (b >= bands)
                throw Error("band " + std::to_string(b) + " outside mask of " + std::to_string(bands));
            on[b] = true;
        }
        return BandMask(std::move(on));
    }

    std::size_t size() const noexcept { return on_.size(); }
    std::size_t count() const { return static_cast<std::size_t>(std::count(on_.begin(), on_.end(), true)); }
    bool operator[](std::size_t b) const { return on_[b]; }

private:
    explicit BandMask(std::vector<bool> on) : on_(std::move(on)) {
        if (count() == 0)
            throw Error("band mask must select at least one band");
    }

    std::vector<bool> on_;
};

// Exact integer first and second moments per band.
class BandMoments {
public:
    explicit BandMoments(std::size_t bands = 0) : sum_(bands, 0), sum_sq_(bands, 0) {}

    void add(std::span<const Dn> v) {
        if (v.size() != sum_.size())
            throw Error("vector has " + std::to_string(v.size()) + " bands, expected " + std::to_string(sum_.size()));
        for (std::size_t b = 0; b < v.size(); ++b) {
            sum_[b] += v[b];
            sum_sq_[b] += std::int64_t{v[b]} * v[b];
        }
        ++count_;
    }

    void add(const MultibandImage& image, PixelIndex p) {
        for (std::size_t b = 0; b < sum_.size(); ++b) {
            const std::int64_t v = image.value(b, p);
            sum_[b] += v;
            sum_sq_[b] += v * v;
        }
        ++count_;
    }

    BandMoments& operator+=(const BandMoments& o) {
        for (std::size_t b = 0; b < sum_.size(); ++b) {
            sum_[b] += o.sum_[b];
            sum_sq_[b] += o.sum_sq_[b];
        }
        count_ += o.count_;
        return *this;
    }

    friend BandMoments operator+(BandMoments a, const BandMoments& b) { return a += b; }

    std::int64_t count() const noexcept { return count_; }
    std::size_t band_count() const noexcept { return sum_.size(); }

    double mean(std::size_t b) const { return count_ ? static_cast<double>(sum_[b]) / static_cast<double>(count_) : 0.0; }

    // Sample convention with a single member gives 0.
    double stddev(std::size_t b, StddevConvention convention) const {
        if (count_ <= 1)
            return 0.0;
        // n * sum(x^2) - (sum x)^2 = n^2 * population variance, exact in integers.
        const __int128 n = count_;
        const __int128 scaled = n * sum_sq_[b] - __int128{sum_[b]} * sum_[b];
        const __int128 denom = convention == StddevConvention::Sample ? n * (n - 1) : n * n;
        return std::sqrt(static_cast<double>(scaled) / static_cast<double>(denom));
    }

    HsiVector hsi(const BandMask& mask, StddevConvention convention) const {
        HsiVector h(sum_.size(), 0.0);
        for (std::size_t b = 0; b < h.size(); ++b)
            if (mask[b])
                h[b] = stddev(b, convention);
        return h;
    }

    static BandMoments of(const MultibandImage& image, std::span<const PixelIndex> pixels) {
        BandMoments m(image.band_count());
        for (PixelIndex p : pixels)
            m.add(image, p);
        return m;
    }

private:
    std::int64_t count_ = 0;
    std::vector<std::int64_t> sum_;
    std::vector<std::int64_t> sum_sq_;
};

// Two-pass standard deviation over explicit vectors; unmasked bands are 0.
inline HsiVector hsi_of(std::span<const DnVector> vectors, const BandMask& mask, StddevConvention convention) {
    if (vectors.empty())
        throw Error("HSI of an empty vector set is undefined");
    const std::size_t bands = mask.size();
    HsiVector h(bands, 0.0);
    const double n = static_cast<double>(vectors.size());
    for (std::size_t b = 0; b < bands; ++b) {
        if (!mask[b])
            continue;
        double mean = 0.0;
        for (const auto& v : vectors) {
            if (v.size() != bands)
                throw Error("vector band count does not match mask");
            mean += v[b];
        }
        mean /= n;
        double ss = 0.0;
        for (const auto& v : vectors)
            ss += (v[b] - mean) * (v[b] - mean);
        if (vectors.size() == 1)
            continue;
        h[b] = std::sqrt(ss / (convention == StddevConvention::Sample ? n - 1.0 : n));
    }
    return h;
}

// A feature habitat: one land-cover class, seeded with training vectors and
// growing as species are absorbed.
class Habitat {
public:
    Habitat(std::string label, std::vector<DnVector> training, BandMask mask, StddevConvention convention)
        : label_(std::move(label)), training_(std::move(training)), mask_(std::move(mask)), convention_(convention),
          moments_(mask_.size()) {
        if (training_.empty())
            throw Error("class '" + label_ + "' has no training vectors");
        for (const auto& v : training_)
            moments_.add(v);
        hsi_ = moments_.hsi(mask_, convention_);
    }

    const std::string& label() const noexcept { return label_; }
    const std::vector<DnVector>& training_vectors() const noexcept { return training_; }
    const std::vector<PixelIndex>& absorbed_pixels() const noexcept { return absorbed_; }
    const BandMoments& moments() const noexcept { return moments_; }
    const HsiVector& hsi() const noexcept { return hsi_; }
    const BandMask& mask() const noexcept { return mask_; }
    StddevConvention convention() const noexcept { return convention_; }

    // HSI after a hypothetical migration minus the current HSI.
    HsiVector delta(const BandMoments& species) const {
        HsiVector d = (moments_ + species).hsi(mask_, convention_);
        for (std::size_t b = 0; b < d.size(); ++b)
            d[b] -= hsi_[b];
        return d;
    }

    void absorb(const Species& species, const BandMoments& species_moments) {
        absorbed_.insert(absorbed_.end(), species.pixels.begin(), species.pixels.end());
        moments_ += species_moments;
        hsi_ = moments_.hsi(mask_, convention_);
    }

    // Members are the training vectors plus the absorbed pixels' vectors.
    std::vector<DnVector> member_vectors(const MultibandImage& image) const {
        std::vector<DnVector> v = training_;
        for (PixelIndex p : absorbed_)
            v.push_back(image.pixel_vector(p));
        return v;
    }

private:
    std::string label_;
    std::vector<DnVector> training_;
    std::vector<PixelIndex> absorbed_;
    BandMask mask_;
    StddevConvention convention_;
    BandMoments moments_;
    HsiVector hsi_;
};

// Trial migration; the habitat is not modified.
inline HsiVector delta_hsi(const Habitat& habitat, const Species& species, const MultibandImage& image) {
    if (species.pixels.empty())
        throw Error("cannot migrate an empty species");
    return habitat.delta(BandMoments::of(image, species.pixels));
}

inline bool within_threshold(std::span<const double> delta, double tau) {
    if (!(tau > 0.0))
        throw Error("threshold must be positive");
    return std::all_of(delta.begin(), delta.end(), [tau](double d) { return d >= -tau && d <= tau; });
}

inline double aggregate_abs(std::span<const double> delta, const BandMask& mask, Aggregate how) {
    double acc = 0.0;
    for (std::size_t b = 0; b < delta.size(); ++b) {
        if (!mask[b])
            continue;
        const double a = std::abs(delta[b]);
        acc = how == Aggregate::MaxAbs ? std::max(acc, a) : acc + a;
    }
    return how == Aggregate::MaxAbs ? acc : acc / static_cast<double>(mask.count());
}

struct ClassifierConfig {
    double threshold = 1.0;                                      // |delta HSI| bound per band, DN
    std::vector<std::string> hsi_bands;                          // empty = every band
    std::vector<std::string> discretization_bands{"NIR", "MIR"};
    std::size_t initial_intervals = 8;
    std::size_t max_iterations = 5;
    AssignmentPolicy policy = AssignmentPolicy::BestFit;
    Aggregate aggregate = Aggregate::MeanAbs;
    StddevConvention convention = StddevConvention::Sample;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(threshold > 0.0) || !std::isfinite(threshold))
            throw Error("threshold must be positive");
        if (discretization_bands.empty())
            throw Error("at least one discretization band required");
        if (initial_intervals == 0)
            throw Error("initial interval count must be positive");
        if (max_iterations == 0)
            throw Error("max iterations must be positive");
    }
};

inline std::vector<std::size_t> resolve_bands(const MultibandImage& image, std::span<const std::string> names) {
    std::vector<std::size_t> out;
    std::set<std::size_t> seen;
    for (const auto& n : names) {
        auto b = image.band_index(n);
        if (!b)
            throw Error("band '" + n + "' not in image");
        if (!seen.insert(*b).second)
            throw Error("band '" + n + "' listed twice");
        out.push_back(*b);
    }
    return out;
}

inline BandMask resolve_hsi_mask(const MultibandImage& image, const ClassifierConfig& config) {
    if (config.hsi_bands.empty())
        return BandMask::all(image.band_count());
    const auto bands = resolve_bands(image, config.hsi_bands);
    return BandMask::of(image.band_count(), bands);
}

// Outcome of one trial migration.
struct Candidate {
    HsiVector delta;
    double score = 0.0;  // aggregate |delta|
    bool passes = false;
};

struct Assignment {
    std::size_t habitat = 0;
    HsiVector delta;
    double score = 0.0;
};

inline std::vector<Candidate> trial_migrations(const BandMoments& species, std::span<const Habitat> habitats,
                                               const ClassifierConfig& config) {
    std::vector<Candidate> out;
    out.reserve(habitats.size());
    for (const auto& h : habitats) {
        Candidate c;
        c.delta = h.delta(species);
        c.score = aggregate_abs(c.delta, h.mask(), config.aggregate);
        c.passes = within_threshold(c.delta, config.threshold);
        out.push_back(std::move(c));
    }
    return out;
}

// FirstFit takes the first passing habitat in declared order; BestFit the
// passing habitat of smallest aggregate, ties to declared order.
inline std::optional<Assignment> choose_habitat(std::span<const Candidate> candidates, AssignmentPolicy policy) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (!candidates[i].passes)
            continue;
        if (policy == AssignmentPolicy::FirstFit) {
            best = i;
            break;
        }
        if (!best || candidates[i].score < candidates[*best].score)
            best = i;
    }
    if (!best)
        return std::nullopt;
    return Assignment{*best, candidates[*best].delta, candidates[*best].score};
}

inline std::optional<Assignment> assign_species(const BandMoments& species, std::span<const Habitat> habitats,
                                                const ClassifierConfig& config) {
    if (habitats.empty())
        throw Error("no feature habitats");
    const auto candidates = trial_migrations(species, habitats, config);
    return choose_habitat(candidates, config.policy);
}

inline std::optional<Assignment> assign_species(const Species& species, std::span<const Habitat> habitats,
                                                const ClassifierConfig& config, const MultibandImage& image) {
    return assign_species(BandMoments::of(image, species.pixels), habitats, config);
}

// Linear immigration/emigration curves with both maxima equal to n.
struct MigrationRates {
    std::size_t species_count = 0;
    double max_immigration = 0.0;
    double max_emigration = 0.0;
    std::vector<double> immigration;  // lambda_k, k = 0..n
    std::vector<double> emigration;   // mu_k, k = 0..n
};

inline MigrationRates migration_rates(std::size_t n) {
    MigrationRates r;
    r.species_count = n;
    r.max_immigration = r.max_emigration = static_cast<double>(n);
    if (n == 0)
        return r;
    const double rate = static_cast<double>(n);
    for (std::size_t k = 0; k <= n; ++k) {
        const double frac = static_cast<double>(k) / rate;
        r.immigration.push_back(rate * (1.0 - frac));
        r.emigration.push_back(rate * frac);
    }
    return r;
}

struct TrainingClass {
    std::string label;
    std::vector<DnVector> vectors;
};

struct IterationStats {
    std::size_t iteration = 0;  // 1-based
    std::size_t species_processed = 0;
    std::size_t species_absorbed = 0;
    std::size_t species_rejected = 0;
    std::size_t species_saturated = 0;  // saturated species left after the pass
    std::size_t unclassified_pixels = 0;
    double max_migration_rate = 0.0;    // E = I = species at pass start
};

enum class StopReason { UniversalEmpty, MaxIterations, OnlySaturated };

inline const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::UniversalEmpty: return "universal-habitat-empty";
        case StopReason::MaxIterations: return "max-iterations";
        case StopReason::OnlySaturated: return "only-saturated-species";
    }
    return "?";
}

struct ClassificationResult {
    LabelMap label_map;
    std::vector<PixelIndex> unclassified;
    std::vector<IterationStats> per_iteration;
    std::vector<Habitat> habitats;
    DiscretizationScheme initial_scheme;
    StopReason stop_reason = StopReason::MaxIterations;
};

// State visible to an observer right after each absorption. `pending` is the
// rest of the current pass, `queued` what has been set aside for the next.
struct AbsorptionEvent {
    std::size_t iteration;
    const Species& species;
    const Assignment& assignment;
    std::span<const Candidate> candidates;
    std::span<const Habitat> habitats;
    std::span<const Species> pending;
    std::span<const Species> queued;
};

struct NoObserver {
    void operator()(const AbsorptionEvent&) const noexcept {}
};

// Supervised classification by species migration from a universal habitat
// into one feature habitat per class.
//
// All pixels are granulated into species by interval discretization. Each
// pass takes the species largest first and trial-migrates each into every
// feature habitat; a species is absorbed when its HSI delta stays within the
// threshold on every band, and habitat statistics update immediately. A
// species rejected everywhere is re-discretized at double resolution and its
// parts wait for the next pass. Species that cannot be split further are
// retried as habitats evolve and end unclassified if never absorbed.
template <class Observer = NoObserver>
ClassificationResult classify(const MultibandImage& image, std::span<const TrainingClass> training,
                              const ClassifierConfig& config, Observer&& observer = {}) {
    config.validate();
    if (training.empty())
        throw Error("at least one training class required");
    const BandMask mask = resolve_hsi_mask(image, config);
    const auto disc_bands = resolve_bands(image, config.discretization_bands);

    std::vector<Habitat> habitats;
    std::vector<std::string> class_names;
    for (const auto& t : training) {
        if (std::find(class_names.begin(), class_names.end(), t.label) != class_names.end())
            throw Error("class '" + t.label + "' declared twice");
        if (t.vectors.empty())
            throw Error("class '" + t.label + "' has no training vectors");
        for (const auto& v : t.vectors)
            if (v.size() != image.band_count())
                throw Error("training vector for class '" + t.label + "' has " + std::to_string(v.size()) +
                            " bands, image has " + std::to_string(image.band_count()));
        class_names.push_back(t.label);
        habitats.emplace_back(t.label, t.vectors, mask, config.convention);
    }

    std::vector<PixelIndex> pool(image.pixel_count());
    std::iota(pool.begin(), pool.end(), PixelIndex{0});
    SpeciesIds ids;
    auto initial = std::make_shared<const DiscretizationScheme>(
        observed_range_scheme(image, disc_bands, pool, config.initial_intervals, 0));

    // Universal habitat, with the scheme that created each species.
    using SchemePtr = std::shared_ptr<const DiscretizationScheme>;
    std::vector<Species> universal = form_species(image, *initial, pool, ids);
    std::vector<SchemePtr> schemes(universal.size(), initial);

    LabelMap labels(image.width(), image.height(), class_names);
    std::vector<IterationStats> stats;
    StopReason stop = StopReason::MaxIterations;

    for (std::size_t iteration = 1; iteration <= config.max_iterations; ++iteration) {
        if (universal.empty()) {
            stop = StopReason::UniversalEmpty;
            break;
        }
        IterationStats it;
        it.iteration = iteration;
        it.max_migration_rate = migration_rates(universal.size()).max_immigration;

        std::vector<Species> next;
        std::vector<SchemePtr> next_schemes;
        for (std::size_t i = 0; i < universal.size(); ++i) {
            const Species& sp = universal[i];
            ++it.species_processed;
            const BandMoments m = BandMoments::of(image, sp.pixels);
            const auto candidates = trial_migrations(m, habitats, config);
            if (auto a = choose_habitat(candidates, config.policy)) {
                habitats[a->habitat].absorb(sp, m);
                for (PixelIndex p : sp.pixels)
                    labels.set(p, static_cast<LabelMap::Label>(a->habitat));
                ++it.species_absorbed;
                observer(AbsorptionEvent{iteration, sp, *a, candidates, habitats,
                                         std::span<const Species>(universal).subspan(i + 1), next});
                continue;
            }
            ++it.species_rejected;
            if (sp.saturated) {
                next.push_back(sp);
                next_schemes.push_back(schemes[i]);
                continue;
            }
            Refinement r = refine(sp, image, *schemes[i], ids);
            auto child = r.saturated ? schemes[i] : std::make_shared<const DiscretizationScheme>(std::move(r.scheme));
            for (auto& s : r.species) {
                if (s.pixels.empty())
                    continue;
                next.push_back(std::move(s));
                next_schemes.push_back(child);
            }
        }

        // Largest first across the whole next pass; stable keeps creation order.
        std::vector<std::size_t> order(next.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return next[a].size() > next[b].size(); });
        universal.clear();
        schemes.clear();
        for (std::size_t k : order) {
            universal.push_back(std::move(next[k]));
            schemes.push_back(std::move(next_schemes[k]));
        }

        for (const auto& s : universal) {
            it.unclassified_pixels += s.size();
            it.species_saturated += s.saturated ? 1 : 0;
        }
        stats.push_back(it);

        if (universal.empty()) {
            stop = StopReason::UniversalEmpty;
            break;
        }
        // Nothing changed this pass and nothing can split: further passes repeat.
        if (it.species_absorbed == 0 && it.species_saturated == universal.size()) {
            stop = StopReason::OnlySaturated;
            break;
        }
    }

    std::vector<PixelIndex> unclassified;
    for (const auto& s : universal)
        unclassified.insert(unclassified.end(), s.pixels.begin(), s.pixels.end());
    std::sort(unclassified.begin(), unclassified.end());

    return {std::move(labels), std::move(unclassified), std::move(stats), std::move(habitats), *initial, stop};
}

template <class Observer = NoObserver>
ClassificationResult classify(const MultibandImage& image, const std::vector<TrainingClass>& training,
                              const ClassifierConfig& config, Observer&& observer = {}) {
    return classify(image, std::span<const TrainingClass>(training), config, std::forward<Observer>(observer));
}

}  // namespace biogeo
