#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include "biogeo/error.hpp"
#include "biogeo/random.hpp"

namespace biogeo::bbo {

// Canonical biogeography-based optimization over a bounded real domain.
// Habitats share SIVs: an immigrating habitat copies features from
// emigrating ones, which keep them. Cost is minimized, so a low cost plays
// the role of a high HSI.

struct Bounds {
    double lo = 0.0;
    double hi = 0.0;
};

struct Params {
    std::size_t population = 50;
    std::size_t generations = 100;
    double max_immigration = 1.0;  // I
    double max_emigration = 1.0;   // E
    double mutation_probability = 0.0;
    std::size_t elites = 0;
    std::vector<Bounds> bounds;  // one per dimension
    std::uint64_t seed = 0;

    void validate() const {
        if (population < 2)
            throw Error("population must be at least 2");
        if (!(max_immigration > 0.0) || !(max_emigration > 0.0))
            throw Error("maximum migration rates must be positive");
        if (!(mutation_probability >= 0.0 && mutation_probability <= 1.0))
            throw Error("mutation probability must lie in [0,1]");
        if (elites >= population)
            throw Error("elite count must be below population size");
        if (bounds.empty())
            throw Error("problem needs at least one dimension");
        for (const auto& b : bounds)
            if (!(b.lo < b.hi) || !std::isfinite(b.lo) || !std::isfinite(b.hi))
                throw Error("each dimension needs finite bounds lo < hi");
    }
};

struct Habitat {
    std::vector<double> siv;
    double cost = 0.0;
};

struct Rates {
    double immigration = 0.0;  // lambda
    double emigration = 0.0;   // mu
};

// Linear curves over rank 0 (best) .. n-1 (worst): the best emigrates at E
// and never immigrates, the worst immigrates at I and never emigrates.
inline std::vector<Rates> rank_rates(const Params& params, std::size_t n) {
    std::vector<Rates> r(n);
    if (n == 1) {
        r[0] = {0.0, params.max_emigration};
        return r;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double frac = static_cast<double>(i) / static_cast<double>(n - 1);
        r[i] = {params.max_immigration * frac, params.max_emigration * (1.0 - frac)};
    }
    return r;
}

inline void rank(std::vector<Habitat>& population) {
    std::stable_sort(population.begin(), population.end(),
                     [](const Habitat& a, const Habitat& b) { return a.cost < b.cost; });
}

// Roulette-wheel pick proportional to weight, skipping `exclude`. Returns
// weights.size() when every other weight is zero.
inline std::size_t roulette(const std::vector<double>& weights, std::size_t exclude, Random& rng) {
    double total = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j)
        if (j != exclude)
            total += weights[j];
    if (!(total > 0.0))
        return weights.size();
    double pick = rng.uniform() * total;
    std::size_t last = weights.size();
    for (std::size_t j = 0; j < weights.size(); ++j) {
        if (j == exclude || weights[j] <= 0.0)
            continue;
        last = j;
        if (pick < weights[j])
            return j;
        pick -= weights[j];
    }
    return last;
}

// One migration step over a population ranked best first. Non-elite
// habitats immigrate with probability lambda; each of their SIVs is then
// replaced with probability lambda by the same SIV of a roulette-selected
// emigrant from the pre-migration population.
inline std::vector<Habitat> migrate_generation(const std::vector<Habitat>& ranked, const std::vector<Rates>& rates,
                                               const Params& params, Random& rng) {
    if (rates.size() != ranked.size())
        throw Error("one rate pair per habitat required");
    std::vector<double> mu(rates.size());
    std::transform(rates.begin(), rates.end(), mu.begin(), [](const Rates& r) { return r.emigration; });
    std::vector<Habitat> next = ranked;
    for (std::size_t k = params.elites; k < ranked.size(); ++k) {
        const double lambda = rates[k].immigration;
        if (!(rng.uniform() < lambda))
            continue;
        for (std::size_t d = 0; d < next[k].siv.size(); ++d) {
            if (!(rng.uniform() < lambda))
                continue;
            const std::size_t source = roulette(mu, k, rng);
            if (source < ranked.size())
                next[k].siv[d] = ranked[source].siv[d];
        }
    }
    return next;
}

inline std::vector<Habitat> migrate_generation(const std::vector<Habitat>& ranked, const Params& params,
                                               Random& rng) {
    return migrate_generation(ranked, rank_rates(params, ranked.size()), params, rng);
}

// Uniform resampling within bounds, elites exempt.
inline void mutate(std::vector<Habitat>& population, const Params& params, Random& rng) {
    if (params.mutation_probability <= 0.0)
        return;
    for (std::size_t k = params.elites; k < population.size(); ++k)
        for (std::size_t d = 0; d < population[k].siv.size(); ++d)
            if (rng.uniform() < params.mutation_probability)
                population[k].siv[d] = rng.uniform(params.bounds[d].lo, params.bounds[d].hi);
}

struct GenerationStats {
    std::size_t generation = 0;
    double best_cost = 0.0;
    double mean_cost = 0.0;
};

struct Result {
    Habitat best;                        // best seen in any generation
    std::vector<GenerationStats> trace;  // generation 0 is the initial population
};

template <class Cost>
Result optimize(Cost&& cost, const Params& params) {
    params.validate();
    Random rng(params.seed);
    const std::size_t dim = params.bounds.size();

    std::vector<Habitat> population(params.population);
    for (auto& h : population) {
        h.siv.resize(dim);
        for (std::size_t d = 0; d < dim; ++d)
            h.siv[d] = rng.uniform(params.bounds[d].lo, params.bounds[d].hi);
    }
    auto evaluate = [&](std::vector<Habitat>& pop) {
        for (auto& h : pop) {
            h.cost = cost(static_cast<const std::vector<double>&>(h.siv));
            if (!std::isfinite(h.cost))
                throw Error("cost function returned a non-finite value");
        }
        rank(pop);
    };
    auto record = [&](std::size_t g) {
        const double sum = std::accumulate(population.begin(), population.end(), 0.0,
                                           [](double s, const Habitat& h) { return s + h.cost; });
        return GenerationStats{g, population.front().cost, sum / static_cast<double>(population.size())};
    };

    evaluate(population);
    Result result;
    result.trace.push_back(record(0));
    result.best = population.front();
    for (std::size_t g = 1; g <= params.generations; ++g) {
        population = migrate_generation(population, params, rng);
        mutate(population, params, rng);
        evaluate(population);
        result.trace.push_back(record(g));
        if (population.front().cost < result.best.cost)
            result.best = population.front();
    }
    return result;
}

inline double sphere(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x)
        s += v * v;
    return s;
}

}  // namespace biogeo::bbo
