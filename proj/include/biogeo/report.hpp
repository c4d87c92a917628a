#pragma once

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "biogeo/accuracy.hpp"
#include "biogeo/classifier.hpp"
#include "biogeo/raster.hpp"

namespace biogeo {

inline const char* to_string(AssignmentPolicy p) { return p == AssignmentPolicy::BestFit ? "best-fit" : "first-fit"; }
inline const char* to_string(Aggregate a) { return a == Aggregate::MeanAbs ? "mean-abs" : "max-abs"; }
inline const char* to_string(StddevConvention c) { return c == StddevConvention::Sample ? "sample" : "population"; }

namespace detail {

inline std::string join(const std::vector<std::string>& v, const char* sep = ",") {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out += (i ? sep : "") + v[i];
    return out;
}

inline std::string fixed(double v, int digits = 6) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

}  // namespace detail

// Plain structured text: `[section]` headers, `key = value` lines and CSV
// tables. Contains nothing run-dependent beyond the inputs, so identical runs
// produce identical bytes.
inline void write_report(std::ostream& out, const MultibandImage& image, const ClassifierConfig& config,
                         const ClassificationResult& result) {
    const auto& bands = image.band_names();
    out << "# biogeo classification report\n\n[config]\n";
    out << "threshold = " << detail::fixed(config.threshold) << '\n';
    out << "hsi_bands = " << (config.hsi_bands.empty() ? detail::join(bands) : detail::join(config.hsi_bands)) << '\n';
    out << "discretization_bands = " << detail::join(config.discretization_bands) << '\n';
    out << "initial_intervals = " << config.initial_intervals << '\n';
    out << "max_iterations = " << config.max_iterations << '\n';
    out << "policy = " << to_string(config.policy) << '\n';
    out << "aggregate = " << to_string(config.aggregate) << '\n';
    out << "stddev = " << to_string(config.convention) << '\n';
    out << "seed = " << config.seed << '\n';

    out << "\n[image]\nwidth = " << image.width() << "\nheight = " << image.height()
        << "\nbands = " << detail::join(bands) << '\n';

    const auto& scheme = result.initial_scheme;
    out << "\n[initial_scheme]\ndepth = " << scheme.depth << "\nintervals = " << scheme.intervals << '\n';
    for (std::size_t i = 0; i < scheme.bands.size(); ++i) {
        out << "cuts." << bands[scheme.bands[i]] << " = [";
        for (std::size_t c = 0; c < scheme.cuts[i].size(); ++c)
            out << (c ? ", " : "") << detail::fixed(scheme.cuts[i][c], 4);
        out << "]\n";
    }

    out << "\n[iterations]\niteration,species_processed,species_absorbed,species_rejected,species_saturated,"
           "unclassified_pixels,max_migration_rate\n";
    for (const auto& it : result.per_iteration)
        out << it.iteration << ',' << it.species_processed << ',' << it.species_absorbed << ',' << it.species_rejected
            << ',' << it.species_saturated << ',' << it.unclassified_pixels << ','
            << detail::fixed(it.max_migration_rate, 1) << '\n';

    out << "\n[habitats]\nclass,training_pixels,absorbed_pixels";
    for (const auto& b : bands)
        out << ",hsi." << b;
    for (const auto& b : bands)
        out << ",mean." << b;
    out << '\n';
    for (const auto& h : result.habitats) {
        out << h.label() << ',' << h.training_vectors().size() << ',' << h.absorbed_pixels().size();
        for (double v : h.hsi())
            out << ',' << detail::fixed(v, 4);
        for (std::size_t b = 0; b < bands.size(); ++b)
            out << ',' << detail::fixed(h.moments().mean(b), 4);
        out << '\n';
    }

    out << "\n[result]\nclassified_pixels = " << image.pixel_count() - result.unclassified.size()
        << "\nunclassified_pixels = " << result.unclassified.size()
        << "\niterations_run = " << result.per_iteration.size() << "\nstop_reason = " << to_string(result.stop_reason)
        << '\n';
}

// Error matrix with marginal totals, kappa to four decimals, overall and
// per-class accuracies.
inline void write_accuracy(std::ostream& out, const ErrorMatrix& m) {
    std::size_t w = 5;
    for (const auto& c : m.classes())
        w = std::max(w, c.size());
    w += 2;
    out << std::left << std::setw(static_cast<int>(w)) << "pred\\ref";
    for (const auto& c : m.classes())
        out << std::right << std::setw(static_cast<int>(w)) << c;
    out << std::setw(static_cast<int>(w)) << "Total" << '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
        out << std::left << std::setw(static_cast<int>(w)) << m.classes()[i] << std::right;
        for (std::size_t j = 0; j < m.size(); ++j)
            out << std::setw(static_cast<int>(w)) << m.at(i, j);
        out << std::setw(static_cast<int>(w)) << m.row_total(i) << '\n';
    }
    out << std::left << std::setw(static_cast<int>(w)) << "Total" << std::right;
    for (std::size_t j = 0; j < m.size(); ++j)
        out << std::setw(static_cast<int>(w)) << m.column_total(j);
    out << std::setw(static_cast<int>(w)) << m.total() << '\n' << std::left;

    out << "\nN = " << m.total() << '\n';
    out << "excluded_unclassified = " << m.excluded_unclassified << '\n';
    try {
        out << "kappa = " << detail::fixed(kappa(m), 4) << '\n';
    } catch (const UndefinedKappa&) {
        out << "kappa = undefined\n";
    }
    out << "overall_accuracy = " << detail::fixed(overall_accuracy(m), 4) << '\n';
    out << "\nclass,producer_accuracy,user_accuracy\n";
    for (const auto& a : producer_user_accuracy(m))
        out << a.label << ',' << (a.producer ? detail::fixed(*a.producer, 4) : "undefined") << ','
            << (a.user ? detail::fixed(*a.user, 4) : "undefined") << '\n';
}

}  // namespace biogeo
