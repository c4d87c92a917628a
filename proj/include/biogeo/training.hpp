#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "biogeo/classifier.hpp"
#include "biogeo/error.hpp"
#include "biogeo/random.hpp"
#include "biogeo/raster.hpp"
#include "biogeo/raster_io.hpp"

namespace biogeo {

inline constexpr const char* kDecisionColumn = "DECISION";

// Training pixels as CSV: a header of band names followed by DECISION, then
// one pixel per row. Classes keep their order of first appearance.
inline std::vector<TrainingClass> read_training_csv(std::istream& in, std::span<const std::string> band_names,
                                                    const std::string& source = "<training>") {
    std::string line;
    if (!std::getline(in, line))
        throw ParseError(source, 1, "missing header");
    const auto header = detail::split_csv(line);
    if (header.size() != band_names.size() + 1 || header.back() != kDecisionColumn ||
        !std::equal(band_names.begin(), band_names.end(), header.begin()))
        throw ParseError(source, 1, "header must list the image bands in order followed by DECISION");

    std::vector<TrainingClass> classes;
    for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
        if (detail::trim(line).empty())
            continue;
        const auto cells = detail::split_csv(line);
        if (cells.size() != header.size())
            throw ParseError(source, line_no,
                             "expected " + std::to_string(header.size()) + " columns, got " + std::to_string(cells.size()));
        DnVector v(band_names.size());
        for (std::size_t b = 0; b < v.size(); ++b) {
            int dn = 0;
            if (!detail::parse_int(cells[b], dn) || dn < 0 || dn > 255)
                throw ParseError(source, line_no, "'" + cells[b] + "' is not a DN in 0..255");
            v[b] = static_cast<Dn>(dn);
        }
        const std::string& label = cells.back();
        if (label.empty())
            throw ParseError(source, line_no, "empty DECISION label");
        auto it = std::find_if(classes.begin(), classes.end(), [&](const TrainingClass& c) { return c.label == label; });
        if (it == classes.end()) {
            classes.push_back({label, {}});
            it = classes.end() - 1;
        }
        it->vectors.push_back(std::move(v));
    }
    return classes;
}

inline std::vector<TrainingClass> read_training_csv(const std::string& path, std::span<const std::string> band_names) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open training file '" + path + "'");
    return read_training_csv(in, band_names, path);
}

// Reorders classes to the configured list; throws naming any configured
// class with no training rows or any training class not configured.
inline std::vector<TrainingClass> select_classes(std::vector<TrainingClass> training,
                                                 std::span<const std::string> configured) {
    std::vector<TrainingClass> out;
    for (const auto& name : configured) {
        auto it = std::find_if(training.begin(), training.end(), [&](const TrainingClass& c) { return c.label == name; });
        if (it == training.end())
            throw Error("training data has no pixels for class '" + name + "'");
        out.push_back(std::move(*it));
        training.erase(it);
    }
    if (!training.empty())
        throw Error("training data has class '" + training.front().label + "' which is not configured");
    return out;
}

inline void write_training_csv(std::ostream& out, std::span<const std::string> band_names,
                               std::span<const TrainingClass> training) {
    for (const auto& n : band_names)
        out << n << ',';
    out << kDecisionColumn << '\n';
    for (const auto& c : training)
        for (const auto& v : c.vectors) {
            for (Dn dn : v)
                out << int{dn} << ',';
            out << c.label << '\n';
        }
}

inline void write_training_csv(const std::string& path, std::span<const std::string> band_names,
                               std::span<const TrainingClass> training) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw Error("cannot write '" + path + "'");
    write_training_csv(out, band_names, training);
    if (!out)
        throw Error("failed writing '" + path + "'");
}

// Draws per_class distinct pixels (fewer if the class is smaller) from each
// class's ground-truth region, in truth class order.
inline std::vector<TrainingClass> sample_training(const MultibandImage& image, const LabelMap& truth,
                                                  std::size_t per_class, std::uint64_t seed) {
    if (truth.width() != image.width() || truth.height() != image.height())
        throw Error("truth map does not match image dimensions");
    Random rng(seed);
    std::vector<TrainingClass> out;
    for (std::size_t c = 0; c < truth.class_names().size(); ++c) {
        std::vector<PixelIndex> members;
        for (PixelIndex p = 0; p < truth.pixel_count(); ++p)
            if (truth.at(p) == static_cast<LabelMap::Label>(c))
                members.push_back(p);
        const std::size_t take = std::min(per_class, members.size());
        // Partial Fisher-Yates.
        for (std::size_t i = 0; i < take; ++i)
            std::swap(members[i], members[i + rng.index(members.size() - i)]);
        TrainingClass t{truth.class_names()[c], {}};
        for (std::size_t i = 0; i < take; ++i)
            t.vectors.push_back(image.pixel_vector(members[i]));
        if (!t.vectors.empty())
            out.push_back(std::move(t));
    }
    return out;
}

}  // namespace biogeo
