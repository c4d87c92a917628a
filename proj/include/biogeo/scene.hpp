#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "biogeo/error.hpp"
#include "biogeo/random.hpp"
#include "biogeo/raster.hpp"

namespace biogeo {

// Gaussian spectral model of one land-cover class.
struct SceneClass {
    std::string label;
    std::vector<double> mean;    // per band, DN
    std::vector<double> stddev;  // per band, DN
};

// Axis-aligned rectangle of ground truth.
struct Patch {
    std::size_t class_index = 0;
    std::size_t x = 0, y = 0, width = 0, height = 0;
};

struct SceneSpec {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::string> band_names;
    std::vector<SceneClass> classes;
    std::vector<Patch> patches;
    std::uint64_t seed = 0;

    // Throws unless dimensions are positive, class statistics are in range and
    // the patches tile the image exactly once.
    void validate() const {
        if (width == 0 || height == 0)
            throw Error("scene width and height must be positive");
        if (band_names.empty())
            throw Error("scene needs at least one band");
        if (classes.empty())
            throw Error("scene needs at least one class");
        for (const auto& c : classes) {
            if (c.mean.size() != band_names.size() || c.stddev.size() != band_names.size())
                throw Error("class '" + c.label + "' must give one mean and stddev per band");
            for (double m : c.mean)
                if (!(m >= 0.0 && m <= 255.0))
                    throw Error("class '" + c.label + "' mean outside [0,255]");
            for (double s : c.stddev)
                if (!(s >= 0.0) || !std::isfinite(s))
                    throw Error("class '" + c.label + "' stddev must be >= 0");
        }
        std::vector<std::uint8_t> cover(width * height, 0);
        for (const auto& p : patches) {
            if (p.class_index >= classes.size())
                throw Error("patch references unknown class");
            if (p.width == 0 || p.height == 0 || p.x + p.width > width || p.y + p.height > height)
                throw Error("patch at (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ") leaves the image");
            for (std::size_t y = p.y; y < p.y + p.height; ++y)
                for (std::size_t x = p.x; x < p.x + p.width; ++x)
                    if (cover[y * width + x]++)
                        throw Error("patches overlap at (" + std::to_string(x) + ", " + std::to_string(y) + ")");
        }
        if (std::find(cover.begin(), cover.end(), 0) != cover.end())
            throw Error("patches do not cover the whole image");
    }
};

// One vertical strip per class, left to right; the last strip absorbs the
// remainder.
inline std::vector<Patch> strip_layout(std::size_t width, std::size_t height, std::size_t class_count) {
    if (class_count == 0 || width < class_count)
        throw Error("image too narrow for one strip per class");
    std::vector<Patch> patches;
    const std::size_t w = width / class_count;
    for (std::size_t c = 0; c < class_count; ++c) {
        const std::size_t x = c * w;
        patches.push_back({c, x, 0, c + 1 == class_count ? width - x : w, height});
    }
    return patches;
}

struct Scene {
    MultibandImage image;
    LabelMap truth;
};

// Draws every pixel, row-major then band order, from its class's normal
// model; rounds half away from zero and clips to [0,255].
inline Scene synth_scene(const SceneSpec& spec) {
    spec.validate();
    const std::size_t n = spec.width * spec.height;
    std::vector<LabelMap::Label> truth(n);
    for (const auto& p : spec.patches)
        for (std::size_t y = p.y; y < p.y + p.height; ++y)
            for (std::size_t x = p.x; x < p.x + p.width; ++x)
                truth[y * spec.width + x] = static_cast<LabelMap::Label>(p.class_index);

    Random rng(spec.seed);
    std::vector<std::vector<Dn>> bands(spec.band_names.size(), std::vector<Dn>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto& cls = spec.classes[static_cast<std::size_t>(truth[i])];
        for (std::size_t b = 0; b < bands.size(); ++b) {
            const double v = std::round(rng.normal(cls.mean[b], cls.stddev[b]));
            bands[b][i] = static_cast<Dn>(std::clamp(v, 0.0, 255.0));
        }
    }
    std::vector<std::string> names;
    for (const auto& c : spec.classes)
        names.push_back(c.label);
    return {MultibandImage(spec.width, spec.height, spec.band_names, std::move(bands)),
            LabelMap(spec.width, spec.height, std::move(names), std::move(truth))};
}

// JSON scene file:
//   {"width": 128, "height": 128, "seed": 42,
//    "bands": ["RED", ...],
//    "classes": [{"label": "water", "mean": [...], "stddev": [...]}, ...],
//    "patches": [{"class": "water", "x": 0, "y": 0, "width": 64, "height": 64}, ...]}
// width/height/seed may be omitted (callers supply them); missing patches
// select strip_layout at validation time via finalize_scene_spec.
inline SceneSpec parse_scene_spec(const nlohmann::json& j) {
    SceneSpec spec;
    try {
        spec.width = j.value("width", std::size_t{0});
        spec.height = j.value("height", std::size_t{0});
        spec.seed = j.value("seed", std::uint64_t{0});
        spec.band_names = j.at("bands").get<std::vector<std::string>>();
        for (const auto& c : j.at("classes")) {
            SceneClass cls{c.at("label").get<std::string>(), c.at("mean").get<std::vector<double>>(),
                           c.at("stddev").get<std::vector<double>>()};
            spec.classes.push_back(std::move(cls));
        }
        if (j.contains("patches")) {
            for (const auto& p : j.at("patches")) {
                const auto label = p.at("class").get<std::string>();
                auto it = std::find_if(spec.classes.begin(), spec.classes.end(),
                                       [&](const SceneClass& c) { return c.label == label; });
                if (it == spec.classes.end())
                    throw Error("patch references unknown class '" + label + "'");
                spec.patches.push_back({static_cast<std::size_t>(it - spec.classes.begin()),
                                        p.at("x").get<std::size_t>(), p.at("y").get<std::size_t>(),
                                        p.at("width").get<std::size_t>(), p.at("height").get<std::size_t>()});
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("invalid scene spec: ") + e.what());
    }
    return spec;
}

inline SceneSpec load_scene_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open scene spec '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(path + ": " + e.what());
    }
    return parse_scene_spec(j);
}

inline void finalize_scene_spec(SceneSpec& spec) {
    if (spec.patches.empty() && spec.width > 0 && spec.height > 0)
        spec.patches = strip_layout(spec.width, spec.height, spec.classes.size());
    spec.validate();
}

}  // namespace biogeo
