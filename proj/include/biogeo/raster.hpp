#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "biogeo/error.hpp"

namespace biogeo {

// Digital number: one 8-bit band sample.
using Dn = std::uint8_t;
// Row-major pixel index, y * width + x.
using PixelIndex = std::uint32_t;
// One pixel across all bands, in band order.
using DnVector = std::vector<Dn>;

// W x H raster of N co-registered 8-bit bands. Each band is one
// suitability index variable of a habitat.
class MultibandImage {
public:
    MultibandImage(std::size_t width, std::size_t height, std::vector<std::string> band_names,
                   std::vector<std::vector<Dn>> bands)
        : width_(width), height_(height), band_names_(std::move(band_names)), bands_(std::move(bands)) {
        if (width_ == 0 || height_ == 0)
            throw Error("image dimensions must be positive");
        if (width_ * height_ > UINT32_MAX)
            throw Error("image too large");
        if (band_names_.empty())
            throw Error("image needs at least one band");
        if (band_names_.size() != bands_.size())
            throw Error("band name count does not match band count");
        std::set<std::string> seen;
        for (const auto& name : band_names_) {
            if (name.empty())
                throw Error("empty band name");
            if (!seen.insert(name).second)
                throw Error("duplicate band name '" + name + "'");
        }
        for (std::size_t b = 0; b < bands_.size(); ++b)
            if (bands_[b].size() != width_ * height_)
                throw Error("band '" + band_names_[b] + "' has " + std::to_string(bands_[b].size()) +
                            " values, expected " + std::to_string(width_ * height_));
    }

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t pixel_count() const noexcept { return width_ * height_; }
    std::size_t band_count() const noexcept { return bands_.size(); }
    const std::vector<std::string>& band_names() const noexcept { return band_names_; }

    std::span<const Dn> band(std::size_t b) const { return bands_.at(b); }

    Dn value(std::size_t b, PixelIndex p) const { return bands_[b][p]; }

    std::optional<std::size_t> band_index(const std::string& name) const {
        auto it = std::find(band_names_.begin(), band_names_.end(), name);
        if (it == band_names_.end())
            return std::nullopt;
        return static_cast<std::size_t>(it - band_names_.begin());
    }

    PixelIndex index_of(std::size_t x, std::size_t y) const {
        if (x >= width_ || y >= height_)
            throw Error("pixel (" + std::to_string(x) + ", " + std::to_string(y) + ") outside " +
                        std::to_string(width_) + "x" + std::to_string(height_) + " image");
        return static_cast<PixelIndex>(y * width_ + x);
    }

    DnVector pixel_vector(PixelIndex p) const {
        if (p >= pixel_count())
            throw Error("pixel index " + std::to_string(p) + " out of range");
        DnVector v(bands_.size());
        for (std::size_t b = 0; b < bands_.size(); ++b)
            v[b] = bands_[b][p];
        return v;
    }

    DnVector pixel_vector(std::size_t x, std::size_t y) const { return pixel_vector(index_of(x, y)); }

    friend bool operator==(const MultibandImage&, const MultibandImage&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<std::string> band_names_;
    std::vector<std::vector<Dn>> bands_;
};

// Per-pixel class index into class_names, or kUnclassified.
class LabelMap {
public:
    using Label = std::int32_t;
    static constexpr Label kUnclassified = -1;

    LabelMap(std::size_t width, std::size_t height, std::vector<std::string> class_names)
        : LabelMap(width, height, std::move(class_names),
                   std::vector<Label>(width * height, kUnclassified)) {}

    LabelMap(std::size_t width, std::size_t height, std::vector<std::string> class_names,
             std::vector<Label> labels)
        : width_(width), height_(height), class_names_(std::move(class_names)), labels_(std::move(labels)) {
        if (width_ == 0 || height_ == 0)
            throw Error("label map dimensions must be positive");
        if (labels_.size() != width_ * height_)
            throw Error("label count does not match dimensions");
        std::set<std::string> seen;
        for (const auto& name : class_names_)
            if (name.empty() || !seen.insert(name).second)
                throw Error("class names must be unique and non-empty");
        for (Label l : labels_)
            check_label(l);
    }

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t pixel_count() const noexcept { return labels_.size(); }
    const std::vector<std::string>& class_names() const noexcept { return class_names_; }
    std::span<const Label> labels() const noexcept { return labels_; }

    Label at(PixelIndex p) const { return labels_.at(p); }
    Label at(std::size_t x, std::size_t y) const { return labels_.at(y * width_ + x); }

    void set(PixelIndex p, Label l) {
        check_label(l);
        labels_.at(p) = l;
    }

    std::optional<Label> class_index(const std::string& name) const {
        auto it = std::find(class_names_.begin(), class_names_.end(), name);
        if (it == class_names_.end())
            return std::nullopt;
        return static_cast<Label>(it - class_names_.begin());
    }

    std::size_t unclassified_count() const {
        return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), kUnclassified));
    }

    friend bool operator==(const LabelMap&, const LabelMap&) = default;

private:
    void check_label(Label l) const {
        if (l != kUnclassified && (l < 0 || static_cast<std::size_t>(l) >= class_names_.size()))
            throw Error("label " + std::to_string(l) + " not in class set");
    }

    std::size_t width_;
    std::size_t height_;
    std::vector<std::string> class_names_;
    std::vector<Label> labels_;
};

}  // namespace biogeo
