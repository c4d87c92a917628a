#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "biogeo/error.hpp"
#include "biogeo/netpbm.hpp"
#include "biogeo/raster.hpp"

namespace biogeo {

namespace detail {

inline std::string trim(std::string_view s) {
    auto b = s.begin();
    auto e = s.end();
    while (b != e && std::isspace(static_cast<unsigned char>(*b)))
        ++b;
    while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1))))
        --e;
    return std::string(b, e);
}

inline std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string t;
    while (ss >> t)
        out.push_back(t);
    return out;
}

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

template <class Int>
bool parse_int(const std::string& s, Int& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ','))
        out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

}  // namespace detail

// One `NAME = relative/path.pgm` line of a band manifest.
struct ManifestEntry {
    std::string band;
    std::string path;
};

inline std::vector<ManifestEntry> parse_manifest(std::istream& in, const std::string& source) {
    std::vector<ManifestEntry> entries;
    std::set<std::string> seen;
    std::string raw;
    for (std::size_t line_no = 1; std::getline(in, raw); ++line_no) {
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        const std::string line = detail::trim(raw);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(source, line_no, "expected 'NAME = path'");
        ManifestEntry e{detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1))};
        if (e.band.empty() || e.path.empty())
            throw ParseError(source, line_no, "expected 'NAME = path'");
        if (!seen.insert(e.band).second)
            throw ParseError(source, line_no, "duplicate band name '" + e.band + "'");
        entries.push_back(std::move(e));
    }
    if (entries.empty())
        throw ParseError(source, 1, "manifest lists no bands");
    return entries;
}

// Loads every band listed in the manifest; paths resolve relative to the
// manifest's directory.
inline MultibandImage load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open manifest '" + path + "'");
    const auto entries = parse_manifest(in, path);
    const auto dir = std::filesystem::path(path).parent_path();

    std::vector<std::string> names;
    std::vector<std::vector<Dn>> bands;
    std::size_t width = 0, height = 0;
    for (const auto& e : entries) {
        const auto band_path = (dir / e.path).string();
        GrayImage g = read_pgm(band_path);
        if (bands.empty()) {
            width = g.width;
            height = g.height;
        } else if (g.width != width || g.height != height) {
            throw Error("band '" + e.band + "' (" + band_path + ") is " + std::to_string(g.width) + "x" +
                        std::to_string(g.height) + ", expected " + std::to_string(width) + "x" +
                        std::to_string(height));
        }
        names.push_back(e.band);
        bands.push_back(std::move(g.pixels));
    }
    return MultibandImage(width, height, std::move(names), std::move(bands));
}

// Writes one P5 file per band next to the manifest, named `<stem>_<BAND>.pgm`.
inline void save_manifest(const std::string& path, const MultibandImage& image) {
    const std::filesystem::path mpath(path);
    const auto dir = mpath.parent_path();
    const auto stem = mpath.stem().string();
    std::ostringstream manifest;
    manifest << "# band manifest\n";
    for (std::size_t b = 0; b < image.band_count(); ++b) {
        const std::string file = stem + "_" + image.band_names()[b] + ".pgm";
        const auto band = image.band(b);
        write_pgm((dir / file).string(), GrayImage{image.width(), image.height(), {band.begin(), band.end()}});
        manifest << image.band_names()[b] << " = " << file << '\n';
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out || !(out << manifest.str()))
        throw Error("cannot write manifest '" + path + "'");
}

// Label map text format:
//   width height
//   class names in index order, space separated
//   height rows of width integers (class index, -1 = unclassified)
inline void save_label_map(std::ostream& out, const LabelMap& m) {
    for (const auto& n : m.class_names())
        if (std::any_of(n.begin(), n.end(), [](unsigned char c) { return std::isspace(c); }))
            throw Error("class name '" + n + "' contains whitespace");
    out << m.width() << ' ' << m.height() << '\n';
    for (std::size_t i = 0; i < m.class_names().size(); ++i)
        out << (i ? " " : "") << m.class_names()[i];
    out << '\n';
    const auto labels = m.labels();
    for (std::size_t y = 0; y < m.height(); ++y) {
        for (std::size_t x = 0; x < m.width(); ++x)
            out << (x ? " " : "") << labels[y * m.width() + x];
        out << '\n';
    }
}

inline void save_label_map(const std::string& path, const LabelMap& m) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw Error("cannot write '" + path + "'");
    save_label_map(out, m);
    if (!out)
        throw Error("failed writing '" + path + "'");
}

inline LabelMap load_label_map(std::istream& in, const std::string& source = "<labels>") {
    std::string line;
    if (!std::getline(in, line))
        throw ParseError(source, 1, "missing 'width height' line");
    const auto dims = detail::split_ws(line);
    std::size_t width = 0, height = 0;
    if (dims.size() != 2 || !detail::parse_int(dims[0], width) || !detail::parse_int(dims[1], height) ||
        width == 0 || height == 0)
        throw ParseError(source, 1, "expected positive 'width height'");
    if (!std::getline(in, line))
        throw ParseError(source, 2, "missing class name line");
    auto names = detail::split_ws(line);
    std::set<std::string> unique(names.begin(), names.end());
    if (unique.size() != names.size())
        throw ParseError(source, 2, "duplicate class name");

    std::vector<LabelMap::Label> labels;
    labels.reserve(width * height);
    for (std::size_t y = 0; y < height; ++y) {
        const std::size_t line_no = y + 3;
        if (!std::getline(in, line))
            throw ParseError(source, line_no, "expected " + std::to_string(height) + " label rows");
        const auto toks = detail::split_ws(line);
        if (toks.size() != width)
            throw ParseError(source, line_no,
                             "row has " + std::to_string(toks.size()) + " labels, expected " + std::to_string(width));
        for (const auto& t : toks) {
            LabelMap::Label l = 0;
            if (!detail::parse_int(t, l) || l < LabelMap::kUnclassified ||
                (l >= 0 && static_cast<std::size_t>(l) >= names.size()))
                throw ParseError(source, line_no, "unknown label token '" + t + "'");
            labels.push_back(l);
        }
    }
    while (std::getline(in, line))
        if (!detail::trim(line).empty())
            throw ParseError(source, height + 3, "trailing data after label rows");
    return LabelMap(width, height, std::move(names), std::move(labels));
}

inline LabelMap load_label_map(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open '" + path + "'");
    return load_label_map(in, path);
}

// Class name -> colour. Lookup is case-insensitive; the reserved name
// UNCLASSIFIED colours pixels without a label.
class Palette {
public:
    static constexpr const char* kUnclassifiedName = "UNCLASSIFIED";

    void set(const std::string& name, Rgb colour) { colours_[detail::lower(name)] = colour; }

    std::optional<Rgb> find(const std::string& name) const {
        auto it = colours_.find(detail::lower(name));
        if (it == colours_.end())
            return std::nullopt;
        return it->second;
    }

    // Rocky yellow, barren black, water blue, vegetation green, urban red,
    // unclassified white.
    static Palette standard() {
        Palette p;
        p.set("vegetation", {0, 255, 0});
        p.set("urban", {255, 0, 0});
        p.set("rocky", {255, 255, 0});
        p.set("barren", {0, 0, 0});
        p.set("water", {0, 0, 255});
        p.set(kUnclassifiedName, {255, 255, 255});
        return p;
    }

    // `name R G B` per line, `#` comments. Entries are layered over `base`.
    static Palette parse(std::istream& in, const std::string& source, Palette base = standard()) {
        std::string raw;
        for (std::size_t line_no = 1; std::getline(in, raw); ++line_no) {
            if (auto hash = raw.find('#'); hash != std::string::npos)
                raw.erase(hash);
            const auto toks = detail::split_ws(raw);
            if (toks.empty())
                continue;
            int c[3];
            if (toks.size() != 4 || !detail::parse_int(toks[1], c[0]) || !detail::parse_int(toks[2], c[1]) ||
                !detail::parse_int(toks[3], c[2]))
                throw ParseError(source, line_no, "expected 'name R G B'");
            for (int v : c)
                if (v < 0 || v > 255)
                    throw ParseError(source, line_no, "colour component outside 0..255");
            base.set(toks[0], {static_cast<std::uint8_t>(c[0]), static_cast<std::uint8_t>(c[1]),
                               static_cast<std::uint8_t>(c[2])});
        }
        return base;
    }

    static Palette load(const std::string& path) {
        std::ifstream in(path);
        if (!in)
            throw Error("cannot open palette '" + path + "'");
        return parse(in, path);
    }

private:
    std::map<std::string, Rgb> colours_;
};

inline std::vector<Rgb> colourize(const LabelMap& labels, const Palette& palette) {
    std::vector<Rgb> lut;
    for (const auto& name : labels.class_names()) {
        auto c = palette.find(name);
        if (!c)
            throw Error("no palette colour for class '" + name + "'");
        lut.push_back(*c);
    }
    const auto unclassified = palette.find(Palette::kUnclassifiedName);
    std::vector<Rgb> pixels;
    pixels.reserve(labels.pixel_count());
    for (auto l : labels.labels()) {
        if (l == LabelMap::kUnclassified) {
            if (!unclassified)
                throw Error("no palette colour for UNCLASSIFIED");
            pixels.push_back(*unclassified);
        } else {
            pixels.push_back(lut[static_cast<std::size_t>(l)]);
        }
    }
    return pixels;
}

inline void render_ppm(const LabelMap& labels, const Palette& palette, std::ostream& out) {
    write_ppm(out, labels.width(), labels.height(), colourize(labels, palette));
}

inline void render_ppm(const LabelMap& labels, const Palette& palette, const std::string& path) {
    const auto pixels = colourize(labels, palette);
    auto out = detail::create_binary(path);
    write_ppm(out, labels.width(), labels.height(), pixels);
    if (!out)
        throw Error("failed writing '" + path + "'");
}

}  // namespace biogeo
