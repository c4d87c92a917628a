#pragma once

#include <array>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "biogeo/error.hpp"
#include "biogeo/raster.hpp"

namespace biogeo {

// Single-band 8-bit image as stored in a PGM file.
struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<Dn> pixels;

    friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

namespace detail {

// Header tokenizer shared by the P2/P5/P6 readers. Tracks line numbers for
// error context and skips `#` comments.
class NetpbmReader {
public:
    NetpbmReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& reason) const { throw ParseError(source_, line_, reason); }

    std::string token() {
        skip_space_and_comments();
        std::string t;
        int c;
        while ((c = in_.peek()) != EOF && !std::isspace(c) && c != '#') {
            t.push_back(static_cast<char>(in_.get()));
        }
        if (t.empty())
            fail("unexpected end of file");
        return t;
    }

    std::size_t number(const char* what) {
        const std::string t = token();
        std::size_t value = 0;
        for (char ch : t) {
            if (ch < '0' || ch > '9')
                fail(std::string("expected ") + what + ", got '" + t + "'");
            value = value * 10 + static_cast<std::size_t>(ch - '0');
            if (value > (1u << 30))
                fail(std::string(what) + " too large");
        }
        return value;
    }

    // After maxval, exactly one whitespace byte precedes the raster.
    void single_whitespace() {
        const int c = in_.get();
        if (c == EOF || !std::isspace(c))
            fail("missing whitespace before raster data");
        if (c == '\n')
            ++line_;
    }

    std::istream& stream() { return in_; }

private:
    void skip_space_and_comments() {
        int c;
        while ((c = in_.peek()) != EOF) {
            if (c == '#') {
                while ((c = in_.get()) != EOF && c != '\n') {
                }
                ++line_;
            } else if (std::isspace(c)) {
                if (in_.get() == '\n')
                    ++line_;
            } else {
                break;
            }
        }
    }

    std::istream& in_;
    std::string source_;
    std::size_t line_ = 1;
};

inline std::ifstream open_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path + "'");
    return in;
}

inline std::ofstream create_binary(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot write '" + path + "'");
    return out;
}

}  // namespace detail

// Reads P2 (ASCII) or P5 (binary) PGM with maxval <= 255. Sample values are
// taken as-is, without rescaling to 255.
inline GrayImage read_pgm(std::istream& in, const std::string& source = "<pgm>") {
    detail::NetpbmReader r(in, source);
    const std::string magic = r.token();
    if (magic != "P2" && magic != "P5")
        r.fail("not a PGM file (magic '" + magic + "')");
    GrayImage img;
    img.width = r.number("width");
    img.height = r.number("height");
    const std::size_t maxval = r.number("maxval");
    if (img.width == 0 || img.height == 0)
        r.fail("zero image dimension");
    if (maxval == 0 || maxval > 255)
        r.fail("maxval " + std::to_string(maxval) + " outside 1..255");
    const std::size_t n = img.width * img.height;
    img.pixels.resize(n);
    if (magic == "P5") {
        r.single_whitespace();
        in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in.gcount()) != n)
            r.fail("truncated raster data");
        for (Dn v : img.pixels)
            if (v > maxval)
                r.fail("sample exceeds maxval");
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t v = r.number("sample");
            if (v > maxval)
                r.fail("sample " + std::to_string(v) + " exceeds maxval");
            img.pixels[i] = static_cast<Dn>(v);
        }
    }
    return img;
}

inline GrayImage read_pgm(const std::string& path) {
    auto in = detail::open_binary(path);
    return read_pgm(in, path);
}

// Always writes binary P5 with maxval 255.
inline void write_pgm(std::ostream& out, const GrayImage& img) {
    if (img.pixels.size() != img.width * img.height)
        throw Error("PGM pixel count does not match dimensions");
    out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
}

inline void write_pgm(const std::string& path, const GrayImage& img) {
    auto out = detail::create_binary(path);
    write_pgm(out, img);
    if (!out)
        throw Error("failed writing '" + path + "'");
}

inline void write_ppm(std::ostream& out, std::size_t width, std::size_t height, const std::vector<Rgb>& pixels) {
    if (pixels.size() != width * height)
        throw Error("PPM pixel count does not match dimensions");
    out << "P6\n" << width << ' ' << height << "\n255\n";
    for (const Rgb& p : pixels) {
        const std::array<char, 3> px{static_cast<char>(p.r), static_cast<char>(p.g), static_cast<char>(p.b)};
        out.write(px.data(), 3);
    }
}

// Reads binary P6 with maxval 255; used to inspect renders.
inline std::vector<Rgb> read_ppm(std::istream& in, std::size_t& width, std::size_t& height,
                                 const std::string& source = "<ppm>") {
    detail::NetpbmReader r(in, source);
    if (r.token() != "P6")
        r.fail("not a P6 file");
    width = r.number("width");
    height = r.number("height");
    if (r.number("maxval") != 255)
        r.fail("only maxval 255 supported");
    r.single_whitespace();
    std::vector<Rgb> pixels(width * height);
    for (auto& p : pixels) {
        std::array<char, 3> px{};
        if (!in.read(px.data(), 3))
            r.fail("truncated raster data");
        p = {static_cast<std::uint8_t>(px[0]), static_cast<std::uint8_t>(px[1]), static_cast<std::uint8_t>(px[2])};
    }
    return pixels;
}

}  // namespace biogeo
