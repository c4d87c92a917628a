#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "biogeo/biogeo.hpp"

namespace biogeo::testing {

// Scratch directory removed on scope exit.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
        path_ = std::filesystem::temp_directory_path() /
                ("biogeo_" + std::to_string(stamp) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

inline const std::vector<std::string>& seven_bands() {
    static const std::vector<std::string> names{"RED", "GREEN", "NIR", "MIR", "RS1", "RS2", "DEM"};
    return names;
}

inline const std::vector<std::string>& five_classes() {
    static const std::vector<std::string> names{"vegetation", "urban", "rocky", "water", "barren"};
    return names;
}

// Five classes on seven bands. In every band the class means are a
// permutation of {10, 70, 130, 190, 250}, so any two classes differ by at
// least 60 DN in every band. One vertical strip per class.
inline SceneSpec five_class_spec(std::size_t width, std::size_t height, double stddev, std::uint64_t seed) {
    static constexpr double levels[5] = {10, 70, 130, 190, 250};
    SceneSpec s;
    s.width = width;
    s.height = height;
    s.seed = seed;
    s.band_names = seven_bands();
    for (std::size_t c = 0; c < 5; ++c) {
        SceneClass k{five_classes()[c], {}, {}};
        for (std::size_t b = 0; b < 7; ++b) {
            k.mean.push_back(levels[(c + 2 * b) % 5]);
            k.stddev.push_back(stddev);
        }
        s.classes.push_back(std::move(k));
    }
    s.patches = strip_layout(width, height, 5);
    return s;
}

inline MultibandImage image_from_vectors(std::size_t width, std::size_t height, const std::vector<DnVector>& pixels,
                                         std::vector<std::string> names) {
    std::vector<std::vector<Dn>> bands(names.size(), std::vector<Dn>(pixels.size()));
    for (std::size_t p = 0; p < pixels.size(); ++p)
        for (std::size_t b = 0; b < names.size(); ++b)
            bands[b][p] = pixels[p][b];
    return MultibandImage(width, height, std::move(names), std::move(bands));
}

}  // namespace biogeo::testing
