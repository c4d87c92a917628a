#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "biogeo/classifier.hpp"

namespace biogeo::cli {

struct SynthOptions {
    std::string classes;  // JSON scene spec
    std::optional<std::size_t> width;
    std::optional<std::size_t> height;
    std::optional<std::uint64_t> seed;
    std::string out_manifest;
    std::string out_truth;
    std::string out_training;  // optional
    std::size_t train_per_class = 30;
};

struct ClassifyOptions {
    std::string image;
    std::string training;
    std::vector<std::string> classes;  // empty = order of first appearance in training
    std::string out;
    std::string report;
    ClassifierConfig config;
};

struct EvaluateOptions {
    std::string pred;
    std::string truth;
    std::string matrix_in;
    std::string matrix_out;
};

struct RenderOptions {
    std::string labels;
    std::string out;
    std::string palette;
};

struct BboDemoOptions {
    std::size_t dim = 10;
    std::size_t pop = 50;
    std::size_t gens = 100;
    std::size_t elites = 2;
    double mutation = 0.01;
    double lo = -5.12;
    double hi = 5.12;
    std::uint64_t seed = 42;
    std::string trace;  // empty = standard output
};

void run_synth(const SynthOptions& opts, std::ostream& out);
void run_classify(const ClassifyOptions& opts, std::ostream& out);
void run_evaluate(const EvaluateOptions& opts, std::ostream& out);
void run_render(const RenderOptions& opts, std::ostream& out);
void run_bbo_demo(const BboDemoOptions& opts, std::ostream& out);

// Full command line: parses argv, runs one subcommand and returns the exit
// code. Errors print one line to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace biogeo::cli
