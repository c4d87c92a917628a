#include "commands.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "biogeo/biogeo.hpp"

namespace biogeo::cli {

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f || !(f << content) || !f.flush())
        throw Error("cannot write '" + path + "'");
}

void write_trace(std::ostream& out, const bbo::Result& r) {
    out << "generation,best_cost,mean_cost\n";
    out << std::setprecision(17);
    for (const auto& g : r.trace)
        out << g.generation << ',' << g.best_cost << ',' << g.mean_cost << '\n';
}

}  // namespace

void run_synth(const SynthOptions& opts, std::ostream& out) {
    SceneSpec spec = load_scene_spec(opts.classes);
    if (opts.width)
        spec.width = *opts.width;
    if (opts.height)
        spec.height = *opts.height;
    if (opts.seed)
        spec.seed = *opts.seed;
    finalize_scene_spec(spec);
    const Scene scene = synth_scene(spec);

    save_manifest(opts.out_manifest, scene.image);
    save_label_map(opts.out_truth, scene.truth);
    if (load_label_map(opts.out_truth) != scene.truth || load_manifest(opts.out_manifest) != scene.image)
        throw Error("synthesized outputs failed read-back validation");
    out << "wrote " << scene.image.band_count() << " bands of " << spec.width << "x" << spec.height << " to "
        << opts.out_manifest << "\nwrote truth map to " << opts.out_truth << '\n';

    if (!opts.out_training.empty()) {
        // Offset keeps training draws independent of the pixel stream.
        const auto training = sample_training(scene.image, scene.truth, opts.train_per_class, spec.seed + 1);
        write_training_csv(opts.out_training, scene.image.band_names(), training);
        out << "wrote " << opts.train_per_class << " training pixels per class to " << opts.out_training << '\n';
    }
}

void run_classify(const ClassifyOptions& opts, std::ostream& out) {
    opts.config.validate();
    const MultibandImage image = load_manifest(opts.image);
    auto training = read_training_csv(opts.training, image.band_names());
    if (!opts.classes.empty())
        training = select_classes(std::move(training), opts.classes);
    if (training.empty())
        throw Error(opts.training + ": no training pixels");

    const auto result = classify(image, training, opts.config);

    std::ostringstream labels;
    save_label_map(labels, result.label_map);
    write_file(opts.out, labels.str());
    if (load_label_map(opts.out) != result.label_map)
        throw Error("label map failed read-back validation");

    std::ostringstream report;
    write_report(report, image, opts.config, result);
    if (!opts.report.empty())
        write_file(opts.report, report.str());

    out << "classified " << image.pixel_count() - result.unclassified.size() << " of " << image.pixel_count()
        << " pixels in " << result.per_iteration.size() << " iteration(s); " << result.unclassified.size()
        << " unclassified\n";
}

void run_evaluate(const EvaluateOptions& opts, std::ostream& out) {
    ErrorMatrix m;
    if (!opts.matrix_in.empty()) {
        if (!opts.pred.empty() || !opts.truth.empty())
            throw Error("--matrix-in excludes --pred/--truth");
        m = read_matrix_csv(opts.matrix_in);
    } else {
        if (opts.pred.empty() || opts.truth.empty())
            throw Error("evaluate needs --pred and --truth, or --matrix-in");
        const LabelMap pred = load_label_map(opts.pred);
        const LabelMap truth = load_label_map(opts.truth);
        m = build_matrix(pred, truth, merged_classes(pred, truth));
    }
    write_accuracy(out, m);
    if (!opts.matrix_out.empty())
        write_matrix_csv(opts.matrix_out, m);
}

void run_render(const RenderOptions& opts, std::ostream& out) {
    const LabelMap labels = load_label_map(opts.labels);
    const Palette palette = opts.palette.empty() ? Palette::standard() : Palette::load(opts.palette);
    render_ppm(labels, palette, opts.out);
    out << "rendered " << labels.width() << "x" << labels.height() << " to " << opts.out << '\n';
}

void run_bbo_demo(const BboDemoOptions& opts, std::ostream& out) {
    bbo::Params p;
    p.population = opts.pop;
    p.generations = opts.gens;
    p.elites = opts.elites;
    p.mutation_probability = opts.mutation;
    p.seed = opts.seed;
    if (opts.dim == 0)
        throw Error("--dim must be positive");
    p.bounds.assign(opts.dim, {opts.lo, opts.hi});
    const auto r = bbo::optimize(bbo::sphere, p);
    if (opts.trace.empty()) {
        write_trace(out, r);
        return;
    }
    std::ostringstream trace;
    write_trace(trace, r);
    write_file(opts.trace, trace.str());
    out << std::setprecision(6) << "best cost " << r.trace.back().best_cost << " (initial " << r.trace.front().best_cost
        << ") after " << opts.gens << " generations\n";
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Land-cover classification by biogeography-based species migration"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    SynthOptions synth;
    std::size_t synth_width = 0, synth_height = 0;
    std::uint64_t synth_seed = 0;
    auto* s = app.add_subcommand("synth", "Generate a synthetic multiband scene with ground truth");
    s->add_option("--classes", synth.classes, "Scene spec (JSON: bands, classes, optional patches)")->required();
    auto* w_opt = s->add_option("--width", synth_width, "Width in pixels (overrides the spec file)");
    auto* h_opt = s->add_option("--height", synth_height, "Height in pixels (overrides the spec file)");
    auto* seed_opt = s->add_option("--seed", synth_seed, "RNG seed (overrides the spec file)");
    s->add_option("--out-manifest", synth.out_manifest, "Band manifest to write; PGMs go beside it")->required();
    s->add_option("--out-truth", synth.out_truth, "Ground-truth label map to write")->required();
    s->add_option("--out-training", synth.out_training, "Optional training CSV sampled from the truth");
    s->add_option("--train-per-class", synth.train_per_class, "Training pixels per class")->capture_default_str();

    ClassifyOptions cls;
    std::string policy = "best-fit", aggregate = "mean-abs", stddev = "sample";
    auto* c = app.add_subcommand("classify", "Classify a multiband image by species migration");
    c->add_option("--image", cls.image, "Band manifest")->required();
    c->add_option("--training", cls.training, "Training CSV (band columns then DECISION)")->required();
    c->add_option("--classes", cls.classes, "Class order; default is first appearance in the training CSV")
        ->delimiter(',');
    c->add_option("--threshold", cls.config.threshold, "Per-band |delta HSI| bound; absorb when within [-t, +t]")
        ->capture_default_str();
    c->add_option("--cuts", cls.config.initial_intervals, "Initial interval count per discretization band")
        ->capture_default_str();
    c->add_option("--disc-bands", cls.config.discretization_bands, "Bands used for discretization")
        ->delimiter(',')
        ->capture_default_str();
    c->add_option("--hsi-bands", cls.config.hsi_bands, "Bands entering the HSI test (default: all)")->delimiter(',');
    c->add_option("--max-iter", cls.config.max_iterations, "Maximum full passes over the universal habitat")
        ->capture_default_str();
    c->add_option("--policy", policy, "Habitat choice among passing habitats")
        ->check(CLI::IsMember({"best-fit", "first-fit"}))
        ->capture_default_str();
    c->add_option("--aggregate", aggregate, "Best-fit score over |delta HSI|")
        ->check(CLI::IsMember({"mean-abs", "max-abs"}))
        ->capture_default_str();
    c->add_option("--stddev", stddev, "Standard deviation convention")
        ->check(CLI::IsMember({"sample", "population"}))
        ->capture_default_str();
    c->add_option("--seed", cls.config.seed, "Seed echoed into the report")->capture_default_str();
    c->add_option("--out", cls.out, "Label map to write")->required();
    c->add_option("--report", cls.report, "Run report to write");

    EvaluateOptions ev;
    auto* e = app.add_subcommand("evaluate", "Error matrix, kappa and per-class accuracy");
    e->add_option("--pred", ev.pred, "Predicted label map");
    e->add_option("--truth", ev.truth, "Reference label map");
    e->add_option("--matrix-in", ev.matrix_in, "Evaluate a matrix CSV directly instead of label maps");
    e->add_option("--matrix-out", ev.matrix_out, "Write the error matrix as CSV");

    RenderOptions rd;
    auto* r = app.add_subcommand("render", "Render a label map to PPM");
    r->add_option("--labels", rd.labels, "Label map")->required();
    r->add_option("--out", rd.out, "PPM to write")->required();
    r->add_option("--palette", rd.palette,
                  "Palette file, 'name R G B' per line (default: vegetation green, urban red, rocky yellow, "
                  "barren black, water blue, unclassified white)");

    BboDemoOptions bd;
    auto* b = app.add_subcommand("bbo-demo", "Canonical BBO on the sphere function");
    b->add_option("--dim", bd.dim, "Problem dimension")->capture_default_str();
    b->add_option("--pop", bd.pop, "Population size")->capture_default_str();
    b->add_option("--gens", bd.gens, "Generations")->capture_default_str();
    b->add_option("--elites", bd.elites, "Elite habitats kept unchanged")->capture_default_str();
    b->add_option("--mutation", bd.mutation, "Per-SIV mutation probability")->capture_default_str();
    b->add_option("--seed", bd.seed, "RNG seed")->capture_default_str();
    b->add_option("--trace", bd.trace, "Trace CSV (generation,best_cost,mean_cost); default standard output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& pe) {
        return app.exit(pe, out, err);
    }

    try {
        if (*s) {
            if (w_opt->count())
                synth.width = synth_width;
            if (h_opt->count())
                synth.height = synth_height;
            if (seed_opt->count())
                synth.seed = synth_seed;
            run_synth(synth, out);
        } else if (*c) {
            cls.config.policy = policy == "first-fit" ? AssignmentPolicy::FirstFit : AssignmentPolicy::BestFit;
            cls.config.aggregate = aggregate == "max-abs" ? Aggregate::MaxAbs : Aggregate::MeanAbs;
            cls.config.convention = stddev == "population" ? StddevConvention::Population : StddevConvention::Sample;
            run_classify(cls, out);
        } else if (*e) {
            run_evaluate(ev, out);
        } else if (*r) {
            run_render(rd, out);
        } else if (*b) {
            run_bbo_demo(bd, out);
        }
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace biogeo::cli
