// dermfuzz command-line front end.
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dermfuzz/dermfuzz.hpp"

namespace {

struct GlobalOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out = "out";
    std::optional<unsigned> jobs;
};

dermfuzz::PipelineConfig resolve_config(const GlobalOptions& g) {
    dermfuzz::PipelineConfig cfg = g.config.empty() ? dermfuzz::PipelineConfig{} : dermfuzz::load_config(g.config);
    if (g.seed) cfg.seeds = {*g.seed};
    if (g.jobs) cfg.jobs = *g.jobs;
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dermfuzz: skin lesion classification with ICA-trained ANFIS"};
    app.require_subcommand(1);
    GlobalOptions g;
    app.add_option("--config", g.config, "JSON pipeline configuration")->check(CLI::ExistingFile);
    app.add_option("--seed", g.seed, "Seed (replaces the configured seed list)");
    app.add_option("--out", g.out, "Output directory");
    app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);

    auto* extract = app.add_subcommand("extract", "Images -> feature CSV");
    std::string manifest;
    bool save_masks = false;
    extract->add_option("--manifest", manifest, "CSV with path,label")->required();
    extract->add_flag("--save-masks", save_masks, "Also write lesion masks as PNG");

    auto* train = app.add_subcommand("train", "Feature CSV -> model.json");
    std::string features;
    std::string optimizer;
    train->add_option("--features", features, "Feature CSV")->required();
    train->add_option("--optimizer", optimizer, "ica | gd | aco");

    auto* evaluate = app.add_subcommand("evaluate", "Score a model or compare methods");
    std::string model;
    std::vector<std::string> methods;
    evaluate->add_option("--features", features, "Feature CSV")->required();
    evaluate->add_option("--model", model, "Saved model (omit to run the method comparison)");
    evaluate->add_option("--methods", methods, "Methods to compare");
    std::vector<std::uint64_t> seeds;
    evaluate->add_option("--seeds", seeds, "Seed list for the comparison");

    auto* convergence = app.add_subcommand("convergence", "Subset-size x iteration sweep");
    std::vector<std::size_t> sizes, iters;
    convergence->add_option("--features", features, "Feature CSV")->required();
    convergence->add_option("--sizes", sizes, "Subset sizes");
    convergence->add_option("--iterations", iters, "Iteration counts");
    convergence->add_option("--seeds", seeds, "Seed list");

    auto* demo = app.add_subcommand("demo-synthetic", "Generate the synthetic benchmark images");
    std::size_t per_class = 280, demo_size = 200;
    demo->add_option("--per-class", per_class, "Images per class")->check(CLI::PositiveNumber);
    demo->add_option("--image-size", demo_size, "Raster side length")->check(CLI::PositiveNumber);

    for (auto* sub : {extract, train, evaluate, convergence, demo}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        dermfuzz::PipelineConfig cfg = resolve_config(g);
        if (!seeds.empty()) cfg.seeds = seeds;
        if (!methods.empty()) {
            cfg.methods.clear();
            for (const auto& m : methods) cfg.methods.push_back(dermfuzz::parse_method(m));
        }
        if (!optimizer.empty()) cfg.optimizer = dermfuzz::parse_method(optimizer);
        if (!sizes.empty()) cfg.subset_sizes = sizes;
        if (!iters.empty()) cfg.iteration_counts = iters;

        if (*extract) {
            const auto s = dermfuzz::cmd_extract(manifest, cfg, g.out, save_masks);
            std::cout << "wrote " << s.rows << " rows to " << s.features_csv.string() << " (" << s.failures
                      << " failures)\n";
        } else if (*train) {
            const auto s = dermfuzz::cmd_train(features, cfg, g.out);
            std::cout << "wrote " << s.model_path.string() << "; test accuracy " << s.report.test_cm.tp + s.report.test_cm.tn
                      << "/" << s.report.test_cm.total() << "\n";
        } else if (*evaluate) {
            std::optional<std::filesystem::path> model_path;
            if (!model.empty()) model_path = model;
            const auto s = dermfuzz::cmd_evaluate(features, model_path, cfg, g.out);
            std::cout << s.table;
        } else if (*convergence) {
            const auto s = dermfuzz::cmd_convergence(features, cfg, g.out);
            std::cout << "wrote " << s.grid.size() << " grid cells to " << g.out << "\n";
        } else if (*demo) {
            const auto m = dermfuzz::cmd_demo_synthetic(g.out, cfg.seeds.front(), per_class, demo_size);
            std::cout << "wrote " << m.entries.size() << " images and manifest.csv to " << g.out << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
