#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dermfuzz/anfis/serialize.hpp"
#include "dermfuzz/core/parallel.hpp"
#include "dermfuzz/evaluation/experiment.hpp"
#include "dermfuzz/features/feature_vector.hpp"
#include "dermfuzz/imaging/filters.hpp"
#include "dermfuzz/imaging/io.hpp"
#include "dermfuzz/pipeline/config.hpp"
#include "dermfuzz/pipeline/manifest.hpp"
#include "dermfuzz/pipeline/synthetic.hpp"
#include "dermfuzz/segmentation/lesion_mask.hpp"

namespace dermfuzz {

/// load -> resize -> median filter -> segment -> 13 features.
inline FeatureVector process_image(const std::filesystem::path& path, const PipelineConfig& cfg,
                                   LesionMask* mask_out = nullptr) {
    const RgbRaster raw = load_image(path);
    const RgbRaster sized = resize(raw, cfg.image_size, cfg.image_size);
    const RgbRaster filtered = median_filter(sized, cfg.median_window);
    LesionMask mask = lesion_mask(filtered, cfg.segmentation, path.string());
    FeatureVector fv = extract_features(filtered, mask);
    if (mask_out) *mask_out = std::move(mask);
    return fv;
}

struct ExtractSummary {
    std::size_t rows = 0;
    std::size_t failures = 0;
    std::filesystem::path features_csv;
    std::filesystem::path errors_csv;
};

/// Feature extraction over a manifest. Rows keep manifest order; failing images are
/// listed in errors.csv. Throws only when every image fails.
inline ExtractSummary cmd_extract(const std::filesystem::path& manifest_path, const PipelineConfig& cfg,
                                  const std::filesystem::path& out_dir, bool save_masks = false) {
    const Manifest manifest = read_manifest(manifest_path);
    std::filesystem::create_directories(out_dir);
    if (save_masks) std::filesystem::create_directories(out_dir / "masks");

    const std::size_t n = manifest.entries.size();
    std::vector<std::optional<FeatureVector>> rows(n);
    std::vector<std::string> errors(n);
    parallel_for(n, cfg.jobs, [&](std::size_t i) {
        const auto& e = manifest.entries[i];
        try {
            LesionMask mask;
            FeatureVector fv = process_image(e.image_path, cfg, save_masks ? &mask : nullptr);
            fv.label = e.label;
            rows[i] = fv;
            if (save_masks) save_mask_png(mask, out_dir / "masks" / (e.image_path.stem().string() + ".png"));
        } catch (const std::exception& ex) {
            errors[i] = ex.what();
        }
    });

    ExtractSummary summary;
    summary.features_csv = out_dir / "features.csv";
    summary.errors_csv = out_dir / "errors.csv";
    std::vector<FeatureVector> ok;
    std::string err_text = "path,error\n";
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i]) {
            ok.push_back(*rows[i]);
        } else {
            std::string msg = errors[i];
            for (char& c : msg)
                if (c == ',' || c == '\n') c = ';';
            err_text += manifest.entries[i].image_path.string() + "," + msg + "\n";
            ++summary.failures;
        }
    }
    summary.rows = ok.size();
    write_text(err_text, summary.errors_csv);
    if (ok.empty()) throw Error("extract: every image failed (see " + summary.errors_csv.string() + ")");
    write_feature_csv(ok, summary.features_csv);
    return summary;
}

inline std::string convergence_csv(const std::vector<double>& history) {
    std::string out = "iteration,best_cost\n";
    for (std::size_t i = 0; i < history.size(); ++i) out += std::to_string(i) + "," + format_real(history[i]) + "\n";
    return out;
}

struct TrainSummary {
    RunReport report;
    std::filesystem::path model_path;
};

/// Trains cfg.optimizer on the features with the first configured seed, writing
/// model.json, convergence.csv and train_report.csv.
inline TrainSummary cmd_train(const std::filesystem::path& features_csv, const PipelineConfig& cfg,
                              const std::filesystem::path& out_dir) {
    const auto data = read_feature_csv(features_csv);
    std::filesystem::create_directories(out_dir);
    TrainingOutcome outcome = run_method(data, cfg.optimizer, cfg, cfg.seeds.front());
    TrainSummary summary{outcome.report, out_dir / "model.json"};
    save_model(ModelBundle{outcome.model, outcome.scaling}, summary.model_path);
    write_text(convergence_csv(outcome.report.history), out_dir / "convergence.csv");
    write_text(report_csv({outcome.report}, cfg.record_timing), out_dir / "train_report.csv");
    return summary;
}

/// Scores a saved model on the same split the training run used (same seed and
/// fraction), plus the whole file.
inline std::vector<RunReport> evaluate_saved_model(const std::vector<FeatureVector>& data, const ModelBundle& bundle,
                                                   const PipelineConfig& cfg) {
    if (bundle.model.n_inputs() != kFeatureCount)
        throw ArgumentError("model expects " + std::to_string(bundle.model.n_inputs()) +
                            " inputs but the feature file has " + std::to_string(kFeatureCount) + " features");
    const FeatureScaling scaling = bundle.scaling.value_or(identity_scaling());
    std::vector<RunReport> reports;
    for (std::uint64_t seed : cfg.seeds) {
        const Split parts = split(data, cfg.split_fraction, seed);
        RunReport r;
        r.method = "model";
        r.seed = seed;
        r.subset_size = data.size();
        r.train_cm = score_model(bundle.model, scaling.apply(parts.train));
        r.test_cm = score_model(bundle.model, scaling.apply(parts.test));
        r.config = to_json(cfg);
        reports.push_back(std::move(r));
    }
    return reports;
}

struct EvaluateSummary {
    std::vector<RunReport> reports;
    std::string table;
};

/// Either scores a saved model or runs the method comparison; writes report.csv,
/// summary.txt and (for comparisons) loss.svg.
inline EvaluateSummary cmd_evaluate(const std::filesystem::path& features_csv,
                                    const std::optional<std::filesystem::path>& model_path, const PipelineConfig& cfg,
                                    const std::filesystem::path& out_dir) {
    const auto data = read_feature_csv(features_csv);
    std::filesystem::create_directories(out_dir);
    EvaluateSummary s;
    if (model_path) {
        s.reports = evaluate_saved_model(data, load_model(*model_path), cfg);
    } else {
        s.reports = compare_methods(data, cfg.methods, cfg.seeds, cfg);
        write_svg(loss_chart(s.reports), out_dir / "loss.svg");
    }
    s.table = summary_table(summarize(s.reports));
    write_text(report_csv(s.reports, cfg.record_timing), out_dir / "report.csv");
    write_text(s.table, out_dir / "summary.txt");
    return s;
}

struct ConvergenceSummary {
    std::vector<RunReport> grid;
};

/// Subset-size x iteration grid for ica_anfis; writes convergence_grid.csv and four
/// SVG charts (train/test x accuracy/sensitivity).
inline ConvergenceSummary cmd_convergence(const std::filesystem::path& features_csv, const PipelineConfig& cfg,
                                          const std::filesystem::path& out_dir) {
    const auto data = read_feature_csv(features_csv);
    std::filesystem::create_directories(out_dir);
    ConvergenceSummary s;
    s.grid = convergence_sweep(data, cfg.subset_sizes, cfg.iteration_counts, cfg.seeds, cfg);
    write_text(report_csv(s.grid, cfg.record_timing), out_dir / "convergence_grid.csv");
    for (const auto& [name, chart] : convergence_charts(s.grid)) write_svg(chart, out_dir / name);
    return s;
}

/// Writes the frozen synthetic benchmark (per_class benign + per_class melanoma images).
inline Manifest cmd_demo_synthetic(const std::filesystem::path& out_dir, std::uint64_t seed,
                                   std::size_t per_class = 280, std::size_t image_size = 200) {
    return generate_synthetic_dataset(out_dir, per_class, seed, image_size);
}

}  // namespace dermfuzz
