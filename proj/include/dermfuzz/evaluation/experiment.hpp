#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dermfuzz/anfis/model.hpp"
#include "dermfuzz/anfis/trainers.hpp"
#include "dermfuzz/evaluation/metrics.hpp"
#include "dermfuzz/evaluation/split.hpp"
#include "dermfuzz/evaluation/svg.hpp"
#include "dermfuzz/features/feature_vector.hpp"
#include "dermfuzz/pipeline/config.hpp"

namespace dermfuzz {

/// Outcome of training and scoring one method on one split.
struct RunReport {
    std::string method;
    std::uint64_t seed = 0;
    std::size_t subset_size = 0;
    std::size_t iterations = 0;
    ConfusionMatrix train_cm;
    ConfusionMatrix test_cm;
    std::vector<double> history;
    nlohmann::json config;
    double wall_seconds = 0.0;

    double train_accuracy() const { return accuracy(train_cm); }
    double test_accuracy() const { return accuracy(test_cm); }
    double train_sensitivity() const { return sensitivity(train_cm); }
    double test_sensitivity() const { return sensitivity(test_cm); }
};

inline ConfusionMatrix score_model(const AnfisModel& model, const std::vector<FeatureVector>& standardized) {
    std::vector<Label> pred, truth;
    pred.reserve(standardized.size());
    truth.reserve(standardized.size());
    for (const auto& fv : standardized) {
        if (!fv.label) throw ArgumentError("score_model: unlabeled feature vector");
        pred.push_back(predict(model, fv));
        truth.push_back(*fv.label);
    }
    return confusion(std::span<const Label>(pred), std::span<const Label>(truth));
}

inline FeatureScaling identity_scaling() {
    FeatureScaling s;
    s.std.fill(1.0);
    return s;
}

inline std::size_t method_iterations(Method m, const TrainerConfig& t) {
    switch (m) {
        case Method::ica_anfis: return t.ica.iterations;
        case Method::gd_anfis: return t.gd.iterations;
        case Method::aco_anfis: return t.aco.iterations;
    }
    return 0;
}

/// Everything produced by one training run, including the model for persistence.
struct TrainingOutcome {
    RunReport report;
    AnfisModel model;
    FeatureScaling scaling;
};

/// Split, standardize on the training part, initialize, train and score.
inline TrainingOutcome run_method(const std::vector<FeatureVector>& data, Method method, const PipelineConfig& cfg,
                                  std::uint64_t seed, std::optional<std::size_t> iterations = std::nullopt) {
    const auto start = std::chrono::steady_clock::now();
    TrainerConfig trainer = cfg.trainer();
    if (iterations) {
        trainer.ica.iterations = *iterations;
        trainer.aco.iterations = *iterations;
        trainer.gd.iterations = *iterations;
    }
    const Split parts = split(data, cfg.split_fraction, seed);
    const FeatureScaling scaling = cfg.standardize ? fit_scaling(parts.train) : identity_scaling();
    const auto train = scaling.apply(parts.train);
    const auto test = scaling.apply(parts.test);
    const TrainingSet ts = to_training_set(train);
    const AnfisModel initial = new_model(kFeatureCount, cfg.n_rules, ts, seed);
    TrainedModel trained = train_method(method, initial, ts, trainer, seed);

    TrainingOutcome out{RunReport{}, trained.model, scaling};
    RunReport& r = out.report;
    r.method = std::string(method_name(method));
    r.seed = seed;
    r.subset_size = data.size();
    r.iterations = method_iterations(method, trainer);
    r.train_cm = score_model(trained.model, train);
    r.test_cm = score_model(trained.model, test);
    r.history = std::move(trained.history);
    r.config = to_json(cfg);
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

/// Every method on every seed; all methods share each seed's split. Reports are
/// ordered by (method, seed).
inline std::vector<RunReport> compare_methods(const std::vector<FeatureVector>& data, const std::vector<Method>& methods,
                                              const std::vector<std::uint64_t>& seeds, const PipelineConfig& cfg) {
    if (seeds.empty()) throw ArgumentError("compare_methods: at least one seed is required");
    std::vector<RunReport> reports;
    for (Method m : methods)
        for (std::uint64_t s : seeds) reports.push_back(run_method(data, m, cfg, s).report);
    return reports;
}

/// Stratified subsets x iteration budgets, ica_anfis only. Ordered by (seed, size,
/// iterations). One subset and split per (seed, size), shared across budgets.
inline std::vector<RunReport> convergence_sweep(const std::vector<FeatureVector>& data,
                                                const std::vector<std::size_t>& subset_sizes,
                                                const std::vector<std::size_t>& iteration_counts,
                                                const std::vector<std::uint64_t>& seeds, const PipelineConfig& cfg) {
    for (std::size_t size : subset_sizes)
        if (size > data.size())
            throw ArgumentError("convergence_sweep: subset size " + std::to_string(size) + " exceeds dataset size " +
                                std::to_string(data.size()));
    std::vector<RunReport> grid;
    for (std::uint64_t seed : seeds)
        for (std::size_t size : subset_sizes) {
            const auto subset = stratified_subsample(data, size, seed);
            for (std::size_t iters : iteration_counts) {
                RunReport r = run_method(subset, Method::ica_anfis, cfg, seed, iters).report;
                r.subset_size = size;
                grid.push_back(std::move(r));
            }
        }
    return grid;
}

// ---------------------------------------------------------------------------
// Output

inline std::string report_csv_header() {
    return "method,seed,split,subset_size,iterations,accuracy,sensitivity,specificity,tp,fn,tn,fp,wall_seconds";
}

namespace detail {

inline std::string metric_field(const std::function<double()>& f) {
    try {
        return format_real(f());
    } catch (const UndefinedMetricError&) {
        return "";
    }
}

}  // namespace detail

/// Two rows per report (train, test). Timing is written as 0 when disabled.
inline std::string report_csv(const std::vector<RunReport>& reports, bool record_timing = true) {
    std::ostringstream out;
    out << report_csv_header() << '\n';
    for (const auto& r : reports)
        for (const char* part : {"train", "test"}) {
            const ConfusionMatrix& cm = std::string_view(part) == "train" ? r.train_cm : r.test_cm;
            out << r.method << ',' << r.seed << ',' << part << ',' << r.subset_size << ',' << r.iterations << ','
                << detail::metric_field([&] { return accuracy(cm); }) << ','
                << detail::metric_field([&] { return sensitivity(cm); }) << ','
                << detail::metric_field([&] { return specificity(cm); }) << ',' << cm.tp << ',' << cm.fn << ','
                << cm.tn << ',' << cm.fp << ',' << format_real(record_timing ? r.wall_seconds : 0.0) << '\n';
        }
    return out.str();
}

inline void write_text(const std::string& text, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("error writing " + path.string());
}

struct MethodSummary {
    std::string method;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    double train_sensitivity = 0.0;
    double test_sensitivity = 0.0;
    std::size_t runs = 0;
};

/// Mean metrics per method, in first-appearance order. Undefined sensitivities
/// contribute NaN.
inline std::vector<MethodSummary> summarize(const std::vector<RunReport>& reports) {
    std::vector<MethodSummary> out;
    auto safe = [](auto&& f) {
        try {
            return f();
        } catch (const UndefinedMetricError&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    for (const auto& r : reports) {
        auto it = std::find_if(out.begin(), out.end(), [&](const MethodSummary& s) { return s.method == r.method; });
        if (it == out.end()) {
            out.push_back({r.method});
            it = out.end() - 1;
        }
        it->train_accuracy += r.train_accuracy();
        it->test_accuracy += r.test_accuracy();
        it->train_sensitivity += safe([&] { return r.train_sensitivity(); });
        it->test_sensitivity += safe([&] { return r.test_sensitivity(); });
        ++it->runs;
    }
    for (auto& s : out) {
        const double n = static_cast<double>(s.runs);
        s.train_accuracy /= n, s.test_accuracy /= n, s.train_sensitivity /= n, s.test_sensitivity /= n;
    }
    return out;
}

/// Plain-text sensitivity and accuracy tables (means over seeds, in percent).
inline std::string summary_table(const std::vector<MethodSummary>& rows) {
    auto pct = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * v);
        return std::string(buf);
    };
    auto line = [](const std::string& a, const std::string& b, const std::string& c) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-12s  %-22s  %-22s\n", a.c_str(), b.c_str(), c.c_str());
        return std::string(buf);
    };
    std::string out = "SENSITIVITY RESULTS (mean over seeds)\n";
    out += line("Method", "Training sensitivity", "Test sensitivity");
    for (const auto& r : rows) out += line(r.method, pct(r.train_sensitivity), pct(r.test_sensitivity));
    out += "\nACCURACY RESULTS (mean over seeds)\n";
    out += line("Method", "Training accuracy", "Test accuracy");
    for (const auto& r : rows) out += line(r.method, pct(r.train_accuracy), pct(r.test_accuracy));
    return out;
}

/// Mean training-loss curve per method.
inline LineChart loss_chart(const std::vector<RunReport>& reports) {
    LineChart chart{"Training loss by method (mean over seeds)", "iteration", "training MSE", {}};
    std::map<std::string, std::pair<std::vector<double>, std::size_t>> acc;
    std::vector<std::string> order;
    for (const auto& r : reports) {
        auto [it, inserted] = acc.try_emplace(r.method, std::vector<double>(r.history.size(), 0.0), 0);
        if (inserted) order.push_back(r.method);
        auto& [sum, n] = it->second;
        if (sum.size() != r.history.size()) continue;
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += r.history[i];
        ++n;
    }
    for (const auto& name : order) {
        const auto& [sum, n] = acc.at(name);
        ChartSeries s{name, {}, {}};
        for (std::size_t i = 0; i < sum.size(); ++i) {
            s.x.push_back(static_cast<double>(i));
            s.y.push_back(sum[i] / static_cast<double>(n));
        }
        chart.series.push_back(std::move(s));
    }
    return chart;
}

/// One chart per (split, metric): x = iterations, one series per subset size.
inline std::vector<std::pair<std::string, LineChart>> convergence_charts(const std::vector<RunReport>& grid) {
    std::vector<std::size_t> sizes, iters;
    for (const auto& r : grid) {
        if (std::find(sizes.begin(), sizes.end(), r.subset_size) == sizes.end()) sizes.push_back(r.subset_size);
        if (std::find(iters.begin(), iters.end(), r.iterations) == iters.end()) iters.push_back(r.iterations);
    }
    std::sort(iters.begin(), iters.end());
    std::vector<std::pair<std::string, LineChart>> charts;
    for (const char* part : {"train", "test"})
        for (const char* metric : {"accuracy", "sensitivity"}) {
            const bool is_train = std::string_view(part) == "train";
            const bool is_acc = std::string_view(metric) == "accuracy";
            LineChart chart{std::string(is_train ? "Training" : "Test") + " " + metric + " vs iterations",
                            "iterations", metric, {}};
            for (std::size_t size : sizes) {
                ChartSeries s{std::to_string(size) + " images", {}, {}};
                for (std::size_t it : iters) {
                    double sum = 0.0;
                    std::size_t n = 0;
                    for (const auto& r : grid) {
                        if (r.subset_size != size || r.iterations != it) continue;
                        const ConfusionMatrix& cm = is_train ? r.train_cm : r.test_cm;
                        try {
                            sum += is_acc ? accuracy(cm) : sensitivity(cm);
                            ++n;
                        } catch (const UndefinedMetricError&) {
                        }
                    }
                    s.x.push_back(static_cast<double>(it));
                    s.y.push_back(n ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN());
                }
                chart.series.push_back(std::move(s));
            }
            charts.emplace_back(std::string(part) + "_" + metric + ".svg", std::move(chart));
        }
    return charts;
}

/// Mean test accuracy over the grid cells with the given subset size and budget.
inline double mean_test_accuracy(const std::vector<RunReport>& grid, std::size_t size, std::size_t iterations) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : grid)
        if (r.subset_size == size && r.iterations == iterations) {
            sum += r.test_accuracy();
            ++n;
        }
    if (n == 0) throw ArgumentError("no grid cells for the requested size and iteration count");
    return sum / static_cast<double>(n);
}

}  // namespace dermfuzz
