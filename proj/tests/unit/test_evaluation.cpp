#include <gtest/gtest.h>

#include "dermfuzz/evaluation/experiment.hpp"
#include "dermfuzz/evaluation/metrics.hpp"
#include "dermfuzz/evaluation/split.hpp"
#include "dermfuzz/evaluation/svg.hpp"
#include "support.hpp"

using namespace dermfuzz;
using namespace testing_support;

namespace {

PipelineConfig quick_config() {
    PipelineConfig cfg;
    cfg.n_rules = 3;
    cfg.ica.population = 30;
    cfg.ica.n_empires = 3;
    cfg.ica.iterations = 15;
    cfg.aco.iterations = 15;
    cfg.gd.iterations = 15;
    cfg.record_timing = false;
    return cfg;
}

std::vector<FeatureVector> labelled(std::size_t benign, std::size_t melanoma) {
    std::vector<FeatureVector> rows;
    for (std::size_t i = 0; i < benign + melanoma; ++i) {
        FeatureVector fv;
        fv.values[0] = double(i);
        fv.label = i < benign ? Label::benign : Label::melanoma;
        rows.push_back(fv);
    }
    return rows;
}

}  // namespace

TEST(Confusion, HandExamples) {
    const std::vector<int> p = {2, 2, 1, 1};
    EXPECT_EQ(confusion(p, p), (ConfusionMatrix{2, 0, 2, 0}));
    const std::vector<int> ones(5, 1), twos(5, 2);
    EXPECT_EQ(confusion(ones, twos), (ConfusionMatrix{0, 5, 0, 0}));
    EXPECT_THROW(confusion(std::vector<int>{1, 3}, std::vector<int>{1, 1}), ArgumentError);
    EXPECT_THROW(confusion(std::vector<int>{1}, std::vector<int>{1, 1}), ArgumentError);
}

TEST(Confusion, MatchesBruteForceCounter) {
    Rng rng = make_stream(1, 1);
    std::vector<int> p(1000), l(1000);
    for (std::size_t i = 0; i < 1000; ++i) {
        p[i] = 1 + int(uniform_index(rng, 2));
        l[i] = 1 + int(uniform_index(rng, 2));
    }
    std::size_t tp = 0, fn = 0, tn = 0, fp = 0;
    for (std::size_t i = 0; i < 1000; ++i) {
        tp += p[i] == 2 && l[i] == 2;
        fn += p[i] == 1 && l[i] == 2;
        tn += p[i] == 1 && l[i] == 1;
        fp += p[i] == 2 && l[i] == 1;
    }
    EXPECT_EQ(confusion(p, l), (ConfusionMatrix{tp, fn, tn, fp}));
}

TEST(Metrics, Accuracy) {
    EXPECT_EQ(accuracy({5, 0, 5, 0}), 1.0);
    EXPECT_EQ(accuracy({45, 5, 49, 1}), 0.94);
    EXPECT_EQ(accuracy({0, 1, 0, 1}), 0.0);
    EXPECT_THROW(accuracy({}), ArgumentError);
}

TEST(Metrics, Sensitivity) {
    EXPECT_EQ(sensitivity({9, 1, 0, 0}), 0.9);
    EXPECT_EQ(sensitivity({0, 5, 0, 0}), 0.0);
    EXPECT_EQ(sensitivity({3, 0, 0, 0}), 1.0);
    EXPECT_THROW(sensitivity({0, 0, 4, 1}), UndefinedMetricError);
    EXPECT_EQ(specificity({0, 0, 3, 1}), 0.75);
}

TEST(Split, PaperProtocolSizes) {
    const auto rows = labelled(280, 280);
    const SplitIndices s = split_indices(rows, 0.7, 1);
    EXPECT_EQ(s.train.size(), 392u);
    EXPECT_EQ(s.test.size(), 168u);
    std::vector<std::size_t> all = s.train;
    all.insert(all.end(), s.test.begin(), s.test.end());
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i], i);
}

TEST(Split, TinyBalanced) {
    auto rows = labelled(2, 2);
    const Split s = split(rows, 0.5, 3);
    ASSERT_EQ(s.train.size(), 2u);
    EXPECT_NE(s.train[0].label, s.train[1].label);
}

TEST(Split, StratificationWithinOneSample) {
    for (std::uint64_t seed = 0; seed < 20; ++seed)
        for (double f : {0.3, 0.55, 0.7, 0.9}) {
            const auto rows = labelled(37 + seed, 61);
            const Split s = split(rows, f, seed);
            std::size_t mel = 0;
            for (const auto& r : s.train) mel += *r.label == Label::melanoma;
            const double expect = double(s.train.size()) * 61.0 / double(rows.size());
            EXPECT_LE(std::abs(double(mel) - expect), 1.0) << seed << " " << f;
        }
}

TEST(Split, SeedChangesPartitionDeterministically) {
    const auto rows = labelled(50, 50);
    EXPECT_EQ(split_indices(rows, 0.7, 4).train, split_indices(rows, 0.7, 4).train);
    EXPECT_NE(split_indices(rows, 0.7, 4).train, split_indices(rows, 0.7, 5).train);
    EXPECT_THROW(split_indices(rows, 1.0, 1), ArgumentError);
}

TEST(Subsample, SizeAndBalance) {
    const auto rows = labelled(280, 280);
    const auto sub = stratified_subsample(rows, 50, 2);
    EXPECT_EQ(sub.size(), 50u);
    std::size_t mel = 0;
    for (const auto& r : sub) mel += *r.label == Label::melanoma;
    EXPECT_EQ(mel, 25u);
    EXPECT_EQ(stratified_subsample(rows, 560, 2), rows);
    EXPECT_THROW(stratified_subsample(rows, 561, 2), ArgumentError);
}

TEST(CompareMethods, SingleRunPopulated) {
    const auto data = blob_dataset(30, 1);
    const auto cfg = quick_config();
    const auto reports = compare_methods(data, {Method::ica_anfis}, {7}, cfg);
    ASSERT_EQ(reports.size(), 1u);
    const RunReport& r = reports[0];
    EXPECT_EQ(r.method, "ica_anfis");
    EXPECT_EQ(r.seed, 7u);
    EXPECT_EQ(r.subset_size, 60u);
    EXPECT_EQ(r.iterations, 15u);
    EXPECT_EQ(r.train_cm.total(), 42u);
    EXPECT_EQ(r.test_cm.total(), 18u);
    EXPECT_EQ(r.history.size(), 16u);
    EXPECT_TRUE(r.config.is_object());
}

TEST(CompareMethods, IdenticalConfigsGiveIdenticalReports) {
    const auto data = blob_dataset(30, 2);
    const auto cfg = quick_config();
    const auto reports = compare_methods(data, {Method::aco_anfis, Method::aco_anfis}, {3}, cfg);
    EXPECT_EQ(reports[0].train_cm, reports[1].train_cm);
    EXPECT_EQ(reports[0].test_cm, reports[1].test_cm);
    EXPECT_EQ(reports[0].history, reports[1].history);
    EXPECT_EQ(report_csv({reports[0]}, false), report_csv({reports[1]}, false));
}

TEST(ConvergenceSweep, GridShape) {
    const auto data = blob_dataset(30, 3);
    const auto cfg = quick_config();
    const auto grid = convergence_sweep(data, {20, 30, 40, 50, 60}, {5, 10, 15}, {1}, cfg);
    EXPECT_EQ(grid.size(), 15u);
    EXPECT_EQ(convergence_sweep(data, {20, 30, 40, 50, 60}, {5}, {1}, cfg).size(), 5u);
    EXPECT_EQ(grid[3].subset_size, 30u);
    EXPECT_EQ(grid[3].iterations, 5u);
    EXPECT_THROW(convergence_sweep(data, {61}, {5}, {1}, cfg), ArgumentError);
    EXPECT_EQ(convergence_charts(grid).size(), 4u);
}

TEST(Reports, CsvRowsAndUndefinedMetric) {
    RunReport r;
    r.method = "gd_anfis";
    r.seed = 4;
    r.subset_size = 10;
    r.iterations = 3;
    r.train_cm = {0, 0, 6, 1};
    r.test_cm = {2, 1, 0, 0};
    r.wall_seconds = 1.5;
    const std::string csv = report_csv({r}, false);
    EXPECT_EQ(csv, report_csv_header() + "\n" +
                       "gd_anfis,4,train,10,3,0.8571428571428571,,0.8571428571428571,0,0,6,1,0\n"
                       "gd_anfis,4,test,10,3,0.66666666666666663,0.66666666666666663,,2,1,0,0,0\n");
    EXPECT_NE(report_csv({r}, true).find(",1.5\n"), std::string::npos);
}

TEST(Reports, SummaryTableLayout) {
    std::vector<RunReport> reports;
    for (const char* m : {"ica_anfis", "gd_anfis", "aco_anfis"})
        for (int s = 0; s < 2; ++s) {
            RunReport r;
            r.method = m;
            r.train_cm = {9, 1, 10, 0};
            r.test_cm = {4, 1, 5, 0};
            reports.push_back(r);
        }
    const auto rows = summarize(reports);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_DOUBLE_EQ(rows[0].test_sensitivity, 0.8);
    EXPECT_DOUBLE_EQ(rows[2].train_accuracy, 0.95);
    const std::string t = summary_table(rows);
    EXPECT_NE(t.find("SENSITIVITY RESULTS"), std::string::npos);
    EXPECT_NE(t.find("ACCURACY RESULTS"), std::string::npos);
    EXPECT_NE(t.find("95.0%"), std::string::npos);
    EXPECT_NE(t.find("80.0%"), std::string::npos);
}

TEST(Svg, RendersSeriesAndEscapes) {
    LineChart c{"a < b & c", "x", "y", {{"one", {0, 1, 2}, {1, 0.5, 0.25}}, {"two", {0, 2}, {0, 1}}}};
    const std::string svg = render_svg(c);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("a &lt; b &amp; c"), std::string::npos);
    EXPECT_EQ(std::count(svg.begin(), svg.end(), '\n') > 5, true);
    EXPECT_NE(svg.find("<polyline"), std::string::npos);
    EXPECT_EQ(svg, render_svg(c));
}
