#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>

#include "dermfuzz/pipeline/commands.hpp"
#include "support.hpp"

using namespace dermfuzz;
using namespace testing_support;

namespace {

PipelineConfig quick_config() {
    PipelineConfig cfg;
    cfg.image_size = 96;
    cfg.n_rules = 3;
    cfg.ica.population = 30;
    cfg.ica.n_empires = 3;
    cfg.ica.iterations = 10;
    cfg.aco.iterations = 10;
    cfg.gd.iterations = 10;
    cfg.record_timing = false;
    return cfg;
}

std::filesystem::path write_blob_csv(const std::filesystem::path& dir, std::size_t per_class, std::uint64_t seed) {
    write_feature_csv(blob_dataset(per_class, seed), dir / "features.csv");
    return dir / "features.csv";
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(DERMFUZZ_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST(Manifest, ReadResolvesRelativePathsAndRejectsDuplicates) {
    const auto dir = scratch_dir("manifest");
    std::ofstream(dir / "m.csv") << "# source: unit test\npath,label\na.ppm,1\nsub/b.ppm,2\n";
    const Manifest m = read_manifest(dir / "m.csv");
    ASSERT_EQ(m.entries.size(), 2u);
    EXPECT_EQ(m.source, "unit test");
    EXPECT_EQ(m.entries[1].image_path, dir / "sub/b.ppm");
    EXPECT_EQ(m.entries[1].label, Label::melanoma);

    std::ofstream(dir / "dup.csv") << "path,label\na.ppm,1\n./a.ppm,2\n";
    EXPECT_THROW(read_manifest(dir / "dup.csv"), FormatError);
    std::ofstream(dir / "bad.csv") << "path,label\na.ppm,3\n";
    EXPECT_THROW(read_manifest(dir / "bad.csv"), FormatError);
    EXPECT_THROW(read_manifest(dir / "missing.csv"), IoError);
}

TEST(Extract, TwoImagesGiveTwoRows) {
    const auto dir = scratch_dir("extract_two");
    generate_synthetic_dataset(dir / "data", 1, 5, 96);
    const auto s = cmd_extract(dir / "data" / "manifest.csv", quick_config(), dir / "out");
    EXPECT_EQ(s.rows, 2u);
    EXPECT_EQ(s.failures, 0u);
    const auto rows = read_feature_csv(s.features_csv);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].label, Label::benign);
    EXPECT_EQ(rows[1].label, Label::melanoma);
    EXPECT_EQ(slurp(s.errors_csv), "path,error\n");
}

TEST(Extract, CorruptImageIsLoggedAndSkipped) {
    const auto dir = scratch_dir("extract_corrupt");
    Manifest m = generate_synthetic_dataset(dir / "data", 1, 6, 96);
    std::ofstream(dir / "data" / "broken.ppm") << "P6\n96 96\n255\nxx";
    m.entries.insert(m.entries.begin() + 1, {dir / "data" / "broken.ppm", Label::benign});
    write_manifest(m, dir / "data" / "manifest.csv");
    const auto s = cmd_extract(dir / "data" / "manifest.csv", quick_config(), dir / "out");
    EXPECT_EQ(s.rows, 2u);
    EXPECT_EQ(s.failures, 1u);
    const std::string errors = slurp(s.errors_csv);
    EXPECT_NE(errors.find("broken.ppm"), std::string::npos);
    EXPECT_EQ(std::count(errors.begin(), errors.end(), '\n'), 2);
}

TEST(Extract, AllFailingIsFatal) {
    const auto dir = scratch_dir("extract_allbad");
    std::ofstream(dir / "m.csv") << "path,label\nnope.ppm,1\n";
    EXPECT_THROW(cmd_extract(dir / "m.csv", quick_config(), dir / "out"), Error);
    EXPECT_TRUE(std::filesystem::exists(dir / "out" / "errors.csv"));
}

TEST(Extract, RerunIsByteIdenticalAcrossJobCounts) {
    const auto dir = scratch_dir("extract_det");
    generate_synthetic_dataset(dir / "data", 3, 7, 96);
    auto cfg = quick_config();
    cmd_extract(dir / "data" / "manifest.csv", cfg, dir / "a", true);
    cfg.jobs = 3;
    cmd_extract(dir / "data" / "manifest.csv", cfg, dir / "b");
    EXPECT_EQ(slurp(dir / "a" / "features.csv"), slurp(dir / "b" / "features.csv"));
    EXPECT_TRUE(std::filesystem::exists(dir / "a" / "masks" / "lesion_0000.png"));
}

TEST(Train, BothOptimizersProduceLoadableModels) {
    const auto dir = scratch_dir("train");
    const auto csv = write_blob_csv(dir, 30, 1);
    for (const char* opt : {"ica", "gd", "aco"}) {
        auto cfg = quick_config();
        cfg.optimizer = parse_method(opt);
        const auto out = dir / opt;
        const auto s = cmd_train(csv, cfg, out);
        const ModelBundle b = load_model(s.model_path);
        EXPECT_EQ(b.model.n_inputs(), kFeatureCount);
        EXPECT_EQ(b.model.n_rules(), 3u);
        ASSERT_TRUE(b.scaling.has_value());
        const std::string conv = slurp(out / "convergence.csv");
        EXPECT_EQ(conv.rfind("iteration,best_cost\n", 0), 0u);
        EXPECT_EQ(std::count(conv.begin(), conv.end(), '\n'), 12);
        EXPECT_TRUE(std::filesystem::exists(out / "train_report.csv"));
    }
}

TEST(Train, ReloadReproducesTestMetrics) {
    const auto dir = scratch_dir("train_reload");
    const auto csv = write_blob_csv(dir, 30, 2);
    const auto cfg = quick_config();
    const auto s = cmd_train(csv, cfg, dir / "out");
    const auto reports = evaluate_saved_model(read_feature_csv(csv), load_model(s.model_path), cfg);
    ASSERT_EQ(reports.size(), 1u);
    EXPECT_EQ(reports[0].test_cm, s.report.test_cm);
    EXPECT_EQ(reports[0].train_cm, s.report.train_cm);
}

TEST(Train, MalformedRowIsFatalWithRowNumber) {
    const auto dir = scratch_dir("train_bad");
    std::ofstream(dir / "f.csv") << feature_csv_header() << "\n1,2\n";
    try {
        cmd_train(dir / "f.csv", quick_config(), dir / "out");
        FAIL();
    } catch (const FormatError& e) {
        EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
    }
}

TEST(Evaluate, PerfectClassifierFixture) {
    const auto dir = scratch_dir("eval_perfect");
    auto rows = blob_dataset(10, 3);
    for (auto& r : rows) r.values[0] = *r.label == Label::melanoma ? 1.0 : 0.0;
    write_feature_csv(rows, dir / "f.csv");
    AnfisModel m(kFeatureCount, 1);
    m.consequent(0, 0) = 1.0;
    save_model({m, std::nullopt}, dir / "m.json");
    const auto s = cmd_evaluate(dir / "f.csv", dir / "m.json", quick_config(), dir / "out");
    ASSERT_EQ(s.reports.size(), 1u);
    EXPECT_EQ(s.reports[0].test_accuracy(), 1.0);
    EXPECT_EQ(s.reports[0].train_accuracy(), 1.0);
    EXPECT_NE(slurp(dir / "out" / "report.csv").find(",test,20,0,1,1,1,"), std::string::npos);
}

TEST(Evaluate, DimensionMismatchNamesBothCounts) {
    const auto dir = scratch_dir("eval_dim");
    const auto csv = write_blob_csv(dir, 5, 1);
    save_model({AnfisModel(7, 2), std::nullopt}, dir / "m.json");
    try {
        cmd_evaluate(csv, dir / "m.json", quick_config(), dir / "out");
        FAIL();
    } catch (const ArgumentError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("7"), std::string::npos);
        EXPECT_NE(msg.find("13"), std::string::npos);
    }
}

TEST(Evaluate, ThreeMethodComparisonLayout) {
    const auto dir = scratch_dir("eval_compare");
    const auto csv = write_blob_csv(dir, 20, 4);
    auto cfg = quick_config();
    cfg.seeds = {1, 2};
    const auto s = cmd_evaluate(csv, std::nullopt, cfg, dir / "out");
    EXPECT_EQ(s.reports.size(), 6u);
    for (const char* m : {"ica_anfis", "gd_anfis", "aco_anfis"}) EXPECT_NE(s.table.find(m), std::string::npos);
    const std::string report = slurp(dir / "out" / "report.csv");
    EXPECT_EQ(std::count(report.begin(), report.end(), '\n'), 13);
    EXPECT_TRUE(std::filesystem::exists(dir / "out" / "loss.svg"));
    EXPECT_EQ(slurp(dir / "out" / "summary.txt"), s.table);

    cmd_evaluate(csv, std::nullopt, cfg, dir / "again");
    EXPECT_EQ(report, slurp(dir / "again" / "report.csv"));
}

TEST(Convergence, CustomSingleCell) {
    const auto dir = scratch_dir("conv");
    const auto csv = write_blob_csv(dir, 30, 5);
    auto cfg = quick_config();
    cfg.subset_sizes = {50};
    cfg.iteration_counts = {5};
    const auto s = cmd_convergence(csv, cfg, dir / "out");
    EXPECT_EQ(s.grid.size(), 1u);
    for (const char* f : {"convergence_grid.csv", "train_accuracy.svg", "train_sensitivity.svg", "test_accuracy.svg",
                          "test_sensitivity.svg"})
        EXPECT_TRUE(std::filesystem::exists(dir / "out" / f)) << f;
    cmd_convergence(csv, cfg, dir / "again");
    EXPECT_EQ(slurp(dir / "out" / "convergence_grid.csv"), slurp(dir / "again" / "convergence_grid.csv"));
    cfg.subset_sizes = {61};
    EXPECT_THROW(cmd_convergence(csv, cfg, dir / "big"), ArgumentError);
}

TEST(Config, JsonOverlayAndValidation) {
    const auto j = nlohmann::json::parse(R"({"ica": {"population": 50, "n_empires": 4}, "seeds": [3, 4],
        "methods": ["gd", "ica"], "segmentation": {"combine": "union"}})");
    const PipelineConfig c = config_from_json(j);
    EXPECT_EQ(c.ica.population, 50u);
    EXPECT_EQ(c.ica.n_empires, 4u);
    EXPECT_EQ(c.ica.iterations, 200u);
    EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{3, 4}));
    EXPECT_EQ(c.methods, (std::vector<Method>{Method::gd_anfis, Method::ica_anfis}));
    EXPECT_EQ(c.segmentation.combine, CombineMode::unite);
    EXPECT_EQ(config_from_json(to_json(c)).ica.population, 50u);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"populaton": 3})")), FormatError);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"median_window": 4})")), ArgumentError);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"split_fraction": "a"})")), FormatError);
}

TEST(Binary, ExitCodes) {
    const auto dir = scratch_dir("binary");
    const auto csv = write_blob_csv(dir, 15, 6);
    std::ofstream(dir / "cfg.json") << R"({"anfis": {"n_rules": 2}, "ica": {"population": 20, "n_empires": 2,
        "iterations": 5}, "record_timing": false})";
    const std::string common = "--config " + (dir / "cfg.json").string() + " --seed 3 --out ";
    EXPECT_EQ(run_cli("train --features " + csv.string() + " " + common + (dir / "t").string()), 0);
    EXPECT_TRUE(std::filesystem::exists(dir / "t" / "model.json"));
    EXPECT_EQ(run_cli("evaluate --features " + csv.string() + " --model " + (dir / "t" / "model.json").string() + " " +
                      common + (dir / "e").string()),
              0);
    EXPECT_EQ(run_cli("demo-synthetic --per-class 1 --image-size 64 --out " + (dir / "d").string()), 0);
    EXPECT_EQ(run_cli("extract --manifest " + (dir / "d" / "manifest.csv").string() + " --out " + (dir / "x").string()), 0);
    EXPECT_NE(run_cli("train --features " + (dir / "nope.csv").string() + " --out " + (dir / "n").string()), 0);
    EXPECT_NE(run_cli("train"), 0);
    EXPECT_NE(run_cli("bogus"), 0);
}
