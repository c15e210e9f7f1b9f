#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dermfuzz/anfis/trainers.hpp"
#include "dermfuzz/core/error.hpp"
#include "dermfuzz/segmentation/lesion_mask.hpp"

namespace dermfuzz {

/// Every knob of the pipeline, loadable from a JSON document with the same keys.
struct PipelineConfig {
    std::size_t image_size = 500;
    std::size_t median_window = 3;
    SegmentationConfig segmentation;
    bool standardize = true;
    std::size_t n_rules = 10;
    Method optimizer = Method::ica_anfis;
    IcaConfig ica;
    AcoConfig aco;
    GradientConfig gd;
    AnfisBounds bounds;
    bool seed_population = true;
    double split_fraction = 0.7;
    std::vector<std::uint64_t> seeds = {1};
    std::vector<Method> methods = {Method::ica_anfis, Method::gd_anfis, Method::aco_anfis};
    std::vector<std::size_t> subset_sizes = {50, 100, 200, 300, 400};
    std::vector<std::size_t> iteration_counts = {50, 100, 200};
    unsigned jobs = 1;
    bool record_timing = true;

    TrainerConfig trainer() const {
        TrainerConfig t;
        t.n_rules = n_rules;
        t.ica = ica;
        t.aco = aco;
        t.gd = gd;
        t.bounds = bounds;
        t.seed_population = seed_population;
        t.ica.jobs = jobs;
        t.aco.jobs = jobs;
        return t;
    }

    void validate() const {
        if (image_size == 0) throw ArgumentError("config: image_size must be >= 1");
        if (median_window == 0 || median_window % 2 == 0) throw ArgumentError("config: median_window must be odd");
        if (segmentation.morph_element == 0 || segmentation.morph_element % 2 == 0)
            throw ArgumentError("config: morph_element must be odd");
        if (n_rules == 0) throw ArgumentError("config: n_rules must be >= 1");
        if (!(split_fraction > 0.0 && split_fraction < 1.0)) throw ArgumentError("config: split_fraction must lie in (0,1)");
        if (seeds.empty()) throw ArgumentError("config: at least one seed is required");
        if (methods.empty()) throw ArgumentError("config: at least one method is required");
        ica.validate();
        aco.validate();
        if (!(gd.learning_rate > 0.0)) throw ArgumentError("config: gd.learning_rate must be positive");
    }
};

inline nlohmann::json to_json(const PipelineConfig& c) {
    std::vector<std::string> methods;
    for (Method m : c.methods) methods.emplace_back(method_name(m));
    return {
        {"image_size", c.image_size},
        {"median_window", c.median_window},
        {"segmentation",
         {{"kmeans_seed", c.segmentation.kmeans_seed},
          {"combine", c.segmentation.combine == CombineMode::intersect ? "intersect" : "union"},
          {"morph_element", c.segmentation.morph_element},
          {"kmeans_max_iter", c.segmentation.kmeans_max_iter}}},
        {"standardize", c.standardize},
        {"anfis", {{"n_rules", c.n_rules}}},
        {"optimizer", std::string(method_name(c.optimizer))},
        {"ica",
         {{"population", c.ica.population},
          {"n_empires", c.ica.n_empires},
          {"iterations", c.ica.iterations},
          {"revolution_rate", c.ica.revolution_rate},
          {"beta", c.ica.beta},
          {"xi", c.ica.xi},
          {"revolution_fraction", c.ica.revolution_fraction}}},
        {"aco",
         {{"n_ants", c.aco.n_ants},
          {"iterations", c.aco.iterations},
          {"archive_size", c.aco.archive_size},
          {"q", c.aco.q},
          {"xi", c.aco.xi}}},
        {"gd", {{"learning_rate", c.gd.learning_rate}, {"iterations", c.gd.iterations}}},
        {"bounds", {{"center", c.bounds.center}, {"sigma_max", c.bounds.sigma_max}, {"consequent", c.bounds.consequent}}},
        {"seed_population", c.seed_population},
        {"split_fraction", c.split_fraction},
        {"seeds", c.seeds},
        {"methods", methods},
        {"subset_sizes", c.subset_sizes},
        {"iteration_counts", c.iteration_counts},
        {"jobs", c.jobs},
        {"record_timing", c.record_timing},
    };
}

namespace detail {

template <typename T>
void read_key(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace detail

/// Overlays the keys present in `j` onto `base`. Unknown keys are rejected.
inline PipelineConfig config_from_json(const nlohmann::json& j, PipelineConfig c = {}) {
    static const std::vector<std::string> known = {
        "image_size", "median_window", "segmentation", "standardize", "anfis", "optimizer", "ica", "aco", "gd",
        "bounds", "seed_population", "split_fraction", "seeds", "methods", "subset_sizes", "iteration_counts", "jobs",
        "record_timing"};
    try {
        if (!j.is_object()) throw FormatError("config must be a JSON object");
        for (const auto& [key, _] : j.items())
            if (std::find(known.begin(), known.end(), key) == known.end())
                throw FormatError("unknown config key '" + key + "'");
        using detail::read_key;
        read_key(j, "image_size", c.image_size);
        read_key(j, "median_window", c.median_window);
        if (j.contains("segmentation")) {
            const auto& s = j.at("segmentation");
            read_key(s, "kmeans_seed", c.segmentation.kmeans_seed);
            read_key(s, "morph_element", c.segmentation.morph_element);
            read_key(s, "kmeans_max_iter", c.segmentation.kmeans_max_iter);
            if (s.contains("combine")) {
                const auto mode = s.at("combine").get<std::string>();
                if (mode == "intersect")
                    c.segmentation.combine = CombineMode::intersect;
                else if (mode == "union")
                    c.segmentation.combine = CombineMode::unite;
                else
                    throw FormatError("segmentation.combine must be 'intersect' or 'union'");
            }
        }
        read_key(j, "standardize", c.standardize);
        if (j.contains("anfis")) read_key(j.at("anfis"), "n_rules", c.n_rules);
        if (j.contains("optimizer")) c.optimizer = parse_method(j.at("optimizer").get<std::string>());
        if (j.contains("ica")) {
            const auto& s = j.at("ica");
            read_key(s, "population", c.ica.population);
            read_key(s, "n_empires", c.ica.n_empires);
            read_key(s, "iterations", c.ica.iterations);
            read_key(s, "revolution_rate", c.ica.revolution_rate);
            read_key(s, "beta", c.ica.beta);
            read_key(s, "xi", c.ica.xi);
            read_key(s, "revolution_fraction", c.ica.revolution_fraction);
        }
        if (j.contains("aco")) {
            const auto& s = j.at("aco");
            read_key(s, "n_ants", c.aco.n_ants);
            read_key(s, "iterations", c.aco.iterations);
            read_key(s, "archive_size", c.aco.archive_size);
            read_key(s, "q", c.aco.q);
            read_key(s, "xi", c.aco.xi);
        }
        if (j.contains("gd")) {
            read_key(j.at("gd"), "learning_rate", c.gd.learning_rate);
            read_key(j.at("gd"), "iterations", c.gd.iterations);
        }
        if (j.contains("bounds")) {
            read_key(j.at("bounds"), "center", c.bounds.center);
            read_key(j.at("bounds"), "sigma_max", c.bounds.sigma_max);
            read_key(j.at("bounds"), "consequent", c.bounds.consequent);
        }
        read_key(j, "seed_population", c.seed_population);
        read_key(j, "split_fraction", c.split_fraction);
        read_key(j, "seeds", c.seeds);
        if (j.contains("methods")) {
            c.methods.clear();
            for (const auto& m : j.at("methods")) c.methods.push_back(parse_method(m.get<std::string>()));
        }
        read_key(j, "subset_sizes", c.subset_sizes);
        read_key(j, "iteration_counts", c.iteration_counts);
        read_key(j, "jobs", c.jobs);
        read_key(j, "record_timing", c.record_timing);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("invalid config: ") + e.what());
    }
    c.validate();
    return c;
}

inline PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

}  // namespace dermfuzz
