#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dermfuzz/anfis/model.hpp"
#include "dermfuzz/core/error.hpp"
#include "dermfuzz/features/feature_vector.hpp"

namespace dermfuzz {

inline constexpr int kModelFormatVersion = 1;

/// A trained model plus the standardization it expects its inputs in.
struct ModelBundle {
    AnfisModel model;
    std::optional<FeatureScaling> scaling;
};

inline nlohmann::json model_to_json(const ModelBundle& bundle) {
    const AnfisModel& m = bundle.model;
    nlohmann::json centers = nlohmann::json::array(), sigmas = nlohmann::json::array(),
                   consequents = nlohmann::json::array();
    for (std::size_t i = 0; i < m.n_rules(); ++i) {
        std::vector<double> c, s, q;
        for (std::size_t j = 0; j < m.n_inputs(); ++j) {
            c.push_back(m.center(i, j));
            s.push_back(m.sigma(i, j));
        }
        for (std::size_t j = 0; j <= m.n_inputs(); ++j) q.push_back(m.consequent(i, j));
        centers.push_back(c);
        sigmas.push_back(s);
        consequents.push_back(q);
    }
    nlohmann::json doc = {
        {"format_version", kModelFormatVersion},
        {"n_inputs", m.n_inputs()},
        {"n_rules", m.n_rules()},
        {"centers", centers},
        {"sigmas", sigmas},
        {"consequents", consequents},
    };
    if (bundle.scaling) {
        doc["feature_means"] = bundle.scaling->mean;
        doc["feature_stds"] = bundle.scaling->std;
    } else {
        doc["feature_means"] = nullptr;
        doc["feature_stds"] = nullptr;
    }
    std::vector<std::string> order(kFeatureNames.begin(), kFeatureNames.end());
    doc["feature_order"] = order;
    return doc;
}

inline ModelBundle model_from_json(const nlohmann::json& doc) {
    try {
        if (doc.at("format_version").get<int>() != kModelFormatVersion)
            throw FormatError("unsupported model format_version " + doc.at("format_version").dump());
        const auto n_inputs = doc.at("n_inputs").get<std::size_t>();
        const auto n_rules = doc.at("n_rules").get<std::size_t>();
        const auto centers = doc.at("centers").get<std::vector<std::vector<double>>>();
        const auto sigmas = doc.at("sigmas").get<std::vector<std::vector<double>>>();
        const auto consequents = doc.at("consequents").get<std::vector<std::vector<double>>>();
        if (centers.size() != n_rules || sigmas.size() != n_rules || consequents.size() != n_rules)
            throw FormatError("model rule blocks do not match n_rules");
        std::vector<double> flat;
        for (const auto* block : {&centers, &sigmas})
            for (const auto& row : *block) {
                if (row.size() != n_inputs) throw FormatError("model premise row has wrong length");
                flat.insert(flat.end(), row.begin(), row.end());
            }
        for (const auto& row : consequents) {
            if (row.size() != n_inputs + 1) throw FormatError("model consequent row has wrong length");
            flat.insert(flat.end(), row.begin(), row.end());
        }
        ModelBundle bundle{AnfisModel::unflatten(n_inputs, n_rules, flat), std::nullopt};
        if (doc.contains("feature_means") && !doc.at("feature_means").is_null()) {
            FeatureScaling s;
            s.mean = doc.at("feature_means").get<std::array<double, kFeatureCount>>();
            s.std = doc.at("feature_stds").get<std::array<double, kFeatureCount>>();
            bundle.scaling = s;
        }
        return bundle;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed model document: ") + e.what());
    } catch (const ArgumentError& e) {
        throw FormatError(std::string("invalid model parameters: ") + e.what());
    }
}

inline void save_model(const ModelBundle& bundle, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write model: " + path.string());
    out << model_to_json(bundle).dump(2) << '\n';
    if (!out) throw IoError("error writing model: " + path.string());
}

inline ModelBundle load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model: " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    return model_from_json(doc);
}

}  // namespace dermfuzz
