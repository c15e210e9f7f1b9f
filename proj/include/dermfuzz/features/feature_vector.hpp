#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dermfuzz/core/error.hpp"
#include "dermfuzz/features/color.hpp"
#include "dermfuzz/features/geometry.hpp"
#include "dermfuzz/features/shape.hpp"
#include "dermfuzz/imaging/filters.hpp"

namespace dermfuzz {

inline constexpr std::size_t kFeatureCount = 13;

inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "diameter", "sphericity", "irregularity", "asymmetry", "edge_uniformity", "var_r",      "var_g",
    "var_b",    "ratio_r",    "ratio_g",      "ratio_b",   "brightness_diff", "color_count",
};

/// Class codes: 1 = normal mole, 2 = melanoma (the positive class).
enum class Label : int { benign = 1, melanoma = 2 };

inline Label label_from_code(long code) {
    if (code != 1 && code != 2) throw ArgumentError("class label must be 1 or 2, got " + std::to_string(code));
    return static_cast<Label>(code);
}

inline int label_code(Label l) { return static_cast<int>(l); }

struct FeatureVector {
    std::array<double, kFeatureCount> values{};
    std::optional<Label> label;

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// All 13 features of one segmented lesion, in kFeatureNames order.
inline FeatureVector extract_features(const RgbRaster& img, const LesionMask& mask) {
    if (img.width() != mask.width || img.height() != mask.height)
        throw ArgumentError("extract_features: image and mask dimensions differ");
    const GrayRaster gray = to_gray(img);
    const MaskGeometry geom = mask_geometry(mask);
    const ColorStats color = color_stats(img, mask);

    FeatureVector fv;
    fv.values = {
        diameter(geom),
        sphericity(geom),
        irregularity_index(geom),
        asymmetry(mask, geom),
        edge_uniformity(mask, gray),
        color.variance[0],
        color.variance[1],
        color.variance[2],
        color.ratio[0],
        color.ratio[1],
        color.ratio[2],
        brightness_difference(gray, mask),
        color.color_count,
    };
    for (double v : fv.values)
        if (!std::isfinite(v)) throw ArgumentError("extract_features: non-finite feature value");
    return fv;
}

// ---------------------------------------------------------------------------
// CSV persistence

inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string feature_csv_header() {
    std::string h;
    for (auto name : kFeatureNames) {
        h += name;
        h += ',';
    }
    return h + "label";
}

inline std::string feature_csv_row(const FeatureVector& fv) {
    std::string row;
    for (double v : fv.values) {
        row += format_real(v);
        row += ',';
    }
    if (fv.label) row += std::to_string(label_code(*fv.label));
    return row;
}

/// Parses a real; '/' is accepted as a decimal separator ("64/15905" -> 64.15905).
inline double parse_real(std::string_view text) {
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t first = 0;
    while (first < s.size() && std::isspace(static_cast<unsigned char>(s[first]))) ++first;
    s.erase(0, first);
    for (char& c : s)
        if (c == '/') c = '.';
    if (s.empty()) throw FormatError("empty numeric field");
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v)) throw FormatError("invalid number '" + std::string(text) + "'");
    return v;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

inline void write_feature_csv(const std::vector<FeatureVector>& rows, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write feature CSV: " + path.string());
    out << feature_csv_header() << '\n';
    for (const auto& r : rows) out << feature_csv_row(r) << '\n';
    if (!out) throw IoError("error writing feature CSV: " + path.string());
}

/// Reads a feature CSV; the header must match exactly. Errors name the 1-based line.
inline std::vector<FeatureVector> read_feature_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open feature CSV: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw FormatError(path.string() + ": empty feature CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != feature_csv_header())
        throw FormatError(path.string() + ": unexpected header, expected '" + feature_csv_header() + "'");
    std::vector<FeatureVector> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != kFeatureCount + 1)
            throw FormatError(path.string() + ": row " + std::to_string(line_no) + " has " +
                              std::to_string(fields.size()) + " fields, expected " + std::to_string(kFeatureCount + 1));
        FeatureVector fv;
        try {
            for (std::size_t j = 0; j < kFeatureCount; ++j) fv.values[j] = parse_real(fields[j]);
            if (!fields.back().empty()) fv.label = label_from_code(std::lround(parse_real(fields.back())));
        } catch (const Error& e) {
            throw FormatError(path.string() + ": row " + std::to_string(line_no) + ": " + e.what());
        }
        rows.push_back(fv);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Standardization

struct FeatureScaling {
    std::array<double, kFeatureCount> mean{};
    std::array<double, kFeatureCount> std{};

    FeatureVector apply(const FeatureVector& fv) const {
        FeatureVector out = fv;
        for (std::size_t j = 0; j < kFeatureCount; ++j) out.values[j] = (fv.values[j] - mean[j]) / std[j];
        return out;
    }

    std::vector<FeatureVector> apply(const std::vector<FeatureVector>& rows) const {
        std::vector<FeatureVector> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(apply(r));
        return out;
    }
};

/// Population z-score statistics, accumulated in index order. A zero-variance
/// feature records std = 1 so it standardizes to 0.
inline FeatureScaling fit_scaling(const std::vector<FeatureVector>& train) {
    if (train.size() < 2) throw ArgumentError("standardize: need at least 2 training vectors");
    FeatureScaling s;
    const double n = static_cast<double>(train.size());
    for (const auto& r : train)
        for (std::size_t j = 0; j < kFeatureCount; ++j) s.mean[j] += r.values[j];
    for (auto& m : s.mean) m /= n;
    std::array<double, kFeatureCount> ss{};
    for (const auto& r : train)
        for (std::size_t j = 0; j < kFeatureCount; ++j) {
            const double d = r.values[j] - s.mean[j];
            ss[j] += d * d;
        }
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
        bool constant = true;
        for (const auto& r : train) constant = constant && r.values[j] == train.front().values[j];
        if (constant) {
            s.mean[j] = train.front().values[j];
            s.std[j] = 1.0;
            continue;
        }
        const double sd = std::sqrt(ss[j] / n);
        s.std[j] = sd > 0.0 ? sd : 1.0;
    }
    return s;
}

struct Standardized {
    std::vector<FeatureVector> train;
    std::vector<FeatureVector> apply_to;
    FeatureScaling scaling;
};

inline Standardized standardize(const std::vector<FeatureVector>& train, const std::vector<FeatureVector>& apply_to) {
    Standardized out;
    out.scaling = fit_scaling(train);
    out.train = out.scaling.apply(train);
    out.apply_to = out.scaling.apply(apply_to);
    return out;
}

}  // namespace dermfuzz
