#pragma once

#include <cstddef>
#include <span>

#include "dermfuzz/core/error.hpp"
#include "dermfuzz/features/feature_vector.hpp"

namespace dermfuzz {

/// Counts with melanoma (class 2) as the positive class.
struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;
    std::size_t fp = 0;

    std::size_t total() const noexcept { return tp + fn + tn + fp; }
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

inline ConfusionMatrix confusion(std::span<const int> predictions, std::span<const int> labels) {
    if (predictions.size() != labels.size()) throw ArgumentError("confusion: predictions and labels differ in length");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int p = predictions[i];
        const int l = labels[i];
        if ((p != 1 && p != 2) || (l != 1 && l != 2)) throw ArgumentError("confusion: class codes must be 1 or 2");
        if (l == 2)
            (p == 2 ? cm.tp : cm.fn) += 1;
        else
            (p == 1 ? cm.tn : cm.fp) += 1;
    }
    return cm;
}

inline ConfusionMatrix confusion(std::span<const Label> predictions, std::span<const Label> labels) {
    if (predictions.size() != labels.size()) throw ArgumentError("confusion: predictions and labels differ in length");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool pos = predictions[i] == Label::melanoma;
        if (labels[i] == Label::melanoma)
            (pos ? cm.tp : cm.fn) += 1;
        else
            (pos ? cm.fp : cm.tn) += 1;
    }
    return cm;
}

/// (TP + TN) / (TP + FN + FP + TN)
inline double accuracy(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw ArgumentError("accuracy: empty confusion matrix");
    return static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.tp + cm.fn + cm.fp + cm.tn);
}

/// TP / (TP + FN)
inline double sensitivity(const ConfusionMatrix& cm) {
    if (cm.tp + cm.fn == 0) throw UndefinedMetricError("sensitivity: no positive samples");
    return static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
}

/// TN / (TN + FP); reported alongside accuracy and sensitivity.
inline double specificity(const ConfusionMatrix& cm) {
    if (cm.tn + cm.fp == 0) throw UndefinedMetricError("specificity: no negative samples");
    return static_cast<double>(cm.tn) / static_cast<double>(cm.tn + cm.fp);
}

}  // namespace dermfuzz
