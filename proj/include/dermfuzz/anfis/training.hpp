#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "dermfuzz/anfis/model.hpp"
#include "dermfuzz/core/error.hpp"

namespace dermfuzz {

struct GradientTrainingResult {
    AnfisModel model;
    /// Loss before the first update and after every update (iters + 1 entries).
    std::vector<double> loss_history;
};

inline constexpr double kDivergenceLoss = 1e12;

/// Plain batch gradient descent; sigmas are clamped at kSigmaMin after each step.
/// With `premises` false only the consequent block is updated.
inline GradientTrainingResult train_gradient(const AnfisModel& initial, const TrainingSet& data, double lr,
                                             std::size_t iters, bool premises = true) {
    if (!(lr > 0.0)) throw ArgumentError("train_gradient: learning rate must be positive");
    const AnfisShape& s = initial.shape();
    std::vector<double> p(initial.flatten().begin(), initial.flatten().end());
    GradientTrainingResult result{initial, {}};
    result.loss_history.reserve(iters + 1);

    auto current = [&] { return AnfisModel::unflatten(s.n_inputs, s.n_rules, p); };
    auto record = [&](double l) {
        if (!std::isfinite(l) || l > kDivergenceLoss)
            throw TrainingDivergedError("gradient descent diverged (loss " + std::to_string(l) +
                                        "); try a smaller learning rate than " + std::to_string(lr));
        result.loss_history.push_back(l);
    };

    record(anfis_loss(s, p, data));
    for (std::size_t it = 0; it < iters; ++it) {
        const auto g = gradient(current(), data);
        const std::size_t first = premises ? 0 : s.consequents_offset();
        for (std::size_t k = first; k < p.size(); ++k) p[k] -= lr * g[k];
        for (std::size_t k = s.sigmas_offset(); k < s.consequents_offset(); ++k) p[k] = std::max(p[k], kSigmaMin);
        for (double v : p)
            if (!std::isfinite(v)) throw TrainingDivergedError("gradient descent produced non-finite parameters; try a smaller learning rate");
        record(anfis_loss(s, p, data));
    }
    result.model = current();
    return result;
}

}  // namespace dermfuzz
