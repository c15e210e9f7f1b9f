#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dermfuzz/anfis/model.hpp"
#include "dermfuzz/anfis/training.hpp"
#include "dermfuzz/core/error.hpp"
#include "dermfuzz/optimize/aco.hpp"
#include "dermfuzz/optimize/ica.hpp"
#include "dermfuzz/optimize/objective.hpp"

namespace dermfuzz {

/// The three ways of fitting the ANFIS parameters that get compared.
enum class Method { ica_anfis, gd_anfis, aco_anfis };

inline std::string_view method_name(Method m) {
    switch (m) {
        case Method::ica_anfis: return "ica_anfis";
        case Method::gd_anfis: return "gd_anfis";
        case Method::aco_anfis: return "aco_anfis";
    }
    return "unknown";
}

inline Method parse_method(std::string_view s) {
    if (s == "ica_anfis" || s == "ica") return Method::ica_anfis;
    if (s == "gd_anfis" || s == "gd") return Method::gd_anfis;
    if (s == "aco_anfis" || s == "aco") return Method::aco_anfis;
    throw ArgumentError("unknown method '" + std::string(s) + "' (expected ica, gd or aco)");
}

struct GradientConfig {
    double learning_rate = 0.1;
    std::size_t iterations = 200;
};

/// Box the metaheuristics search in (standardized inputs).
struct AnfisBounds {
    double center = 3.0;
    double sigma_max = 5.0;
    double consequent = 10.0;
};

struct TrainerConfig {
    std::size_t n_rules = 10;
    IcaConfig ica;
    AcoConfig aco;
    GradientConfig gd;
    AnfisBounds bounds;
    /// Start the metaheuristic population from the clustering-initialized model.
    bool seed_population = true;
};

/// ANFIS training loss over a flat parameter vector, as a bounded objective.
inline Objective anfis_objective(const AnfisShape& shape, const TrainingSet& data, const AnfisBounds& b) {
    Objective obj;
    obj.name = "anfis_mse";
    obj.dim = shape.param_count();
    obj.lo.resize(obj.dim);
    obj.hi.resize(obj.dim);
    for (std::size_t k = 0; k < obj.dim; ++k) {
        if (k < shape.sigmas_offset()) {
            obj.lo[k] = -b.center, obj.hi[k] = b.center;
        } else if (k < shape.consequents_offset()) {
            obj.lo[k] = kSigmaMin, obj.hi[k] = b.sigma_max;
        } else {
            obj.lo[k] = -b.consequent, obj.hi[k] = b.consequent;
        }
    }
    obj.eval = [shape, &data](std::span<const double> p) { return anfis_loss(shape, p, data); };
    return obj;
}

struct TrainedModel {
    AnfisModel model;
    /// Training loss per iteration, initial value included.
    std::vector<double> history;
};

/// Fits `initial` to `data` with the chosen method. `seed` drives the optimizer.
inline TrainedModel train_method(Method method, const AnfisModel& initial, const TrainingSet& data,
                                 const TrainerConfig& cfg, std::uint64_t seed) {
    const AnfisShape& shape = initial.shape();
    if (method == Method::gd_anfis) {
        auto r = train_gradient(initial, data, cfg.gd.learning_rate, cfg.gd.iterations);
        return {std::move(r.model), std::move(r.loss_history)};
    }
    const Objective obj = anfis_objective(shape, data, cfg.bounds);
    std::vector<std::vector<double>> seeds;
    if (cfg.seed_population) seeds.emplace_back(initial.flatten().begin(), initial.flatten().end());
    OptimizationResult r;
    if (method == Method::ica_anfis) {
        IcaConfig ica = cfg.ica;
        ica.seed = seed;
        r = ica_run(obj, ica, seeds);
    } else {
        AcoConfig aco = cfg.aco;
        aco.seed = seed;
        r = aco_run(obj, aco, seeds);
    }
    return {AnfisModel::unflatten(shape.n_inputs, shape.n_rules, r.best_position), std::move(r.history)};
}

}  // namespace dermfuzz
