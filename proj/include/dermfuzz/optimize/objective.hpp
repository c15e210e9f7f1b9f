#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "dermfuzz/core/error.hpp"

namespace dermfuzz {

/// A bounded minimization problem. `eval` must be pure: the optimizers call it from
/// several threads at once.
struct Objective {
    std::string name;
    std::size_t dim = 0;
    std::function<double(std::span<const double>)> eval;
    std::vector<double> lo;
    std::vector<double> hi;

    void validate() const {
        if (dim == 0 || lo.size() != dim || hi.size() != dim || !eval)
            throw ArgumentError("objective '" + name + "': inconsistent dimension or bounds");
        for (std::size_t i = 0; i < dim; ++i)
            if (!(lo[i] < hi[i])) throw ArgumentError("objective '" + name + "': lower bound must be < upper bound");
    }

    void clip(std::span<double> x) const {
        for (std::size_t i = 0; i < dim; ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
    }
};

/// Result shared by the population optimizers.
struct OptimizationResult {
    std::vector<double> best_position;
    double best_cost = 0.0;
    /// Best cost so far, starting with the initial population (iterations + 1 entries).
    std::vector<double> history;
};

inline double sphere(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

inline double rastrigin(std::span<const double> x) {
    double s = 10.0 * static_cast<double>(x.size());
    for (double v : x) s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
    return s;
}

inline double rosenbrock(std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        const double b = 1.0 - x[i];
        s += 100.0 * a * a + b * b;
    }
    return s;
}

inline Objective make_benchmark(const std::string& kind, std::size_t dim) {
    double lo = 0.0, hi = 0.0;
    double (*fn)(std::span<const double>) = nullptr;
    if (kind == "sphere") {
        lo = -5.0, hi = 5.0, fn = &sphere;
    } else if (kind == "rastrigin") {
        lo = -5.12, hi = 5.12, fn = &rastrigin;
    } else if (kind == "rosenbrock") {
        lo = -5.0, hi = 10.0, fn = &rosenbrock;
    } else {
        throw ArgumentError("unknown benchmark '" + kind + "'");
    }
    return Objective{kind + "-" + std::to_string(dim), dim, fn, std::vector<double>(dim, lo),
                     std::vector<double>(dim, hi)};
}

/// sphere, rastrigin and rosenbrock in 2 and 10 dimensions.
inline std::vector<Objective> benchmarks() {
    std::vector<Objective> out;
    for (const char* kind : {"sphere", "rastrigin", "rosenbrock"})
        for (std::size_t dim : {2u, 10u}) out.push_back(make_benchmark(kind, dim));
    return out;
}

}  // namespace dermfuzz
