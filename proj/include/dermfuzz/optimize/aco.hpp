#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

#include "dermfuzz/core/error.hpp"
#include "dermfuzz/core/parallel.hpp"
#include "dermfuzz/core/rng.hpp"
#include "dermfuzz/optimize/ica.hpp"
#include "dermfuzz/optimize/objective.hpp"

namespace dermfuzz {

struct AcoConfig {
    std::size_t n_ants = 20;
    std::size_t iterations = 200;
    std::size_t archive_size = 50;
    /// Locality of the rank weights.
    double q = 0.5;
    /// Spread of the sampling kernels.
    double xi = 0.85;
    std::uint64_t seed = 0;
    unsigned jobs = 1;

    void validate() const {
        if (n_ants < 1) throw ArgumentError("aco: n_ants must be >= 1");
        if (archive_size < n_ants) throw ArgumentError("aco: archive_size must be >= n_ants");
        if (!(q > 0.0)) throw ArgumentError("aco: q must be positive");
        if (!(xi > 0.0)) throw ArgumentError("aco: xi must be positive");
    }
};

inline constexpr double kAcoSigmaFloor = 1e-12;

struct AcoState {
    /// Sorted by cost ascending (stable).
    std::vector<Country> archive;
    /// Rank selection probabilities, one per archive slot.
    std::vector<double> rank_probability;
    /// One stream per ant index.
    std::vector<Rng> streams;
    std::size_t iteration = 0;
};

/// Gaussian rank weights exp(-(l-1)^2 / (2 q^2 k^2)), normalized to sum 1.
inline std::vector<double> aco_rank_probabilities(std::size_t k, double q) {
    std::vector<double> w(k);
    const double denom = 2.0 * q * q * static_cast<double>(k) * static_cast<double>(k);
    double total = 0.0;
    for (std::size_t l = 0; l < k; ++l) {
        w[l] = std::exp(-static_cast<double>(l * l) / denom);
        total += w[l];
    }
    for (double& v : w) v /= total;
    return w;
}

namespace detail {

inline void sort_archive(std::vector<Country>& archive) {
    std::stable_sort(archive.begin(), archive.end(), [](const Country& a, const Country& b) { return a.cost < b.cost; });
}

}  // namespace detail

inline AcoState aco_init(const Objective& obj, const AcoConfig& cfg, std::span<const std::vector<double>> seeds = {}) {
    obj.validate();
    cfg.validate();
    AcoState st;
    for (std::size_t a = 0; a < cfg.n_ants; ++a) st.streams.push_back(make_stream(cfg.seed, a + 1));
    Rng init = make_stream(cfg.seed, 0);
    st.archive.resize(cfg.archive_size);
    for (std::size_t i = 0; i < cfg.archive_size; ++i) {
        auto& pos = st.archive[i].position;
        if (i < seeds.size()) {
            if (seeds[i].size() != obj.dim) throw ArgumentError("aco: seed position has the wrong dimension");
            pos = seeds[i];
            obj.clip(pos);
        } else {
            pos.resize(obj.dim);
            for (std::size_t j = 0; j < obj.dim; ++j) pos[j] = uniform(init, obj.lo[j], obj.hi[j]);
        }
    }
    parallel_for(st.archive.size(), cfg.jobs, [&](std::size_t i) { st.archive[i].cost = obj.eval(st.archive[i].position); });
    detail::sort_archive(st.archive);
    st.rank_probability = aco_rank_probabilities(cfg.archive_size, cfg.q);
    return st;
}

/// One generation: every ant samples each coordinate from the archive's Gaussian
/// mixture (kernel picked by rank, std = xi * mean absolute distance to the other
/// entries, floored at 1e-12); the ants are merged into the archive, which is
/// re-sorted and truncated.
inline void aco_step(AcoState& st, const Objective& obj, const AcoConfig& cfg) {
    const std::size_t k = st.archive.size();
    const std::size_t dim = obj.dim;
    std::vector<Country> ants(cfg.n_ants);
    for (std::size_t a = 0; a < cfg.n_ants; ++a) {
        Rng& rng = st.streams[a];
        auto& x = ants[a].position;
        x.resize(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            const double target = uniform01(rng);
            std::size_t l = k - 1;
            double acc = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                acc += st.rank_probability[i];
                if (acc > target) {
                    l = i;
                    break;
                }
            }
            const double centre = st.archive[l].position[j];
            double spread = 0.0;
            if (k > 1) {
                for (const Country& e : st.archive) spread += std::abs(e.position[j] - centre);
                spread = cfg.xi * spread / static_cast<double>(k - 1);
            }
            spread = std::max(spread, kAcoSigmaFloor);
            x[j] = centre + spread * standard_normal(rng);
        }
        obj.clip(x);
    }
    parallel_for(ants.size(), cfg.jobs, [&](std::size_t a) { ants[a].cost = obj.eval(ants[a].position); });
    for (auto& a : ants) st.archive.push_back(std::move(a));
    detail::sort_archive(st.archive);
    st.archive.resize(k);
    ++st.iteration;
}

inline OptimizationResult aco_run(const Objective& obj, const AcoConfig& cfg,
                                  std::span<const std::vector<double>> seeds = {}) {
    AcoState st = aco_init(obj, cfg, seeds);
    OptimizationResult r;
    r.history.reserve(cfg.iterations + 1);
    r.history.push_back(st.archive.front().cost);
    for (std::size_t it = 0; it < cfg.iterations; ++it) {
        aco_step(st, obj, cfg);
        r.history.push_back(st.archive.front().cost);
    }
    r.best_position = st.archive.front().position;
    r.best_cost = st.archive.front().cost;
    return r;
}

}  // namespace dermfuzz
