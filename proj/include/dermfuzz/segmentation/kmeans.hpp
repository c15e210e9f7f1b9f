#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "dermfuzz/core/error.hpp"
#include "dermfuzz/core/rng.hpp"

namespace dermfuzz {

/// Non-owning view of `count` samples of dimension `dim`, stored row-major.
struct SampleView {
    std::span<const double> data;
    std::size_t dim = 0;

    std::size_t count() const noexcept { return dim == 0 ? 0 : data.size() / dim; }
    std::span<const double> operator[](std::size_t i) const { return data.subspan(i * dim, dim); }
};

struct KMeansResult {
    std::vector<std::vector<double>> centroids;
    std::vector<std::size_t> assignments;
    double inertia = 0.0;
    /// Inertia after every assignment step; the last entry equals `inertia`.
    std::vector<double> inertia_history;
    std::size_t iterations = 0;
};

namespace detail {

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double t = a[j] - b[j];
        d += t * t;
    }
    return d;
}

// Nearest centroid per sample (ties to the lower index); returns the inertia.
inline double assign_nearest(const SampleView& samples, const std::vector<std::vector<double>>& centroids,
                             std::vector<std::size_t>& assignments) {
    double inertia = 0.0;
    for (std::size_t i = 0; i < samples.count(); ++i) {
        const auto x = samples[i];
        std::size_t best = 0;
        double best_d = squared_distance(x, centroids[0]);
        for (std::size_t c = 1; c < centroids.size(); ++c) {
            const double d = squared_distance(x, centroids[c]);
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        assignments[i] = best;
        inertia += best_d;
    }
    return inertia;
}

// k-means++ seeding: first centroid uniform, the rest proportional to D^2.
inline std::vector<std::vector<double>> seed_plus_plus(const SampleView& samples, std::size_t k, Rng& rng) {
    const std::size_t n = samples.count();
    std::vector<std::vector<double>> centroids;
    centroids.reserve(k);
    auto take = [&](std::size_t i) {
        const auto s = samples[i];
        centroids.emplace_back(s.begin(), s.end());
    };
    take(uniform_index(rng, n));
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    while (centroids.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], squared_distance(samples[i], centroids.back()));
            total += d2[i];
        }
        std::size_t pick = n - 1;
        if (total > 0.0) {
            const double target = uniform01(rng) * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc > target) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = uniform_index(rng, n);
        }
        take(pick);
    }
    return centroids;
}

}  // namespace detail

/// Lloyd's algorithm from k-means++ seeds. Stops when assignments stop changing or
/// after max_iter update steps. A cluster that empties is reseeded at the sample
/// farthest from its former centroid.
inline KMeansResult kmeans(const SampleView& samples, std::size_t k, std::size_t max_iter, std::uint64_t seed) {
    if (k == 0) throw ArgumentError("kmeans: k must be >= 1");
    if (samples.dim == 0 || samples.data.size() % samples.dim != 0)
        throw ArgumentError("kmeans: samples must share one non-zero dimension");
    const std::size_t n = samples.count();
    if (n < k) throw ArgumentError("kmeans: fewer samples than clusters");

    Rng rng = make_stream(seed, 0);
    KMeansResult result;
    result.centroids = detail::seed_plus_plus(samples, k, rng);
    result.assignments.assign(n, 0);
    result.inertia = detail::assign_nearest(samples, result.centroids, result.assignments);
    result.inertia_history.push_back(result.inertia);

    std::vector<std::size_t> previous;
    std::vector<double> sums(k * samples.dim);
    std::vector<std::size_t> counts(k);
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t c = result.assignments[i];
            const auto x = samples[i];
            for (std::size_t j = 0; j < samples.dim; ++j) sums[c * samples.dim + j] += x[j];
            ++counts[c];
        }
        for (std::size_t c = 0; c < k; ++c) {
            auto& centroid = result.centroids[c];
            if (counts[c] == 0) {
                std::size_t far = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double d = detail::squared_distance(samples[i], centroid);
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                const auto s = samples[far];
                centroid.assign(s.begin(), s.end());
                continue;
            }
            for (std::size_t j = 0; j < samples.dim; ++j)
                centroid[j] = sums[c * samples.dim + j] / static_cast<double>(counts[c]);
        }
        previous = result.assignments;
        result.inertia = detail::assign_nearest(samples, result.centroids, result.assignments);
        result.inertia_history.push_back(result.inertia);
        result.iterations = iter + 1;
        if (previous == result.assignments) break;
    }
    return result;
}

/// Convenience overload for samples held as separate vectors.
inline KMeansResult kmeans(const std::vector<std::vector<double>>& samples, std::size_t k, std::size_t max_iter,
                           std::uint64_t seed) {
    if (samples.empty()) throw ArgumentError("kmeans: fewer samples than clusters");
    const std::size_t dim = samples.front().size();
    std::vector<double> flat;
    flat.reserve(samples.size() * dim);
    for (const auto& s : samples) {
        if (s.size() != dim) throw ArgumentError("kmeans: samples must share one dimension");
        flat.insert(flat.end(), s.begin(), s.end());
    }
    return kmeans(SampleView{flat, dim}, k, max_iter, seed);
}

}  // namespace dermfuzz
