#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "dermfuzz/core/error.hpp"
#include "dermfuzz/core/rng.hpp"
#include "dermfuzz/features/feature_vector.hpp"

namespace dermfuzz {

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Stratified shuffle split. Each class sends floor(f * n_class) samples to train;
/// the slots left over to reach floor(f * n) overall go to the classes with the
/// largest fractional parts. Both index lists are ascending.
inline SplitIndices split_indices(const std::vector<FeatureVector>& data, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ArgumentError("split: train_fraction must lie in (0,1)");
    std::array<std::vector<std::size_t>, 2> by_class;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (!data[i].label) throw ArgumentError("split: every feature vector needs a label");
        by_class[label_code(*data[i].label) - 1].push_back(i);
    }
    for (const auto& c : by_class)
        if (c.size() < 2) throw ArgumentError("split: each class needs at least 2 samples");

    constexpr double eps = 1e-9;
    const auto total = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(data.size()) + eps));
    std::array<std::size_t, 2> take{};
    std::array<double, 2> frac{};
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < 2; ++c) {
        const double exact = train_fraction * static_cast<double>(by_class[c].size());
        take[c] = static_cast<std::size_t>(std::floor(exact + eps));
        frac[c] = exact - static_cast<double>(take[c]);
        assigned += take[c];
    }
    while (assigned < total) {
        const std::size_t c = frac[1] > frac[0] ? 1 : 0;
        ++take[c];
        frac[c] = -1.0;
        ++assigned;
    }

    Rng rng = make_stream(seed, 0x5EED);
    SplitIndices out;
    for (std::size_t c = 0; c < 2; ++c) {
        auto idx = by_class[c];
        for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[uniform_index(rng, i)]);
        out.train.insert(out.train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take[c]));
        out.test.insert(out.test.end(), idx.begin() + static_cast<std::ptrdiff_t>(take[c]), idx.end());
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

inline std::vector<FeatureVector> select_rows(const std::vector<FeatureVector>& data, const std::vector<std::size_t>& idx) {
    std::vector<FeatureVector> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(data[i]);
    return out;
}

struct Split {
    std::vector<FeatureVector> train;
    std::vector<FeatureVector> test;
};

inline Split split(const std::vector<FeatureVector>& data, double train_fraction, std::uint64_t seed) {
    const SplitIndices s = split_indices(data, train_fraction, seed);
    return {select_rows(data, s.train), select_rows(data, s.test)};
}

/// Stratified subsample of `size` rows (the whole set when size == data.size()).
inline std::vector<FeatureVector> stratified_subsample(const std::vector<FeatureVector>& data, std::size_t size,
                                                       std::uint64_t seed) {
    if (size > data.size())
        throw ArgumentError("subset size " + std::to_string(size) + " exceeds dataset size " + std::to_string(data.size()));
    if (size == data.size()) return data;
    const double fraction = static_cast<double>(size) / static_cast<double>(data.size());
    return split(data, fraction, seed ^ 0xA5A5A5A5ULL).train;
}

}  // namespace dermfuzz
