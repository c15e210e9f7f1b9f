#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string_view>

#include "dermfuzz/core/error.hpp"
#include "dermfuzz/imaging/filters.hpp"
#include "dermfuzz/imaging/raster.hpp"
#include "dermfuzz/segmentation/mask.hpp"

namespace dermfuzz {

struct ReferenceColor {
    std::string_view name;
    Rgb rgb;
};

/// ABCD reference colors used by color_count.
inline constexpr std::array<ReferenceColor, 6> kAbcdColors = {{
    {"white", {255, 255, 255}},
    {"red", {204, 51, 51}},
    {"light_brown", {181, 134, 84}},
    {"dark_brown", {91, 60, 17}},
    {"blue_gray", {90, 110, 140}},
    {"black", {30, 30, 30}},
}};
inline constexpr double kColorDistance = 60.0;
inline constexpr double kColorCoverage = 0.05;

struct ColorStats {
    std::array<double, 3> variance{};
    std::array<double, 3> ratio{};
    double color_count = 0.0;
};

namespace detail {

inline void check_same_size(const RgbRaster& img, const LesionMask& mask, const char* who) {
    if (img.width() != mask.width || img.height() != mask.height)
        throw ArgumentError(std::string(who) + ": image and mask dimensions differ");
}

/// Moves one ratio (largest first) by the fewest ulps that make the
/// left-to-right sum exactly 1. Rounding leaves it a few ulps off.
inline void snap_to_unit_sum(std::array<double, 3>& r) {
    std::array<int, 3> order = {0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return r[a] > r[b]; });
    for (int c : order) {
        std::array<double, 3> q = r;
        for (int d = 0; d <= 64; ++d) {
            for (double dir : {2.0, 0.0}) {
                double v = r[c];
                for (int i = 0; i < d; ++i) v = std::nextafter(v, dir);
                q[c] = v;
                if (q[0] + q[1] + q[2] == 1.0) {
                    r = q;
                    return;
                }
            }
        }
    }
}

}  // namespace detail

/// Channel variances (0-255 scale), normalized channel-mean ratios and the number of
/// ABCD colors covering at least 5% of the lesion. Ratios sum to exactly 1; a lesion
/// with all-zero means gets (1/3, 1/3, 1/3).
inline ColorStats color_stats(const RgbRaster& img, const LesionMask& mask) {
    detail::check_same_size(img, mask, "color_stats");
    std::array<double, 3> sum{}, sum_sq{};
    std::array<std::size_t, kAbcdColors.size()> hits{};
    std::size_t n = 0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (!mask.bits[i]) continue;
        const Rgb& p = img.pixels()[i];
        for (int c = 0; c < 3; ++c) {
            sum[c] += p[c];
            sum_sq[c] += static_cast<double>(p[c]) * p[c];
        }
        for (std::size_t k = 0; k < kAbcdColors.size(); ++k) {
            const auto& ref = kAbcdColors[k].rgb;
            double d2 = 0.0;
            for (int c = 0; c < 3; ++c) {
                const double t = static_cast<double>(p[c]) - ref[c];
                d2 += t * t;
            }
            hits[k] += d2 <= kColorDistance * kColorDistance;
        }
        ++n;
    }
    if (n == 0) throw ArgumentError("color_stats: empty mask");

    ColorStats out;
    const double count = static_cast<double>(n);
    std::array<double, 3> mean{};
    for (int c = 0; c < 3; ++c) {
        mean[c] = sum[c] / count;
        out.variance[c] = std::max(0.0, sum_sq[c] / count - mean[c] * mean[c]);
    }
    const double total = mean[0] + mean[1] + mean[2];
    if (total <= 0.0) {
        out.ratio = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    } else {
        for (int c = 0; c < 3; ++c) out.ratio[c] = mean[c] / total;
    }
    detail::snap_to_unit_sum(out.ratio);
    for (std::size_t k = 0; k < hits.size(); ++k)
        out.color_count += static_cast<double>(hits[k]) >= kColorCoverage * count ? 1.0 : 0.0;
    return out;
}

/// Mean gray outside the lesion minus mean gray inside it.
inline double brightness_difference(const GrayRaster& gray, const LesionMask& mask) {
    if (gray.width() != mask.width || gray.height() != mask.height)
        throw ArgumentError("brightness_difference: raster and mask dimensions differ");
    // Offsets from the first pixel keep a uniform raster at exactly 0.
    const double ref = gray.values().empty() ? 0.0 : gray.values()[0];
    double in = 0.0, out = 0.0;
    std::size_t n_in = 0, n_out = 0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        const double v = gray.values()[i] - ref;
        if (mask.bits[i]) {
            in += v;
            ++n_in;
        } else {
            out += v;
            ++n_out;
        }
    }
    if (n_in == 0) throw ArgumentError("brightness_difference: empty mask");
    if (n_out == 0) throw ArgumentError("brightness_difference: mask covers the whole image");
    return out / static_cast<double>(n_out) - in / static_cast<double>(n_in);
}

}  // namespace dermfuzz
