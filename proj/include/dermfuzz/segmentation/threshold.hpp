#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "dermfuzz/core/error.hpp"
#include "dermfuzz/imaging/raster.hpp"

namespace dermfuzz {

/// 8-bit bin of a [0,1] intensity: round(255 v).
inline std::size_t intensity_bin(double v) {
    return static_cast<std::size_t>(std::floor(v * 255.0 + 0.5));
}

/// Otsu threshold over a 256-bin histogram. Returns (t + 0.5) / 255 for the bin t
/// maximizing between-class variance (lowest t on ties), so a value v falls in the
/// lower class exactly when v < threshold.
inline double threshold_otsu(const GrayRaster& img) {
    std::array<double, 256> hist{};
    for (double v : img.values()) hist[intensity_bin(v)] += 1.0;
    std::size_t occupied = 0;
    for (double h : hist) occupied += h > 0.0 ? 1 : 0;
    if (occupied < 2) throw DegenerateInputError("threshold_otsu: raster has fewer than two distinct intensities");

    const double total = static_cast<double>(img.size());
    double sum_all = 0.0;
    for (std::size_t i = 0; i < 256; ++i) sum_all += static_cast<double>(i) * hist[i];

    double w0 = 0.0;
    double sum0 = 0.0;
    double best = -1.0;
    std::size_t best_t = 0;
    for (std::size_t t = 0; t < 255; ++t) {
        w0 += hist[t];
        sum0 += static_cast<double>(t) * hist[t];
        const double w1 = total - w0;
        if (w0 == 0.0 || w1 == 0.0) continue;
        const double diff = sum0 / w0 - (sum_all - sum0) / w1;
        const double between = w0 * w1 * diff * diff;
        if (between > best) {
            best = between;
            best_t = t;
        }
    }
    return (static_cast<double>(best_t) + 0.5) / 255.0;
}

}  // namespace dermfuzz
