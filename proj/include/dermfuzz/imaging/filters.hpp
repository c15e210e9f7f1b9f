#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "dermfuzz/core/error.hpp"
#include "dermfuzz/imaging/raster.hpp"

namespace dermfuzz {

namespace detail {

inline std::uint8_t round_channel(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

inline std::size_t clamp_index(std::ptrdiff_t i, std::size_t n) {
    if (i < 0) return 0;
    if (static_cast<std::size_t>(i) >= n) return n - 1;
    return static_cast<std::size_t>(i);
}

inline void check_window(std::size_t window, std::size_t width, std::size_t height) {
    if (window == 0 || window % 2 == 0)
        throw ArgumentError("median window must be an odd integer >= 1");
    if (window > std::min(width, height))
        throw ArgumentError("median window larger than the image");
}

}  // namespace detail

/// Bilinear resize using pixel-center alignment: output pixel (x,y) samples the
/// source at ((x+0.5)*sw/w - 0.5, (y+0.5)*sh/h - 0.5), clamped to the edge.
inline RgbRaster resize(const RgbRaster& img, std::size_t w, std::size_t h) {
    if (w == 0 || h == 0) throw ArgumentError("resize: target dimensions must be >= 1");
    if (w == img.width() && h == img.height()) return img;

    const double sx = static_cast<double>(img.width()) / static_cast<double>(w);
    const double sy = static_cast<double>(img.height()) / static_cast<double>(h);
    const double max_x = static_cast<double>(img.width() - 1);
    const double max_y = static_cast<double>(img.height() - 1);

    RgbRaster out(w, h);
    for (std::size_t y = 0; y < h; ++y) {
        const double fy = std::clamp((static_cast<double>(y) + 0.5) * sy - 0.5, 0.0, max_y);
        const auto y0 = static_cast<std::size_t>(fy);
        const std::size_t y1 = std::min(y0 + 1, img.height() - 1);
        const double ty = fy - static_cast<double>(y0);
        for (std::size_t x = 0; x < w; ++x) {
            const double fx = std::clamp((static_cast<double>(x) + 0.5) * sx - 0.5, 0.0, max_x);
            const auto x0 = static_cast<std::size_t>(fx);
            const std::size_t x1 = std::min(x0 + 1, img.width() - 1);
            const double tx = fx - static_cast<double>(x0);
            const Rgb& p00 = img.at(x0, y0);
            const Rgb& p10 = img.at(x1, y0);
            const Rgb& p01 = img.at(x0, y1);
            const Rgb& p11 = img.at(x1, y1);
            Rgb& dst = out.at(x, y);
            for (int c = 0; c < 3; ++c) {
                const double top = p00[c] + (p10[c] - p00[c]) * tx;
                const double bottom = p01[c] + (p11[c] - p01[c]) * tx;
                dst[c] = detail::round_channel(top + (bottom - top) * ty);
            }
        }
    }
    return out;
}

/// Luminance (0.299 r + 0.587 g + 0.114 b) / 255.
inline double luminance(const Rgb& p) {
    return std::clamp((0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]) / 255.0, 0.0, 1.0);
}

inline GrayRaster to_gray(const RgbRaster& img) {
    std::vector<double> values(img.size());
    auto px = img.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) values[i] = luminance(px[i]);
    return GrayRaster(img.width(), img.height(), std::move(values));
}

namespace detail {

// Generic windowed median with edge replication; `get(x, y, c)` reads a sample.
template <typename T, typename Get, typename Put>
void median_pass(std::size_t width, std::size_t height, std::size_t channels, std::size_t window,
                 Get get, Put put) {
    const auto r = static_cast<std::ptrdiff_t>(window / 2);
    std::vector<T> buf(window * window);
    const std::size_t mid = buf.size() / 2;
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            for (std::size_t c = 0; c < channels; ++c) {
                std::size_t k = 0;
                for (std::ptrdiff_t dy = -r; dy <= r; ++dy) {
                    const std::size_t yy = clamp_index(static_cast<std::ptrdiff_t>(y) + dy, height);
                    for (std::ptrdiff_t dx = -r; dx <= r; ++dx) {
                        const std::size_t xx = clamp_index(static_cast<std::ptrdiff_t>(x) + dx, width);
                        buf[k++] = get(xx, yy, c);
                    }
                }
                std::nth_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(mid), buf.end());
                put(x, y, c, buf[mid]);
            }
        }
    }
}

}  // namespace detail

/// Per-channel median over a window x window neighborhood, edges replicated.
inline RgbRaster median_filter(const RgbRaster& img, std::size_t window = 3) {
    detail::check_window(window, img.width(), img.height());
    if (window == 1) return img;
    RgbRaster out(img.width(), img.height());
    detail::median_pass<std::uint8_t>(
        img.width(), img.height(), 3, window,
        [&](std::size_t x, std::size_t y, std::size_t c) { return img.at(x, y)[c]; },
        [&](std::size_t x, std::size_t y, std::size_t c, std::uint8_t v) { out.at(x, y)[c] = v; });
    return out;
}

inline GrayRaster median_filter(const GrayRaster& img, std::size_t window = 3) {
    detail::check_window(window, img.width(), img.height());
    if (window == 1) return img;
    GrayRaster out(img.width(), img.height());
    detail::median_pass<double>(
        img.width(), img.height(), 1, window,
        [&](std::size_t x, std::size_t y, std::size_t) { return img.at(x, y); },
        [&](std::size_t x, std::size_t y, std::size_t, double v) { out.at(x, y) = v; });
    return out;
}

}  // namespace dermfuzz
