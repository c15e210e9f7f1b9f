#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>

#include "dermfuzz/features/geometry.hpp"
#include "dermfuzz/imaging/raster.hpp"
#include "dermfuzz/segmentation/mask.hpp"

namespace dermfuzz {

/// Equivalent-circle diameter 2 sqrt(area / pi), in pixels.
inline double diameter(const MaskGeometry& g) {
    return 2.0 * std::sqrt(static_cast<double>(g.area) / std::numbers::pi);
}

/// 4 pi A / P^2 clamped to (0, 1]. The value is nudged by at most a few ulps so that
/// sphericity * (1 / sphericity) == 1 holds exactly in double arithmetic.
inline double sphericity(const MaskGeometry& g) {
    double s = 4.0 * std::numbers::pi * static_cast<double>(g.area) / (g.perimeter * g.perimeter);
    s = std::clamp(s, std::numeric_limits<double>::min(), 1.0);
    for (int i = 0; i < 64 && s * (1.0 / s) != 1.0; ++i) s = std::nextafter(s, 0.0);
    return s;
}

/// P^2 / (4 pi A), computed as the reciprocal of sphericity; always >= 1.
inline double irregularity_index(const MaskGeometry& g) { return 1.0 / sphericity(g); }

namespace detail {

// XOR area between a mask and its reflection about the line through `c` with
// direction angle `theta`. Reflected membership is sampled backwards (each
// destination pixel looks up its mirror source), which keeps the mapping hole-free.
inline std::size_t reflection_xor(const LesionMask& mask, Point c, double theta) {
    const double c2 = std::cos(2.0 * theta);
    const double s2 = std::sin(2.0 * theta);
    auto reflect = [&](double x, double y) {
        const double dx = x - c.x;
        const double dy = y - c.y;
        return Point{c.x + c2 * dx + s2 * dy, c.y + s2 * dx - c2 * dy};
    };
    const auto w = static_cast<std::ptrdiff_t>(mask.width);
    const auto h = static_cast<std::ptrdiff_t>(mask.height);
    auto inside = [&](std::ptrdiff_t x, std::ptrdiff_t y) {
        return x >= 0 && y >= 0 && x < w && y < h && mask.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
    };

    std::ptrdiff_t x0 = w, y0 = h, x1 = -1, y1 = -1;
    for (std::ptrdiff_t y = 0; y < h; ++y)
        for (std::ptrdiff_t x = 0; x < w; ++x)
            if (inside(x, y)) {
                x0 = std::min(x0, x), x1 = std::max(x1, x);
                y0 = std::min(y0, y), y1 = std::max(y1, y);
            }
    // Scan box covering the mask and its reflection.
    double bx0 = static_cast<double>(x0), by0 = static_cast<double>(y0);
    double bx1 = static_cast<double>(x1), by1 = static_cast<double>(y1);
    for (double cx : {static_cast<double>(x0), static_cast<double>(x1)})
        for (double cy : {static_cast<double>(y0), static_cast<double>(y1)}) {
            const Point r = reflect(cx, cy);
            bx0 = std::min(bx0, r.x), bx1 = std::max(bx1, r.x);
            by0 = std::min(by0, r.y), by1 = std::max(by1, r.y);
        }
    const auto sx0 = static_cast<std::ptrdiff_t>(std::floor(bx0)) - 1;
    const auto sy0 = static_cast<std::ptrdiff_t>(std::floor(by0)) - 1;
    const auto sx1 = static_cast<std::ptrdiff_t>(std::ceil(bx1)) + 1;
    const auto sy1 = static_cast<std::ptrdiff_t>(std::ceil(by1)) + 1;

    std::size_t count = 0;
    for (std::ptrdiff_t y = sy0; y <= sy1; ++y)
        for (std::ptrdiff_t x = sx0; x <= sx1; ++x) {
            const Point r = reflect(static_cast<double>(x), static_cast<double>(y));
            const bool mirrored = inside(static_cast<std::ptrdiff_t>(std::floor(r.x + 0.5)),
                                         static_cast<std::ptrdiff_t>(std::floor(r.y + 0.5)));
            count += inside(x, y) != mirrored;
        }
    return count;
}

}  // namespace detail

/// Mean over the principal axis and its perpendicular of XOR(mask, reflection) / area,
/// clamped to [0, 1].
inline double asymmetry(const LesionMask& mask, const MaskGeometry& g) {
    const double area = static_cast<double>(g.area);
    const double major = static_cast<double>(detail::reflection_xor(mask, g.centroid, g.principal_axis_angle));
    const double minor =
        static_cast<double>(detail::reflection_xor(mask, g.centroid, g.principal_axis_angle + std::numbers::pi / 2));
    return std::clamp(0.5 * (major + minor) / area, 0.0, 1.0);
}

/// Lesion pixels with a 4-neighbor outside the lesion (or on the image edge).
inline bool is_boundary_pixel(const LesionMask& mask, std::size_t x, std::size_t y) {
    if (!mask.at(x, y)) return false;
    if (x == 0 || y == 0 || x + 1 == mask.width || y + 1 == mask.height) return true;
    return !mask.at(x - 1, y) || !mask.at(x + 1, y) || !mask.at(x, y - 1) || !mask.at(x, y + 1);
}

/// Squared coefficient of variation of boundary-pixel distances to the centroid.
inline double edge_uniformity(const LesionMask& mask, const GrayRaster& gray) {
    if (gray.width() != mask.width || gray.height() != mask.height)
        throw ArgumentError("edge_uniformity: gray raster and mask dimensions differ");
    const MaskGeometry g = mask_geometry(mask);
    double sum = 0.0, sum_sq = 0.0;
    std::size_t n = 0;
    for (std::size_t y = 0; y < mask.height; ++y)
        for (std::size_t x = 0; x < mask.width; ++x)
            if (is_boundary_pixel(mask, x, y)) {
                const double r = std::hypot(static_cast<double>(x) - g.centroid.x, static_cast<double>(y) - g.centroid.y);
                sum += r;
                sum_sq += r * r;
                ++n;
            }
    const double mean = sum / static_cast<double>(n);
    if (mean <= 0.0) return 0.0;
    const double var = std::max(0.0, sum_sq / static_cast<double>(n) - mean * mean);
    return var / (mean * mean);
}

}  // namespace dermfuzz
