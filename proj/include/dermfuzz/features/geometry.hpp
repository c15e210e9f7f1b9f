#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

#include "dermfuzz/core/error.hpp"
#include "dermfuzz/segmentation/mask.hpp"

namespace dermfuzz {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Outer boundary of a mask as an 8-connected Freeman chain.
struct BoundaryChain {
    std::ptrdiff_t start_x = 0;
    std::ptrdiff_t start_y = 0;
    /// Codes 0..7: E, NE, N, NW, W, SW, S, SE (y grows downward).
    std::vector<std::uint8_t> codes;

    std::size_t even_steps() const {
        std::size_t n = 0;
        for (auto c : codes) n += (c % 2 == 0);
        return n;
    }
    std::size_t odd_steps() const { return codes.size() - even_steps(); }
};

struct MaskGeometry {
    std::size_t area = 0;
    double perimeter = 0.0;
    Point centroid;
    /// Orientation of the major principal axis in [-pi/2, pi/2).
    double principal_axis_angle = 0.0;
};

namespace detail {

// Clockwise (y down) neighbor ring starting West, and the Freeman code of each step.
inline constexpr std::array<std::array<int, 2>, 8> kRing = {{
    {-1, 0}, {-1, -1}, {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1},
}};
inline constexpr std::array<std::uint8_t, 8> kRingCode = {4, 3, 2, 1, 0, 7, 6, 5};

inline int ring_index(int dx, int dy) {
    for (int k = 0; k < 8; ++k)
        if (kRing[k][0] == dx && kRing[k][1] == dy) return k;
    return 0;
}

}  // namespace detail

/// Moore-neighbor tracing of the component containing the first lesion pixel in
/// row-major order, stopped by Jacob's criterion.
inline BoundaryChain trace_boundary(const LesionMask& mask) {
    BoundaryChain chain;
    const auto w = static_cast<std::ptrdiff_t>(mask.width);
    const auto h = static_cast<std::ptrdiff_t>(mask.height);
    auto fg = [&](std::ptrdiff_t x, std::ptrdiff_t y) {
        return x >= 0 && y >= 0 && x < w && y < h && mask.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
    };
    std::ptrdiff_t sx = -1;
    std::ptrdiff_t sy = -1;
    for (std::ptrdiff_t i = 0; i < w * h && sx < 0; ++i)
        if (mask.bits[static_cast<std::size_t>(i)]) {
            sx = i % w;
            sy = i / w;
        }
    if (sx < 0) throw ArgumentError("trace_boundary: empty mask");
    chain.start_x = sx;
    chain.start_y = sy;

    // Returns the next boundary pixel and the background pixel examined just before it.
    auto advance = [&](std::ptrdiff_t bx, std::ptrdiff_t by, std::ptrdiff_t cx, std::ptrdiff_t cy, std::ptrdiff_t& nx,
                       std::ptrdiff_t& ny, std::ptrdiff_t& ncx, std::ptrdiff_t& ncy, int& step) {
        const int first = detail::ring_index(static_cast<int>(cx - bx), static_cast<int>(cy - by));
        for (int i = 0; i < 8; ++i) {
            const int k = (first + i) % 8;
            const std::ptrdiff_t x = bx + detail::kRing[k][0];
            const std::ptrdiff_t y = by + detail::kRing[k][1];
            if (fg(x, y)) {
                const int prev = (k + 7) % 8;
                nx = x;
                ny = y;
                ncx = bx + detail::kRing[prev][0];
                ncy = by + detail::kRing[prev][1];
                step = k;
                return true;
            }
        }
        return false;
    };

    std::ptrdiff_t bx = sx, by = sy, cx = sx - 1, cy = sy;
    std::ptrdiff_t nx = 0, ny = 0, ncx = 0, ncy = 0;
    int step = 0;
    if (!advance(bx, by, cx, cy, nx, ny, ncx, ncy, step)) return chain;  // isolated pixel
    const std::ptrdiff_t first_x = nx, first_y = ny;
    chain.codes.push_back(detail::kRingCode[step]);
    bx = nx, by = ny, cx = ncx, cy = ncy;
    const std::size_t limit = 8 * mask.size() + 8;
    while (chain.codes.size() < limit) {
        advance(bx, by, cx, cy, nx, ny, ncx, ncy, step);
        if (bx == sx && by == sy && nx == first_x && ny == first_y) break;
        chain.codes.push_back(detail::kRingCode[step]);
        bx = nx, by = ny, cx = ncx, cy = ncy;
    }
    return chain;
}

/// Chord-smoothed boundary length: the closed chain's points p_i are joined
/// k steps apart and P = (1/k) * sum |p_{i+k} - p_i|, with k = 4 (capped at n/2).
/// Plain step counting overestimates curves by up to 8%; the chords average the
/// staircase out. A lone pixel counts as 4.
inline constexpr std::size_t kChordSpan = 4;

inline double chain_perimeter(const BoundaryChain& chain) {
    const std::size_t n = chain.codes.size();
    if (n == 0) return 4.0;
    static constexpr std::array<int, 8> dx = {1, 1, 0, -1, -1, -1, 0, 1};
    static constexpr std::array<int, 8> dy = {0, -1, -1, -1, 0, 1, 1, 1};
    std::vector<std::array<double, 2>> pts(n);
    double x = static_cast<double>(chain.start_x), y = static_cast<double>(chain.start_y);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i] = {x, y};
        x += dx[chain.codes[i]];
        y += dy[chain.codes[i]];
    }
    const std::size_t k = std::max<std::size_t>(1, std::min(kChordSpan, n / 2));
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = pts[i];
        const auto& b = pts[(i + k) % n];
        sum += std::hypot(b[0] - a[0], b[1] - a[1]);
    }
    const double p = sum / static_cast<double>(k);
    return p > 0.0 ? p : 4.0;
}

inline MaskGeometry mask_geometry(const LesionMask& mask) {
    MaskGeometry g;
    double sx = 0.0, sy = 0.0;
    for (std::size_t y = 0; y < mask.height; ++y)
        for (std::size_t x = 0; x < mask.width; ++x)
            if (mask.at(x, y)) {
                ++g.area;
                sx += static_cast<double>(x);
                sy += static_cast<double>(y);
            }
    if (g.area == 0) throw ArgumentError("mask_geometry: empty mask");
    const double n = static_cast<double>(g.area);
    g.centroid = {sx / n, sy / n};

    double mu20 = 0.0, mu02 = 0.0, mu11 = 0.0;
    for (std::size_t y = 0; y < mask.height; ++y)
        for (std::size_t x = 0; x < mask.width; ++x)
            if (mask.at(x, y)) {
                const double dx = static_cast<double>(x) - g.centroid.x;
                const double dy = static_cast<double>(y) - g.centroid.y;
                mu20 += dx * dx;
                mu02 += dy * dy;
                mu11 += dx * dy;
            }
    double angle = 0.5 * std::atan2(2.0 * mu11, mu20 - mu02);
    if (angle >= std::numbers::pi / 2) angle -= std::numbers::pi;
    g.principal_axis_angle = angle;
    g.perimeter = chain_perimeter(trace_boundary(mask));
    return g;
}

}  // namespace dermfuzz
