#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dermfuzz/core/error.hpp"
#include "dermfuzz/imaging/io.hpp"

namespace dermfuzz {

/// Binary raster, true = lesion. `component_count` is the number of 4-connected
/// true components as of the last labeling pass.
struct LesionMask {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> bits;
    std::size_t component_count = 0;

    LesionMask() = default;
    LesionMask(std::size_t w, std::size_t h, bool fill = false)
        : width(w), height(h), bits(w * h, fill ? 1 : 0) {
        if (w == 0 || h == 0) throw ArgumentError("mask dimensions must be >= 1");
    }

    bool at(std::size_t x, std::size_t y) const { return bits[y * width + x] != 0; }
    void set(std::size_t x, std::size_t y, bool v) { bits[y * width + x] = v ? 1 : 0; }
    std::size_t size() const noexcept { return bits.size(); }

    std::size_t area() const {
        std::size_t n = 0;
        for (auto b : bits) n += b;
        return n;
    }

    bool operator==(const LesionMask& o) const {
        return width == o.width && height == o.height && bits == o.bits;
    }
};

/// 4-connected labeling in row-major scan order. Labels start at 1 (0 = background);
/// returns per-pixel labels and fills `areas[label - 1]`.
inline std::vector<std::uint32_t> label_components(const LesionMask& mask, std::vector<std::size_t>& areas) {
    std::vector<std::uint32_t> labels(mask.size(), 0);
    areas.clear();
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < mask.size(); ++start) {
        if (!mask.bits[start] || labels[start]) continue;
        const auto label = static_cast<std::uint32_t>(areas.size() + 1);
        std::size_t area = 0;
        labels[start] = label;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            ++area;
            const std::size_t x = i % mask.width;
            const std::size_t y = i / mask.width;
            auto visit = [&](std::size_t j) {
                if (mask.bits[j] && !labels[j]) {
                    labels[j] = label;
                    stack.push_back(j);
                }
            };
            if (x > 0) visit(i - 1);
            if (x + 1 < mask.width) visit(i + 1);
            if (y > 0) visit(i - mask.width);
            if (y + 1 < mask.height) visit(i + mask.width);
        }
        areas.push_back(area);
    }
    return labels;
}

inline std::size_t count_components(const LesionMask& mask) {
    std::vector<std::size_t> areas;
    label_components(mask, areas);
    return areas.size();
}

/// Keeps only the largest 4-connected component; ties go to the component met first
/// in row-major order.
inline LesionMask largest_component(const LesionMask& mask, const std::string& image_id = {}) {
    std::vector<std::size_t> areas;
    const auto labels = label_components(mask, areas);
    if (areas.empty()) throw SegmentationError(image_id, "mask contains no lesion pixels");
    std::size_t best = 0;
    for (std::size_t i = 1; i < areas.size(); ++i)
        if (areas[i] > areas[best]) best = i;
    LesionMask out(mask.width, mask.height);
    const auto keep = static_cast<std::uint32_t>(best + 1);
    for (std::size_t i = 0; i < out.size(); ++i) out.bits[i] = labels[i] == keep ? 1 : 0;
    out.component_count = 1;
    return out;
}

/// Sets every false pixel not 4-reachable from the image border.
inline LesionMask fill_holes(const LesionMask& mask) {
    const std::size_t w = mask.width;
    const std::size_t h = mask.height;
    std::vector<std::uint8_t> outside(mask.size(), 0);
    std::vector<std::size_t> stack;
    auto seed = [&](std::size_t i) {
        if (!mask.bits[i] && !outside[i]) {
            outside[i] = 1;
            stack.push_back(i);
        }
    };
    for (std::size_t x = 0; x < w; ++x) {
        seed(x);
        seed((h - 1) * w + x);
    }
    for (std::size_t y = 0; y < h; ++y) {
        seed(y * w);
        seed(y * w + w - 1);
    }
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        const std::size_t x = i % w;
        const std::size_t y = i / w;
        if (x > 0) seed(i - 1);
        if (x + 1 < w) seed(i + 1);
        if (y > 0) seed(i - w);
        if (y + 1 < h) seed(i + w);
    }
    LesionMask out = mask;
    for (std::size_t i = 0; i < out.size(); ++i) out.bits[i] = outside[i] ? 0 : 1;
    return out;
}

namespace detail {

// Square-element erosion (min) or dilation (max), separable, edges replicated.
inline LesionMask morph_pass(const LesionMask& mask, std::size_t element, bool dilate) {
    if (element == 0 || element % 2 == 0) throw ArgumentError("structuring element size must be odd");
    const auto r = static_cast<std::ptrdiff_t>(element / 2);
    const auto w = static_cast<std::ptrdiff_t>(mask.width);
    const auto h = static_cast<std::ptrdiff_t>(mask.height);
    auto clampi = [](std::ptrdiff_t v, std::ptrdiff_t n) { return v < 0 ? 0 : (v >= n ? n - 1 : v); };
    LesionMask tmp(mask.width, mask.height);
    for (std::ptrdiff_t y = 0; y < h; ++y)
        for (std::ptrdiff_t x = 0; x < w; ++x) {
            bool v = !dilate;
            for (std::ptrdiff_t d = -r; d <= r; ++d) {
                const bool b = mask.bits[static_cast<std::size_t>(y * w + clampi(x + d, w))] != 0;
                v = dilate ? (v || b) : (v && b);
            }
            tmp.bits[static_cast<std::size_t>(y * w + x)] = v;
        }
    LesionMask out(mask.width, mask.height);
    for (std::ptrdiff_t y = 0; y < h; ++y)
        for (std::ptrdiff_t x = 0; x < w; ++x) {
            bool v = !dilate;
            for (std::ptrdiff_t d = -r; d <= r; ++d) {
                const bool b = tmp.bits[static_cast<std::size_t>(clampi(y + d, h) * w + x)] != 0;
                v = dilate ? (v || b) : (v && b);
            }
            out.bits[static_cast<std::size_t>(y * w + x)] = v;
        }
    return out;
}

}  // namespace detail

inline LesionMask erode(const LesionMask& m, std::size_t element = 3) { return detail::morph_pass(m, element, false); }
inline LesionMask dilate(const LesionMask& m, std::size_t element = 3) { return detail::morph_pass(m, element, true); }
inline LesionMask morph_open(const LesionMask& m, std::size_t element = 3) { return dilate(erode(m, element), element); }
inline LesionMask morph_close(const LesionMask& m, std::size_t element = 3) { return erode(dilate(m, element), element); }

/// Writes the mask as an 8-bit PNG with lesion pixels at 255.
inline void save_mask_png(const LesionMask& mask, const std::filesystem::path& path) {
    std::vector<std::uint8_t> samples(mask.size());
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = mask.bits[i] ? 255 : 0;
    save_png_gray(samples, mask.width, mask.height, path);
}

}  // namespace dermfuzz
