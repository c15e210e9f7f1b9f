#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dermfuzz/core/error.hpp"
#include "dermfuzz/imaging/filters.hpp"
#include "dermfuzz/imaging/raster.hpp"
#include "dermfuzz/segmentation/kmeans.hpp"
#include "dermfuzz/segmentation/mask.hpp"
#include "dermfuzz/segmentation/threshold.hpp"

namespace dermfuzz {

enum class CombineMode { intersect, unite };

struct SegmentationConfig {
    std::uint64_t kmeans_seed = 0;
    CombineMode combine = CombineMode::intersect;
    std::size_t morph_element = 3;
    std::size_t kmeans_max_iter = 50;
};

/// K-means (k=2) on RGB, darker cluster as lesion, combined with the below-Otsu
/// pixels, then open/close, largest 4-connected component and hole filling.
inline LesionMask lesion_mask(const RgbRaster& img, const SegmentationConfig& cfg = {},
                              const std::string& image_id = {}) {
    const std::size_t n = img.size();
    if (n < 2) throw SegmentationError(image_id, "image too small to segment");

    const GrayRaster gray = to_gray(img);
    double threshold = 0.0;
    try {
        threshold = threshold_otsu(gray);
    } catch (const DegenerateInputError&) {
        throw SegmentationError(image_id, "uniform image, no lesion to separate");
    }

    std::vector<double> flat(n * 3);
    for (std::size_t i = 0; i < n; ++i) {
        const Rgb& p = img.pixels()[i];
        flat[3 * i] = p[0];
        flat[3 * i + 1] = p[1];
        flat[3 * i + 2] = p[2];
    }
    const KMeansResult km = kmeans(SampleView{flat, 3}, 2, cfg.kmeans_max_iter, cfg.kmeans_seed);
    auto centroid_luma = [&](std::size_t c) {
        const auto& m = km.centroids[c];
        return 0.299 * m[0] + 0.587 * m[1] + 0.114 * m[2];
    };
    const std::size_t dark = centroid_luma(1) < centroid_luma(0) ? 1 : 0;

    LesionMask mask(img.width(), img.height());
    const auto values = gray.values();
    for (std::size_t i = 0; i < n; ++i) {
        const bool in_cluster = km.assignments[i] == dark;
        const bool below = values[i] < threshold;
        mask.bits[i] = cfg.combine == CombineMode::intersect ? (in_cluster && below) : (in_cluster || below);
    }

    mask = morph_close(morph_open(mask, cfg.morph_element), cfg.morph_element);
    mask = largest_component(mask, image_id);
    mask = fill_holes(mask);
    mask.component_count = 1;
    return mask;
}

}  // namespace dermfuzz
