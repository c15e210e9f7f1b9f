#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <fstream>
#include <iterator>

#include "dermfuzz/core/rng.hpp"
#include "dermfuzz/features/feature_vector.hpp"
#include "dermfuzz/imaging/raster.hpp"
#include "dermfuzz/segmentation/mask.hpp"

namespace testing_support {

using namespace dermfuzz;

inline LesionMask disk_mask(std::size_t size, double cx, double cy, double r) {
    LesionMask m(size, size);
    for (std::size_t y = 0; y < size; ++y)
        for (std::size_t x = 0; x < size; ++x) {
            const double dx = static_cast<double>(x) - cx, dy = static_cast<double>(y) - cy;
            if (dx * dx + dy * dy <= r * r) m.set(x, y, true);
        }
    return m;
}

inline LesionMask rect_mask(std::size_t w, std::size_t h, std::size_t x0, std::size_t y0, std::size_t rw,
                            std::size_t rh) {
    LesionMask m(w, h);
    for (std::size_t y = y0; y < y0 + rh; ++y)
        for (std::size_t x = x0; x < x0 + rw; ++x) m.set(x, y, true);
    return m;
}

inline RgbRaster paint(const LesionMask& m, Rgb inside, Rgb outside) {
    RgbRaster img(m.width, m.height, outside);
    for (std::size_t y = 0; y < m.height; ++y)
        for (std::size_t x = 0; x < m.width; ++x)
            if (m.at(x, y)) img.at(x, y) = inside;
    return img;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("dermfuzz_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Two well separated Gaussian clusters in feature space, labelled by cluster.
inline std::vector<FeatureVector> blob_dataset(std::size_t per_class, std::uint64_t seed, double gap = 3.0) {
    Rng rng = make_stream(seed, 99);
    std::vector<FeatureVector> rows;
    for (std::size_t i = 0; i < 2 * per_class; ++i) {
        FeatureVector fv;
        const bool mel = i % 2 == 1;
        for (std::size_t j = 0; j < kFeatureCount; ++j)
            fv.values[j] = (mel ? gap : 0.0) * (j < 4 ? 1.0 : 0.0) + standard_normal(rng);
        fv.label = mel ? Label::melanoma : Label::benign;
        rows.push_back(fv);
    }
    return rows;
}

}  // namespace testing_support
