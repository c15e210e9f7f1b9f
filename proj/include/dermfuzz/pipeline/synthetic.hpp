#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "dermfuzz/core/rng.hpp"
#include "dermfuzz/features/feature_vector.hpp"
#include "dermfuzz/imaging/io.hpp"
#include "dermfuzz/imaging/raster.hpp"
#include "dermfuzz/pipeline/manifest.hpp"

namespace dermfuzz {

namespace detail {

inline std::uint8_t to_channel(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

}  // namespace detail

/// One synthetic dermoscopy-like image. Benign lesions are near-circular and
/// uniformly brown; melanomas are jagged, lopsided blobs mixing dark brown, black,
/// blue-gray and red tones. Both get illumination falloff, sensor noise and speckle.
inline RgbRaster synthetic_lesion(Label label, std::size_t size, Rng& rng) {
    const double s = static_cast<double>(size);
    const std::array<double, 3> skin = {uniform(rng, 185, 225), uniform(rng, 150, 185), uniform(rng, 125, 160)};
    const double cx = s / 2 + uniform(rng, -0.06, 0.06) * s;
    const double cy = s / 2 + uniform(rng, -0.06, 0.06) * s;
    const double r0 = uniform(rng, 0.17, 0.28) * s;
    const bool malignant = label == Label::melanoma;

    // Radial profile r(theta) = r0 * (1 + lobe + ripples).
    const double aspect = malignant ? uniform(rng, 1.0, 1.35) : uniform(rng, 1.0, 1.1);
    const double tilt = uniform(rng, 0, std::numbers::pi);
    const double lobe = malignant ? uniform(rng, 0.15, 0.35) : 0.0;
    const double lobe_dir = uniform(rng, 0, 2 * std::numbers::pi);
    std::array<double, 6> amp{}, phase{};
    for (std::size_t k = 0; k < amp.size(); ++k) {
        amp[k] = malignant ? uniform(rng, 0.03, 0.10) : uniform(rng, 0.0, 0.012);
        phase[k] = uniform(rng, 0, 2 * std::numbers::pi);
    }
    auto radius = [&](double theta) {
        double r = 1.0 + lobe * std::max(0.0, std::cos(theta - lobe_dir));
        for (std::size_t k = 0; k < amp.size(); ++k) r += amp[k] * std::sin(static_cast<double>(k + 3) * theta + phase[k]);
        return r0 * r;
    };

    // Lesion tones; melanomas blend several via a smooth random field.
    std::vector<std::array<double, 3>> tones;
    if (malignant) {
        const std::array<std::array<double, 3>, 5> palette = {{
            {91, 60, 17}, {35, 28, 28}, {90, 110, 140}, {150, 60, 55}, {120, 80, 45},
        }};
        std::array<std::size_t, 5> order = {0, 1, 2, 3, 4};
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);
        const std::size_t count = 3 + uniform_index(rng, 2);
        for (std::size_t i = 0; i < count; ++i) tones.push_back(palette[order[i]]);
    } else {
        tones.push_back({uniform(rng, 120, 165), uniform(rng, 80, 110), uniform(rng, 50, 75)});
    }
    std::array<double, 4> fx{}, fy{}, fp{};
    for (std::size_t k = 0; k < fx.size(); ++k) {
        fx[k] = uniform(rng, -1, 1) * 6.0 / s;
        fy[k] = uniform(rng, -1, 1) * 6.0 / s;
        fp[k] = uniform(rng, 0, 2 * std::numbers::pi);
    }
    const double light_dir = uniform(rng, 0, 2 * std::numbers::pi);

    RgbRaster img(size, size);
    for (std::size_t y = 0; y < size; ++y)
        for (std::size_t x = 0; x < size; ++x) {
            const double dx = static_cast<double>(x) - cx;
            const double dy = static_cast<double>(y) - cy;
            // Undo the ellipse stretch before measuring the polar radius.
            const double ux = dx * std::cos(tilt) + dy * std::sin(tilt);
            const double uy = (-dx * std::sin(tilt) + dy * std::cos(tilt)) * aspect;
            const double theta = std::atan2(uy, ux);
            const double shade = 1.0 + 0.06 * ((dx * std::cos(light_dir) + dy * std::sin(light_dir)) / s);
            std::array<double, 3> c = skin;
            if (std::hypot(ux, uy) <= radius(theta)) {
                if (tones.size() == 1) {
                    c = tones[0];
                } else {
                    double field = 0.0;
                    for (std::size_t k = 0; k < fx.size(); ++k)
                        field += std::sin(fx[k] * static_cast<double>(x) * 2.0 + fy[k] * static_cast<double>(y) * 2.0 + fp[k]);
                    const double t = std::clamp((field / 4.0 + 1.0) / 2.0, 0.0, 0.999999);
                    c = tones[static_cast<std::size_t>(t * static_cast<double>(tones.size()))];
                }
            }
            Rgb& p = img.at(x, y);
            for (int ch = 0; ch < 3; ++ch) p[ch] = detail::to_channel(c[ch] * shade + 5.0 * standard_normal(rng));
            if (uniform01(rng) < 0.002) p = uniform01(rng) < 0.5 ? Rgb{20, 20, 20} : Rgb{250, 250, 250};
        }
    return img;
}

/// Writes `per_class` benign and `per_class` melanoma PPM images plus manifest.csv
/// under `out_dir`; returns the manifest. Deterministic given the seed.
inline Manifest generate_synthetic_dataset(const std::filesystem::path& out_dir, std::size_t per_class,
                                           std::uint64_t seed, std::size_t image_size = 200) {
    std::filesystem::create_directories(out_dir / "images");
    Manifest m;
    m.source = "synthetic benchmark (seed " + std::to_string(seed) + ")";
    for (std::size_t i = 0; i < 2 * per_class; ++i) {
        const Label label = i % 2 == 0 ? Label::benign : Label::melanoma;
        Rng rng = make_stream(seed, i);
        const RgbRaster img = synthetic_lesion(label, image_size, rng);
        char name[64];
        std::snprintf(name, sizeof name, "lesion_%04zu.ppm", i);
        const auto rel = std::filesystem::path("images") / name;
        save_ppm(img, out_dir / rel);
        m.entries.push_back({out_dir / rel, label});
    }
    write_manifest(m, out_dir / "manifest.csv");
    return m;
}

}  // namespace dermfuzz
