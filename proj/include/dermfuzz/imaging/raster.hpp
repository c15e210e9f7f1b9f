#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dermfuzz/core/error.hpp"

namespace dermfuzz {

using Rgb = std::array<std::uint8_t, 3>;

/// Row-major 8-bit RGB image. width, height >= 1.
class RgbRaster {
public:
    RgbRaster(std::size_t width, std::size_t height, Rgb fill = {0, 0, 0})
        : width_(width), height_(height), pixels_(checked_count(width, height), fill) {}

    RgbRaster(std::size_t width, std::size_t height, std::vector<Rgb> pixels)
        : width_(width), height_(height), pixels_(std::move(pixels)) {
        if (pixels_.size() != checked_count(width, height))
            throw ArgumentError("RgbRaster: pixel count does not match dimensions");
    }

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return pixels_.size(); }

    const Rgb& at(std::size_t x, std::size_t y) const { return pixels_[y * width_ + x]; }
    Rgb& at(std::size_t x, std::size_t y) { return pixels_[y * width_ + x]; }

    std::span<const Rgb> pixels() const noexcept { return pixels_; }
    std::span<Rgb> pixels() noexcept { return pixels_; }

    friend bool operator==(const RgbRaster&, const RgbRaster&) = default;

private:
    static std::size_t checked_count(std::size_t w, std::size_t h) {
        if (w == 0 || h == 0) throw ArgumentError("raster dimensions must be >= 1");
        return w * h;
    }

    std::size_t width_;
    std::size_t height_;
    std::vector<Rgb> pixels_;
};

/// Row-major scalar image with values in [0,1].
class GrayRaster {
public:
    GrayRaster(std::size_t width, std::size_t height, double fill = 0.0)
        : width_(width), height_(height), values_(checked_count(width, height), fill) {}

    GrayRaster(std::size_t width, std::size_t height, std::vector<double> values)
        : width_(width), height_(height), values_(std::move(values)) {
        if (values_.size() != checked_count(width, height))
            throw ArgumentError("GrayRaster: value count does not match dimensions");
        for (double v : values_)
            if (!(v >= 0.0 && v <= 1.0)) throw ArgumentError("GrayRaster: value outside [0,1]");
    }

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return values_.size(); }

    double at(std::size_t x, std::size_t y) const { return values_[y * width_ + x]; }
    double& at(std::size_t x, std::size_t y) { return values_[y * width_ + x]; }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    friend bool operator==(const GrayRaster&, const GrayRaster&) = default;

private:
    static std::size_t checked_count(std::size_t w, std::size_t h) {
        if (w == 0 || h == 0) throw ArgumentError("raster dimensions must be >= 1");
        return w * h;
    }

    std::size_t width_;
    std::size_t height_;
    std::vector<double> values_;
};

}  // namespace dermfuzz
