#pragma once

#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <jpeglib.h>
#include <png.h>

#include "dermfuzz/core/error.hpp"
#include "dermfuzz/imaging/raster.hpp"

namespace dermfuzz {

namespace detail {

inline std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open image file: " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("error reading image file: " + path.string());
    return bytes;
}

// Binary PPM (P6). Header tokens are whitespace-separated, '#' starts a comment.
inline RgbRaster decode_ppm(const std::vector<unsigned char>& bytes, const std::string& name) {
    std::size_t pos = 2;
    auto fail = [&](const char* why) { return FormatError(name + ": invalid PPM (" + why + ")"); };
    auto next_token = [&]() -> long {
        for (;;) {
            while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
            if (pos < bytes.size() && bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
                continue;
            }
            break;
        }
        if (pos >= bytes.size() || !std::isdigit(bytes[pos])) throw fail("bad header");
        long v = 0;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            v = v * 10 + (bytes[pos++] - '0');
            if (v > 1'000'000) throw fail("dimension too large");
        }
        return v;
    };
    const long w = next_token();
    const long h = next_token();
    const long maxval = next_token();
    if (w <= 0 || h <= 0) throw fail("zero dimension");
    if (maxval <= 0 || maxval > 255) throw fail("only 8-bit maxval is supported");
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw fail("missing header terminator");
    ++pos;
    const auto count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    if (bytes.size() - pos < count * 3) throw fail("truncated pixel data");
    std::vector<Rgb> px(count);
    for (std::size_t i = 0; i < count; ++i) {
        for (int c = 0; c < 3; ++c) {
            const unsigned v = bytes[pos++];
            px[i][c] = static_cast<std::uint8_t>(maxval == 255 ? v : (v * 255 + maxval / 2) / maxval);
        }
    }
    return RgbRaster(static_cast<std::size_t>(w), static_cast<std::size_t>(h), std::move(px));
}

inline RgbRaster decode_png(const std::vector<unsigned char>& bytes, const std::string& name) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
        throw FormatError(name + ": invalid PNG (" + image.message + ")");
    image.format = PNG_FORMAT_RGB;
    std::vector<unsigned char> buf(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
        std::string msg = image.message;
        png_image_free(&image);
        throw FormatError(name + ": invalid PNG (" + msg + ")");
    }
    std::vector<Rgb> px(static_cast<std::size_t>(image.width) * image.height);
    for (std::size_t i = 0; i < px.size(); ++i) px[i] = {buf[3 * i], buf[3 * i + 1], buf[3 * i + 2]};
    return RgbRaster(image.width, image.height, std::move(px));
}

struct JpegErrorManager {
    jpeg_error_mgr base;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

// No automatic objects with destructors may live in this frame: libjpeg reports
// errors by longjmp back to the setjmp point.
inline bool jpeg_decode_into(const std::vector<unsigned char>& bytes, std::vector<unsigned char>& rgb,
                             std::size_t& width, std::size_t& height, JpegErrorManager& err) {
    jpeg_decompress_struct cinfo{};
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = [](j_common_ptr info) {
        auto* e = reinterpret_cast<JpegErrorManager*>(info->err);
        (*info->err->format_message)(info, e->message);
        std::longjmp(e->jump, 1);
    };
    err.base.output_message = [](j_common_ptr) {};
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        return false;
    }
    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);
    width = cinfo.output_width;
    height = cinfo.output_height;
    rgb.resize(width * height * 3);
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = rgb.data() + static_cast<std::size_t>(cinfo.output_scanline) * width * 3;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return true;
}

inline RgbRaster decode_jpeg(const std::vector<unsigned char>& bytes, const std::string& name) {
    JpegErrorManager err{};
    std::vector<unsigned char> rgb;
    std::size_t width = 0;
    std::size_t height = 0;
    if (!jpeg_decode_into(bytes, rgb, width, height, err))
        throw FormatError(name + ": invalid JPEG (" + err.message + ")");
    if (width == 0 || height == 0) throw FormatError(name + ": invalid JPEG (empty image)");
    std::vector<Rgb> px(width * height);
    for (std::size_t i = 0; i < px.size(); ++i) px[i] = {rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]};
    return RgbRaster(width, height, std::move(px));
}

}  // namespace detail

/// Decodes a PPM (P6), PNG or JPEG file, sniffing the format from its magic bytes.
inline RgbRaster load_image(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw IoError("image file not found: " + path.string());
    const auto bytes = detail::read_bytes(path);
    const std::string name = path.string();
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') return detail::decode_ppm(bytes, name);
    if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0) return detail::decode_png(bytes, name);
    if (bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF)
        return detail::decode_jpeg(bytes, name);
    throw FormatError(name + ": unrecognized image format");
}

inline void save_ppm(const RgbRaster& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write image file: " + path.string());
    out << "P6\n" << img.width() << ' ' << img.height() << "\n255\n";
    for (const Rgb& p : img.pixels()) out.write(reinterpret_cast<const char*>(p.data()), 3);
    if (!out) throw IoError("error writing image file: " + path.string());
}

/// Writes an 8-bit grayscale PNG from row-major samples.
inline void save_png_gray(std::span<const std::uint8_t> samples, std::size_t width, std::size_t height,
                          const std::filesystem::path& path) {
    if (samples.size() != width * height) throw ArgumentError("save_png_gray: size mismatch");
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(width);
    image.height = static_cast<png_uint_32>(height);
    image.format = PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&image, path.c_str(), 0, samples.data(), 0, nullptr))
        throw IoError("cannot write PNG " + path.string() + ": " + image.message);
}

}  // namespace dermfuzz
