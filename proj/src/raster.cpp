#include "altcanvas/raster.hpp"

#include <png.h>

#include <cstring>
#include <stdexcept>
#include <string>

namespace altcanvas {

RasterImage::RasterImage(int w, int h, Rgba fill) : width(w), height(h) {
    pixels.resize(static_cast<std::size_t>(w) * h * 4);
    for (std::size_t i = 0; i < pixels.size(); i += 4) {
        pixels[i] = fill.r;
        pixels[i + 1] = fill.g;
        pixels[i + 2] = fill.b;
        pixels[i + 3] = fill.a;
    }
}

Rgba RasterImage::at(int x, int y) const {
    const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 4;
    return {pixels[i], pixels[i + 1], pixels[i + 2], pixels[i + 3]};
}

void RasterImage::set(int x, int y, Rgba c) {
    const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 4;
    pixels[i] = c.r;
    pixels[i + 1] = c.g;
    pixels[i + 2] = c.b;
    pixels[i + 3] = c.a;
}

RasterImage to_rgba(const GrayImage& gray) {
    RasterImage out(gray.width, gray.height);
    for (std::size_t i = 0; i < gray.pixels.size(); ++i) {
        out.pixels[i * 4] = out.pixels[i * 4 + 1] = out.pixels[i * 4 + 2] = gray.pixels[i];
        out.pixels[i * 4 + 3] = 255;
    }
    return out;
}

namespace {

struct ReadCursor {
    std::span<const std::uint8_t> data;
    std::size_t offset = 0;
};

void on_png_error(png_structp, png_const_charp message) {
    throw std::runtime_error(std::string("png: ") + message);
}

void on_png_warning(png_structp, png_const_charp) {}

} // namespace

Bytes encode_png(const RasterImage& img) {
    if (img.width <= 0 || img.height <= 0) throw std::runtime_error("png: empty image");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, on_png_error, on_png_warning);
    if (!png) throw std::runtime_error("png: cannot allocate writer");
    png_infop info = png_create_info_struct(png);
    Bytes out;
    try {
        png_set_write_fn(
            png, &out,
            [](png_structp p, png_bytep data, png_size_t len) {
                auto* buf = static_cast<Bytes*>(png_get_io_ptr(p));
                buf->insert(buf->end(), data, data + len);
            },
            [](png_structp) {});
        png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height), 8,
                     PNG_COLOR_TYPE_RGBA, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                     PNG_FILTER_TYPE_DEFAULT);
        png_write_info(png, info);
        for (int y = 0; y < img.height; ++y)
            png_write_row(png, img.pixels.data() + static_cast<std::size_t>(y) * img.width * 4);
        png_write_end(png, nullptr);
    } catch (...) {
        png_destroy_write_struct(&png, &info);
        throw;
    }
    png_destroy_write_struct(&png, &info);
    return out;
}

RasterImage decode_png(std::span<const std::uint8_t> data) {
    if (data.size() < 8 || png_sig_cmp(data.data(), 0, 8) != 0)
        throw std::runtime_error("png: bad signature");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, on_png_error, on_png_warning);
    if (!png) throw std::runtime_error("png: cannot allocate reader");
    png_infop info = png_create_info_struct(png);
    ReadCursor cursor{data, 0};
    RasterImage img;
    try {
        png_set_read_fn(png, &cursor, [](png_structp p, png_bytep out, png_size_t len) {
            auto* c = static_cast<ReadCursor*>(png_get_io_ptr(p));
            if (c->offset + len > c->data.size()) png_error(p, "truncated data");
            std::memcpy(out, c->data.data() + c->offset, len);
            c->offset += len;
        });
        png_read_info(png, info);
        const auto color = png_get_color_type(png, info);
        const auto depth = png_get_bit_depth(png, info);
        if (depth == 16) png_set_strip_16(png);
        if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
        if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
        const bool has_trns = png_get_valid(png, info, PNG_INFO_tRNS) != 0;
        if (has_trns) png_set_tRNS_to_alpha(png);
        if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(png);
        if (!has_trns && (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_GRAY ||
                          color == PNG_COLOR_TYPE_PALETTE))
            png_set_filler(png, 0xFF, PNG_FILLER_AFTER);
        png_set_interlace_handling(png);
        png_read_update_info(png, info);

        img.width = static_cast<int>(png_get_image_width(png, info));
        img.height = static_cast<int>(png_get_image_height(png, info));
        img.pixels.resize(static_cast<std::size_t>(img.width) * img.height * 4);
        std::vector<png_bytep> rows(static_cast<std::size_t>(img.height));
        for (int y = 0; y < img.height; ++y)
            rows[static_cast<std::size_t>(y)] = img.pixels.data() + static_cast<std::size_t>(y) * img.width * 4;
        png_read_image(png, rows.data());
        png_read_end(png, nullptr);
    } catch (...) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw;
    }
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

} // namespace altcanvas
