#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "altcanvas/codec.hpp"

namespace altcanvas {

struct Rgba {
    std::uint8_t r = 0, g = 0, b = 0, a = 255;

    bool operator==(const Rgba&) const = default;
};

/// Row-major 8-bit RGBA. pixels.size() == width * height * 4.
struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    RasterImage() = default;
    RasterImage(int w, int h, Rgba fill = {255, 255, 255, 255});

    Rgba at(int x, int y) const;
    void set(int x, int y, Rgba c);

    bool operator==(const RasterImage&) const = default;
};

/// Row-major single-channel 8-bit image (luma or binary edge map, 0/255).
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

    std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }

    bool operator==(const GrayImage&) const = default;
};

// Expands a gray map to opaque RGBA (v, v, v, 255).
RasterImage to_rgba(const GrayImage& gray);

// 8-bit RGBA PNG encoding through libpng; deterministic for identical input.
Bytes encode_png(const RasterImage& img);
// Accepts any PNG colour type and converts to 8-bit RGBA. Throws std::runtime_error.
RasterImage decode_png(std::span<const std::uint8_t> png);

} // namespace altcanvas
