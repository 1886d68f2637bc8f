#pragma once

#include <cstdint>
#include <vector>

#include "altcanvas/raster.hpp"

// Pixel kernels behind the render pipeline. Everything here is integer
// arithmetic so results are bit-identical whatever the thread count.
// kernels:: is the OpenMP row-parallel version used in production;
// reference:: is a naive serial per-pixel version kept for tests and the
// benchmark.

namespace altcanvas {

struct Gradients {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> gx;
    std::vector<std::int32_t> gy;

    std::int64_t magnitude_squared(std::size_t i) const {
        return std::int64_t{gx[i]} * gx[i] + std::int64_t{gy[i]} * gy[i];
    }
};

// Largest value whose square is <= v.
std::int64_t isqrt(std::int64_t v);

// Sobel magnitude scaled by 255/1020 (so a full 0->255 step maps to 255) and clamped.
inline std::uint8_t normalized_magnitude(std::int64_t magnitude_squared) {
    const std::int64_t m = isqrt(magnitude_squared) / 4;
    return static_cast<std::uint8_t>(m > 255 ? 255 : m);
}

// Fixed-point (sum 65536) 1-D Gaussian taps, radius ceil(3 sigma). sigma <= 0 gives {65536}.
std::vector<std::int64_t> gaussian_taps(double sigma);

namespace kernels {

// Y = (299 R + 587 G + 114 B + 500) / 1000; alpha is ignored.
GrayImage luma(const RasterImage& img);
// 3x3 Sobel with replicated borders.
Gradients sobel(const GrayImage& img);
GrayImage magnitude(const Gradients& g);
// Separable blur with replicated borders and round-to-nearest.
GrayImage gaussian_blur(const GrayImage& img, double sigma);
// Keeps local maxima along the quantized gradient direction; returns the
// normalized magnitude at kept pixels and 0 elsewhere.
GrayImage non_max_suppression(const Gradients& g);

} // namespace kernels

namespace reference {

GrayImage luma(const RasterImage& img);
Gradients sobel(const GrayImage& img);
GrayImage magnitude(const Gradients& g);
GrayImage gaussian_blur(const GrayImage& img, double sigma);
GrayImage non_max_suppression(const Gradients& g);

} // namespace reference

} // namespace altcanvas
