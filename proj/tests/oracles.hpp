#pragma once

// Independent brute-force checks used by unit and acceptance tests. None of
// these call into the code path they are used to verify.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "altcanvas/raster.hpp"
#include "altcanvas/scene.hpp"

namespace oracle {

// Pixel rectangle [x0, x1) x [y0, y1) computed directly from center and size.
struct PixelBox {
    int x0, y0, x1, y1;
};

inline PixelBox pixel_box(int cx, int cy, int w, int h) {
    // floor(w/2) for positive w, spelled out
    const int half_w = (w - (w % 2)) / 2;
    const int half_h = (h - (h % 2)) / 2;
    return {cx - half_w, cy - half_h, cx - half_w + w, cy - half_h + h};
}

// True if some integer pixel lies in both boxes: enumerates every pixel of a.
inline bool pixels_overlap(const altcanvas::SceneObject& a, const altcanvas::SceneObject& b) {
    const PixelBox pa = pixel_box(a.center.x, a.center.y, a.size.width, a.size.height);
    const PixelBox pb = pixel_box(b.center.x, b.center.y, b.size.width, b.size.height);
    for (int y = pa.y0; y < pa.y1; ++y)
        for (int x = pa.x0; x < pa.x1; ++x)
            if (x >= pb.x0 && x < pb.x1 && y >= pb.y0 && y < pb.y1) return true;
    return false;
}

// Thirds membership by rational comparison: region k holds 3*c in [k*extent, (k+1)*extent).
inline int third(int c, int extent) {
    for (int k = 0; k < 2; ++k)
        if (3LL * c < static_cast<long long>(k + 1) * extent) return k;
    return 2;
}

// Naive luma + Sobel magnitude in floating point, floor of |G| * 255 / 1020, clamped.
inline std::vector<int> sobel_magnitude(const altcanvas::RasterImage& img) {
    const int w = img.width, h = img.height;
    std::vector<int> gray(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const auto p = img.at(x, y);
            // 0.299 R + 0.587 G + 0.114 B, rounded half up, in exact integer thousandths
            gray[static_cast<std::size_t>(y) * w + x] = (p.r * 299 + p.g * 587 + p.b * 114 + 500) / 1000;
        }
    auto px = [&](int x, int y) {
        x = std::clamp(x, 0, w - 1);
        y = std::clamp(y, 0, h - 1);
        return gray[static_cast<std::size_t>(y) * w + x];
    };
    std::vector<int> out(gray.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const int gx = -px(x - 1, y - 1) + px(x + 1, y - 1) - 2 * px(x - 1, y) + 2 * px(x + 1, y) -
                           px(x - 1, y + 1) + px(x + 1, y + 1);
            const int gy = -px(x - 1, y - 1) - 2 * px(x, y - 1) - px(x + 1, y - 1) + px(x - 1, y + 1) +
                           2 * px(x, y + 1) + px(x + 1, y + 1);
            const double m = std::sqrt(double(gx) * gx + double(gy) * gy) * 255.0 / 1020.0;
            out[static_cast<std::size_t>(y) * w + x] = static_cast<int>(std::min(255.0, std::floor(m)));
        }
    return out;
}

inline altcanvas::RasterImage vertical_step(int w, int h, int step_col) {
    altcanvas::RasterImage img(w, h, {0, 0, 0, 255});
    for (int y = 0; y < h; ++y)
        for (int x = step_col; x < w; ++x) img.set(x, y, {255, 255, 255, 255});
    return img;
}

inline altcanvas::RasterImage random_image(std::mt19937_64& rng, int w, int h) {
    altcanvas::RasterImage img(w, h);
    for (auto& b : img.pixels) b = static_cast<std::uint8_t>(rng() & 0xFF);
    for (std::size_t i = 3; i < img.pixels.size(); i += 4) img.pixels[i] = 255;
    return img;
}

} // namespace oracle
