#include "altcanvas/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace altcanvas::reference {

namespace {

int clamp_px(const GrayImage& img, int x, int y) {
    return img.at(std::clamp(x, 0, img.width - 1), std::clamp(y, 0, img.height - 1));
}

constexpr int kSobelX[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
constexpr int kSobelY[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};

} // namespace

GrayImage luma(const RasterImage& img) {
    GrayImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const Rgba p = img.at(x, y);
            out.at(x, y) = static_cast<std::uint8_t>((299 * p.r + 587 * p.g + 114 * p.b + 500) / 1000);
        }
    return out;
}

Gradients sobel(const GrayImage& img) {
    Gradients g{img.width, img.height, {}, {}};
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            int sx = 0, sy = 0;
            for (int j = -1; j <= 1; ++j)
                for (int i = -1; i <= 1; ++i) {
                    const int v = clamp_px(img, x + i, y + j);
                    sx += kSobelX[j + 1][i + 1] * v;
                    sy += kSobelY[j + 1][i + 1] * v;
                }
            g.gx.push_back(sx);
            g.gy.push_back(sy);
        }
    return g;
}

GrayImage magnitude(const Gradients& g) {
    GrayImage out(g.width, g.height);
    for (std::size_t i = 0; i < out.pixels.size(); ++i) {
        const double m = std::sqrt(static_cast<double>(g.gx[i]) * g.gx[i] + static_cast<double>(g.gy[i]) * g.gy[i]);
        out.pixels[i] = static_cast<std::uint8_t>(std::min(255.0, std::floor(m * 255.0 / 1020.0)));
    }
    return out;
}

GrayImage gaussian_blur(const GrayImage& img, double sigma) {
    const auto taps = gaussian_taps(sigma);
    const int r = static_cast<int>(taps.size() / 2);
    if (r == 0) return img;
    GrayImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            std::int64_t acc = 0;
            for (int j = -r; j <= r; ++j) {
                std::int64_t row = 0;
                const int yy = std::clamp(y + j, 0, img.height - 1);
                for (int i = -r; i <= r; ++i)
                    row += taps[static_cast<std::size_t>(i + r)] * clamp_px(img, x + i, yy);
                acc += taps[static_cast<std::size_t>(j + r)] * row;
            }
            out.at(x, y) = static_cast<std::uint8_t>(std::clamp<std::int64_t>((acc + (std::int64_t{1} << 31)) >> 32, 0, 255));
        }
    return out;
}

GrayImage non_max_suppression(const Gradients& g) {
    GrayImage out(g.width, g.height);
    auto mag = [&](int x, int y) -> std::int64_t {
        if (x < 0 || y < 0 || x >= g.width || y >= g.height) return 0;
        return g.magnitude_squared(static_cast<std::size_t>(y) * g.width + x);
    };
    for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * g.width + x;
            const std::int64_t m = mag(x, y);
            if (m == 0) continue;
            // angle in degrees folded to [0, 180)
            double angle = std::atan2(static_cast<double>(g.gy[i]), static_cast<double>(g.gx[i])) * 180.0 / M_PI;
            if (angle < 0) angle += 180.0;
            bool keep;
            if (angle < 22.5 || angle >= 157.5)
                keep = m > mag(x - 1, y) && m >= mag(x + 1, y);
            else if (angle >= 67.5 && angle < 112.5)
                keep = m > mag(x, y - 1) && m >= mag(x, y + 1);
            else if (angle < 67.5)   // gx, gy same sign: gradient points down-right
                keep = m > mag(x - 1, y - 1) && m > mag(x + 1, y + 1);
            else
                keep = m > mag(x + 1, y - 1) && m > mag(x - 1, y + 1);
            if (keep) out.pixels[i] = normalized_magnitude(m);
        }
    return out;
}

} // namespace altcanvas::reference
