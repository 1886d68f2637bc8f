#include "altcanvas/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace altcanvas {

std::int64_t isqrt(std::int64_t v) {
    if (v <= 0) return 0;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
    while (r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

std::vector<std::int64_t> gaussian_taps(double sigma) {
    if (sigma <= 0.0) return {65536};
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        w[static_cast<std::size_t>(i + radius)] = std::exp(-(i * i) / (2.0 * sigma * sigma));
        sum += w[static_cast<std::size_t>(i + radius)];
    }
    std::vector<std::int64_t> taps(w.size());
    std::int64_t total = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        taps[i] = std::llround(w[i] / sum * 65536.0);
        total += taps[i];
    }
    taps[static_cast<std::size_t>(radius)] += 65536 - total;
    return taps;
}

namespace kernels {

GrayImage luma(const RasterImage& img) {
    GrayImage out(img.width, img.height);
    const std::int64_t n = static_cast<std::int64_t>(img.width) * img.height;
    const std::uint8_t* src = img.pixels.data();
    std::uint8_t* dst = out.pixels.data();
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const std::uint8_t* p = src + i * 4;
        dst[i] = static_cast<std::uint8_t>((299 * p[0] + 587 * p[1] + 114 * p[2] + 500) / 1000);
    }
    return out;
}

Gradients sobel(const GrayImage& img) {
    const int w = img.width, h = img.height;
    Gradients g{w, h, std::vector<std::int32_t>(static_cast<std::size_t>(w) * h),
                std::vector<std::int32_t>(static_cast<std::size_t>(w) * h)};
    if (w == 0 || h == 0) return g;
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        const std::uint8_t* up = img.pixels.data() + static_cast<std::size_t>(std::max(y - 1, 0)) * w;
        const std::uint8_t* mid = img.pixels.data() + static_cast<std::size_t>(y) * w;
        const std::uint8_t* dn = img.pixels.data() + static_cast<std::size_t>(std::min(y + 1, h - 1)) * w;
        std::int32_t* gx = g.gx.data() + static_cast<std::size_t>(y) * w;
        std::int32_t* gy = g.gy.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            const int l = std::max(x - 1, 0);
            const int r = std::min(x + 1, w - 1);
            gx[x] = (up[r] + 2 * mid[r] + dn[r]) - (up[l] + 2 * mid[l] + dn[l]);
            gy[x] = (dn[l] + 2 * dn[x] + dn[r]) - (up[l] + 2 * up[x] + up[r]);
        }
    }
    return g;
}

GrayImage magnitude(const Gradients& g) {
    GrayImage out(g.width, g.height);
    const std::int64_t n = static_cast<std::int64_t>(g.width) * g.height;
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        out.pixels[static_cast<std::size_t>(i)] = normalized_magnitude(g.magnitude_squared(static_cast<std::size_t>(i)));
    return out;
}

GrayImage gaussian_blur(const GrayImage& img, double sigma) {
    const auto taps = gaussian_taps(sigma);
    const int radius = static_cast<int>(taps.size() / 2);
    const int w = img.width, h = img.height;
    if (radius == 0 || w == 0 || h == 0) return img;

    std::vector<std::int64_t> tmp(static_cast<std::size_t>(w) * h);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        const std::uint8_t* row = img.pixels.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            std::int64_t acc = 0;
            for (int k = -radius; k <= radius; ++k)
                acc += taps[static_cast<std::size_t>(k + radius)] * row[std::clamp(x + k, 0, w - 1)];
            tmp[static_cast<std::size_t>(y) * w + x] = acc;
        }
    }
    GrayImage out(w, h);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::int64_t acc = 0;
            for (int k = -radius; k <= radius; ++k)
                acc += taps[static_cast<std::size_t>(k + radius)] *
                       tmp[static_cast<std::size_t>(std::clamp(y + k, 0, h - 1)) * w + x];
            const std::int64_t v = (acc + (std::int64_t{1} << 31)) >> 32;
            out.pixels[static_cast<std::size_t>(y) * w + x] = static_cast<std::uint8_t>(std::clamp<std::int64_t>(v, 0, 255));
        }
    }
    return out;
}

GrayImage non_max_suppression(const Gradients& g) {
    const int w = g.width, h = g.height;
    GrayImage out(w, h);
    std::vector<std::int64_t> mag(static_cast<std::size_t>(w) * h);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(mag.size()); ++i)
        mag[static_cast<std::size_t>(i)] = g.magnitude_squared(static_cast<std::size_t>(i));

    auto at = [&](int x, int y) -> std::int64_t {
        if (x < 0 || y < 0 || x >= w || y >= h) return 0;
        return mag[static_cast<std::size_t>(y) * w + x];
    };

    // Direction bins follow the usual tan(22.5 deg) / tan(67.5 deg) split in
    // Q15 fixed point. Ties are broken towards the left / upper neighbour so
    // a symmetric ridge keeps exactly one pixel.
    constexpr std::int64_t kTan22 = 13573;
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            const std::int64_t m = mag[i];
            if (m == 0) continue;
            const std::int64_t ax = std::abs(g.gx[i]);
            const std::int64_t ay = std::abs(g.gy[i]);
            const std::int64_t tg22x = ax * kTan22;
            const std::int64_t yq = ay << 15;
            bool keep;
            if (yq < tg22x) {
                keep = m > at(x - 1, y) && m >= at(x + 1, y);
            } else if (yq > tg22x + (ax << 16)) {
                keep = m > at(x, y - 1) && m >= at(x, y + 1);
            } else {
                const int s = ((g.gx[i] ^ g.gy[i]) < 0) ? -1 : 1;
                keep = m > at(x - s, y - 1) && m > at(x + s, y + 1);
            }
            if (keep) out.pixels[i] = normalized_magnitude(m);
        }
    }
    return out;
}

} // namespace kernels

} // namespace altcanvas
