// Serial reference kernels against the OpenMP kernels on a 600x600 canvas.

#include <random>

#include <benchmark/benchmark.h>

#include "altcanvas/kernels.hpp"
#include "altcanvas/render.hpp"

using namespace altcanvas;

namespace {

RasterImage noise(int w, int h) {
    std::mt19937_64 rng(1);
    RasterImage img(w, h);
    for (auto& b : img.pixels) b = static_cast<std::uint8_t>(rng() & 0xFF);
    return img;
}

const RasterImage& canvas() {
    static const RasterImage img = noise(600, 600);
    return img;
}

const GrayImage& gray() {
    static const GrayImage g = kernels::luma(canvas());
    return g;
}

void bm_luma_serial(benchmark::State& s) {
    for (auto _ : s) benchmark::DoNotOptimize(reference::luma(canvas()));
}
void bm_luma_omp(benchmark::State& s) {
    for (auto _ : s) benchmark::DoNotOptimize(kernels::luma(canvas()));
}
void bm_sobel_serial(benchmark::State& s) {
    for (auto _ : s) benchmark::DoNotOptimize(reference::magnitude(reference::sobel(gray())));
}
void bm_sobel_omp(benchmark::State& s) {
    for (auto _ : s) benchmark::DoNotOptimize(kernels::magnitude(kernels::sobel(gray())));
}
void bm_blur_serial(benchmark::State& s) {
    for (auto _ : s) benchmark::DoNotOptimize(reference::gaussian_blur(gray(), 1.4));
}
void bm_blur_omp(benchmark::State& s) {
    for (auto _ : s) benchmark::DoNotOptimize(kernels::gaussian_blur(gray(), 1.4));
}
void bm_nms_serial(benchmark::State& s) {
    const auto g = reference::sobel(gray());
    for (auto _ : s) benchmark::DoNotOptimize(reference::non_max_suppression(g));
}
void bm_nms_omp(benchmark::State& s) {
    const auto g = kernels::sobel(gray());
    for (auto _ : s) benchmark::DoNotOptimize(kernels::non_max_suppression(g));
}
void bm_canny_pipeline(benchmark::State& s) {
    EdgeParams p;
    p.algorithm = EdgeAlgorithm::Canny;
    for (auto _ : s) benchmark::DoNotOptimize(canny_edges(canvas(), p));
}

} // namespace

BENCHMARK(bm_luma_serial);
BENCHMARK(bm_luma_omp);
BENCHMARK(bm_sobel_serial);
BENCHMARK(bm_sobel_omp);
BENCHMARK(bm_blur_serial);
BENCHMARK(bm_blur_omp);
BENCHMARK(bm_nms_serial);
BENCHMARK(bm_nms_omp);
BENCHMARK(bm_canny_pipeline);

BENCHMARK_MAIN();
