#include "altcanvas/render.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <deque>
#include <sstream>

#include "altcanvas/kernels.hpp"

namespace altcanvas {

std::string_view to_string(EdgeAlgorithm a) {
    return a == EdgeAlgorithm::Sobel ? "sobel" : "canny";
}

std::optional<EdgeAlgorithm> parse_edge_algorithm(std::string_view text) {
    if (text == "sobel") return EdgeAlgorithm::Sobel;
    if (text == "canny") return EdgeAlgorithm::Canny;
    return std::nullopt;
}

std::optional<ExportFormat> parse_export_format(std::string_view text) {
    if (text == "png") return ExportFormat::Png;
    if (text == "svg") return ExportFormat::Svg;
    return std::nullopt;
}

void EdgeParams::validate() const {
    auto in_range = [](int v) { return v >= 0 && v <= 255; };
    if (!in_range(threshold) || !in_range(canny_low) || !in_range(canny_high))
        throw Error(ErrorCode::InvalidThresholds, "edge thresholds must be within 0..255");
    if (canny_low >= canny_high)
        throw Error(ErrorCode::InvalidThresholds,
                    "canny low threshold (" + std::to_string(canny_low) +
                        ") must be below the high threshold (" + std::to_string(canny_high) + ")");
    if (gaussian_sigma < 0.0) throw Error(ErrorCode::InvalidThresholds, "gaussian sigma must be >= 0");
}

namespace {

RasterImage placeholder(int w, int h) {
    RasterImage img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (((x / 8) + (y / 8)) % 2 == 0) img.set(x, y, {160, 160, 160, 255});
    return img;
}

void blit_scaled(RasterImage& dst, const RasterImage& src, const Box& box) {
    const int w = box.bottom_right.x - box.top_left.x;
    const int h = box.bottom_right.y - box.top_left.y;
    if (w <= 0 || h <= 0 || src.width == 0 || src.height == 0) return;
    const int y0 = std::max(0, box.top_left.y);
    const int y1 = std::min(dst.height, box.bottom_right.y);
    const int x0 = std::max(0, box.top_left.x);
    const int x1 = std::min(dst.width, box.bottom_right.x);
#pragma omp parallel for schedule(static)
    for (int y = y0; y < y1; ++y) {
        const int sy = static_cast<int>(static_cast<std::int64_t>(y - box.top_left.y) * src.height / h);
        for (int x = x0; x < x1; ++x) {
            const int sx = static_cast<int>(static_cast<std::int64_t>(x - box.top_left.x) * src.width / w);
            const std::uint8_t* s = src.pixels.data() + (static_cast<std::size_t>(sy) * src.width + sx) * 4;
            std::uint8_t* d = dst.pixels.data() + (static_cast<std::size_t>(y) * dst.width + x) * 4;
            const int a = s[3];
            for (int c = 0; c < 3; ++c) d[c] = static_cast<std::uint8_t>((s[c] * a + d[c] * (255 - a) + 127) / 255);
            d[3] = static_cast<std::uint8_t>(a + (d[3] * (255 - a) + 127) / 255);
        }
    }
}

} // namespace

ComposeResult compose(const Scene& scene, const ImageStore& store) {
    ComposeResult result{RasterImage(scene.config().width, scene.config().height), {}};
    for (const auto& obj : scene.objects()) {
        std::optional<RasterImage> src;
        if (obj.image_ref) src = store.get_raster(*obj.image_ref);
        if (!src) {
            result.warnings.push_back("missing image for " + obj.name +
                                      (obj.image_ref ? " (" + *obj.image_ref + ")" : std::string()));
            src = placeholder(obj.size.width, obj.size.height);
        }
        blit_scaled(result.image, *src, bounding_box(obj));
    }
    return result;
}

GrayImage sobel_edges(const RasterImage& img, const EdgeParams& params) {
    params.validate();
    GrayImage mag = kernels::magnitude(kernels::sobel(kernels::luma(img)));
    for (auto& p : mag.pixels) p = p > params.threshold ? 255 : 0;
    return mag;
}

GrayImage hysteresis(const GrayImage& suppressed, int low, int high) {
    const int w = suppressed.width, h = suppressed.height;
    GrayImage out(w, h);
    std::deque<std::pair<int, int>> queue;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (suppressed.at(x, y) > high) {
                out.at(x, y) = 255;
                queue.emplace_back(x, y);
            }
    while (!queue.empty()) {
        auto [x, y] = queue.front();
        queue.pop_front();
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                const int nx = x + dx, ny = y + dy;
                if (nx < 0 || ny < 0 || nx >= w || ny >= h || out.at(nx, ny)) continue;
                if (suppressed.at(nx, ny) > low) {
                    out.at(nx, ny) = 255;
                    queue.emplace_back(nx, ny);
                }
            }
    }
    return out;
}

GrayImage canny_edges(const RasterImage& img, const EdgeParams& params) {
    params.validate();
    const GrayImage blurred = kernels::gaussian_blur(kernels::luma(img), params.gaussian_sigma);
    const GrayImage thin = kernels::non_max_suppression(kernels::sobel(blurred));
    return hysteresis(thin, params.canny_low, params.canny_high);
}

GrayImage detect_edges(const RasterImage& img, const EdgeParams& params) {
    return params.algorithm == EdgeAlgorithm::Sobel ? sobel_edges(img, params) : canny_edges(img, params);
}

namespace {

// Orthogonal neighbours first so straight runs are followed before corners are cut.
constexpr std::array<std::pair<int, int>, 8> kWalkOrder = {
    {{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 1}, {-1, 1}, {-1, -1}, {1, -1}}};

} // namespace

VectorDoc tactile_vectorize(const GrayImage& edges) {
    const int w = edges.width, h = edges.height;
    VectorDoc doc{w, h, {}};
    auto is_edge = [&](int x, int y) { return x >= 0 && y >= 0 && x < w && y < h && edges.at(x, y) != 0; };
    std::vector<std::uint8_t> visited(static_cast<std::size_t>(w) * h, 0);
    auto seen = [&](int x, int y) -> std::uint8_t& { return visited[static_cast<std::size_t>(y) * w + x]; };

    auto degree = [&](int x, int y) {
        int n = 0;
        for (auto [dx, dy] : kWalkOrder) n += is_edge(x + dx, y + dy) ? 1 : 0;
        return n;
    };

    auto walk = [&](int x, int y) {
        Polyline line;
        seen(x, y) = 1;
        line.points.push_back({x, y});
        for (;;) {
            bool advanced = false;
            for (auto [dx, dy] : kWalkOrder) {
                const int nx = x + dx, ny = y + dy;
                if (is_edge(nx, ny) && !seen(nx, ny)) {
                    x = nx;
                    y = ny;
                    seen(x, y) = 1;
                    line.points.push_back({x, y});
                    advanced = true;
                    break;
                }
            }
            if (!advanced) break;
        }
        if (line.points.size() >= kMinPolylinePoints) doc.elements.emplace_back(std::move(line));
    };

    for (int pass = 0; pass < 2; ++pass)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                if (is_edge(x, y) && !seen(x, y) && (pass == 1 || degree(x, y) <= 1)) walk(x, y);
    return doc;
}

VectorDoc scene_layout(const Scene& scene) {
    VectorDoc doc{scene.config().width, scene.config().height, {}};
    for (const auto& obj : scene.objects())
        if (obj.image_ref) doc.elements.emplace_back(ImagePlacement{*obj.image_ref, bounding_box(obj)});
    return doc;
}

namespace {

void draw_line(RasterImage& img, VecPoint a, VecPoint b, Rgba color) {
    int dx = std::abs(b.x - a.x), sx = a.x < b.x ? 1 : -1;
    int dy = -std::abs(b.y - a.y), sy = a.y < b.y ? 1 : -1;
    int err = dx + dy;
    for (;;) {
        if (a.x >= 0 && a.y >= 0 && a.x < img.width && a.y < img.height) img.set(a.x, a.y, color);
        if (a.x == b.x && a.y == b.y) break;
        const int e2 = 2 * err;
        if (e2 >= dy) { err += dy; a.x += sx; }
        if (e2 <= dx) { err += dx; a.y += sy; }
    }
}

} // namespace

RasterImage rasterize(const VectorDoc& doc) {
    RasterImage img(doc.width, doc.height);
    const Rgba black{0, 0, 0, 255};
    for (const auto& el : doc.elements) {
        if (const auto* line = std::get_if<Polyline>(&el)) {
            if (line->points.size() == 1) draw_line(img, line->points[0], line->points[0], black);
            for (std::size_t i = 1; i < line->points.size(); ++i)
                draw_line(img, line->points[i - 1], line->points[i], black);
        } else {
            const auto& p = std::get<ImagePlacement>(el);
            const Rgba gray{128, 128, 128, 255};
            const VecPoint tl{p.box.top_left.x, p.box.top_left.y};
            const VecPoint br{p.box.bottom_right.x - 1, p.box.bottom_right.y - 1};
            draw_line(img, tl, {br.x, tl.y}, gray);
            draw_line(img, {br.x, tl.y}, br, gray);
            draw_line(img, br, {tl.x, br.y}, gray);
            draw_line(img, {tl.x, br.y}, tl, gray);
        }
    }
    return img;
}

std::string to_svg(const VectorDoc& doc) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" xmlns:xlink=\"http://www.w3.org/1999/xlink\" "
        << "version=\"1.1\" width=\"" << doc.width << "\" height=\"" << doc.height << "\" viewBox=\"0 0 "
        << doc.width << ' ' << doc.height << "\">\n";
    for (const auto& el : doc.elements) {
        if (const auto* line = std::get_if<Polyline>(&el)) {
            out << "  <polyline fill=\"none\" stroke=\"#000000\" stroke-width=\"1\" points=\"";
            for (std::size_t i = 0; i < line->points.size(); ++i)
                out << (i ? " " : "") << line->points[i].x << ',' << line->points[i].y;
            out << "\"/>\n";
        } else {
            const auto& p = std::get<ImagePlacement>(el);
            out << "  <image x=\"" << p.box.top_left.x << "\" y=\"" << p.box.top_left.y << "\" width=\""
                << p.box.bottom_right.x - p.box.top_left.x << "\" height=\""
                << p.box.bottom_right.y - p.box.top_left.y << "\" xlink:href=\"images/" << p.image_ref
                << ".png\"/>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

Bytes export_image(const RasterImage& img, ExportFormat format) {
    if (format != ExportFormat::Png)
        throw Error(ErrorCode::UnsupportedFormat, "raster images can only be exported as PNG");
    return encode_png(img);
}

Bytes export_image(const VectorDoc& doc, ExportFormat format) {
    if (format == ExportFormat::Png) return encode_png(rasterize(doc));
    const auto svg = to_svg(doc);
    return Bytes(svg.begin(), svg.end());
}

} // namespace altcanvas
