#pragma once

#include <string>
#include <variant>
#include <vector>

#include "altcanvas/image_store.hpp"
#include "altcanvas/raster.hpp"
#include "altcanvas/scene.hpp"

namespace altcanvas {

enum class EdgeAlgorithm { Sobel, Canny };

std::string_view to_string(EdgeAlgorithm a);
std::optional<EdgeAlgorithm> parse_edge_algorithm(std::string_view text);

struct EdgeParams {
    EdgeAlgorithm algorithm = EdgeAlgorithm::Sobel;
    int threshold = 64;        // Sobel binarization, 0..255
    int canny_low = 50;
    int canny_high = 100;
    double gaussian_sigma = 1.4;

    // Throws InvalidThresholds.
    void validate() const;
};

struct ComposeResult {
    RasterImage image;
    std::vector<std::string> warnings;   // one per unresolved image reference
};

/// White background, objects nearest-neighbour scaled to their size and
/// alpha-composited at their box in z order. Missing images become a
/// checkerboard placeholder.
ComposeResult compose(const Scene& scene, const ImageStore& store);

// Binary edge maps: 255 = edge.
GrayImage sobel_edges(const RasterImage& img, const EdgeParams& params = {});
GrayImage canny_edges(const RasterImage& img, const EdgeParams& params = {});
GrayImage detect_edges(const RasterImage& img, const EdgeParams& params);

/// Strong pixels (> high) seed an 8-connected flood through weak pixels (> low).
GrayImage hysteresis(const GrayImage& suppressed, int low, int high);

struct VecPoint {
    int x = 0;
    int y = 0;

    bool operator==(const VecPoint&) const = default;
};

struct Polyline {
    std::vector<VecPoint> points;

    bool operator==(const Polyline&) const = default;
};

struct ImagePlacement {
    std::string image_ref;
    Box box;

    bool operator==(const ImagePlacement&) const = default;
};

using VectorElement = std::variant<ImagePlacement, Polyline>;

struct VectorDoc {
    int width = 0;
    int height = 0;
    std::vector<VectorElement> elements;
};

inline constexpr std::size_t kMinPolylinePoints = 5;

/// Traces 8-connected edge pixels into polylines by a greedy walk that starts
/// at line endpoints first; polylines under kMinPolylinePoints are dropped.
VectorDoc tactile_vectorize(const GrayImage& edge_map);

/// Layout document that places each object's image at its box.
VectorDoc scene_layout(const Scene& scene);

/// White canvas with polylines stroked 1 px black and placements outlined.
RasterImage rasterize(const VectorDoc& doc);

enum class ExportFormat { Png, Svg };

std::optional<ExportFormat> parse_export_format(std::string_view text);

// PNG is 8-bit RGBA; SVG 1.1 with integer coordinates. Raster to SVG throws UnsupportedFormat.
Bytes export_image(const RasterImage& img, ExportFormat format);
Bytes export_image(const VectorDoc& doc, ExportFormat format);
std::string to_svg(const VectorDoc& doc);

} // namespace altcanvas
