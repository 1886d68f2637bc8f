#pragma once

#include <optional>
#include <string>
#include <vector>

#include "altcanvas/genai.hpp"
#include "altcanvas/render.hpp"

namespace altcanvas {

enum class RenderKind { Snapshot, Color, Tactile };

std::string_view to_string(RenderKind k);
std::optional<RenderKind> parse_render_kind(std::string_view text);

struct RenderRequest {
    RenderKind kind = RenderKind::Snapshot;
    std::optional<ExportFormat> format;   // default: SVG for tactile, PNG otherwise
    EdgeParams edges;
    std::string instruction;              // background instruction for color renders
};

struct RenderOutput {
    Bytes bytes;
    std::string media_type;
    std::vector<std::string> warnings;
};

/// snapshot = composed PNG; color = backend background render (PNG);
/// tactile = compose -> edges -> vectorize, SVG or rasterized PNG.
/// Throws InvalidThresholds, UnsupportedFormat, or RenderFailed.
RenderOutput render_scene(const Scene& scene, const ImageStore& store, GenBackend& backend,
                          const RenderRequest& request);

} // namespace altcanvas
