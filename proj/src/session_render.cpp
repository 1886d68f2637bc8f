#include "altcanvas/session_render.hpp"

namespace altcanvas {

std::string_view to_string(RenderKind k) {
    switch (k) {
    case RenderKind::Snapshot: return "snapshot";
    case RenderKind::Color: return "color";
    case RenderKind::Tactile: return "tactile";
    }
    return "snapshot";
}

std::optional<RenderKind> parse_render_kind(std::string_view text) {
    for (auto k : {RenderKind::Snapshot, RenderKind::Color, RenderKind::Tactile})
        if (to_string(k) == text) return k;
    return std::nullopt;
}

namespace {

std::string media_type(ExportFormat f) { return f == ExportFormat::Png ? "image/png" : "image/svg+xml"; }

} // namespace

RenderOutput render_scene(const Scene& scene, const ImageStore& store, GenBackend& backend,
                          const RenderRequest& request) {
    request.edges.validate();
    const ExportFormat format =
        request.format.value_or(request.kind == RenderKind::Tactile ? ExportFormat::Svg : ExportFormat::Png);
    if (request.kind != RenderKind::Tactile && format == ExportFormat::Svg)
        throw Error(ErrorCode::UnsupportedFormat, std::string(to_string(request.kind)) + " renders are PNG only");

    RenderOutput out;
    out.media_type = media_type(format);
    try {
        switch (request.kind) {
        case RenderKind::Snapshot: {
            auto composed = compose(scene, store);
            out.bytes = export_image(composed.image, format);
            out.warnings = std::move(composed.warnings);
            break;
        }
        case RenderKind::Color: {
            auto rendered = background_render(backend, scene, store, request.instruction);
            out.bytes = export_image(rendered.image, format);
            out.warnings = std::move(rendered.warnings);
            break;
        }
        case RenderKind::Tactile: {
            auto composed = compose(scene, store);
            const VectorDoc doc = tactile_vectorize(detect_edges(composed.image, request.edges));
            out.bytes = export_image(doc, format);
            out.warnings = std::move(composed.warnings);
            break;
        }
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(ErrorCode::RenderFailed, std::string("render failed: ") + e.what());
    }
    return out;
}

} // namespace altcanvas
