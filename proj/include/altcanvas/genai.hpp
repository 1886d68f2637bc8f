#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "altcanvas/image_store.hpp"
#include "altcanvas/raster.hpp"
#include "altcanvas/scene.hpp"

namespace altcanvas {

struct RewrittenPrompt {
    std::string main_object;
    std::string final_prompt;
};

/// Strips a leading command phrase ("Create an image of a ...") and articles
/// from the transcript and fills the style's image template. Throws
/// EmptyTranscript for blank input.
RewrittenPrompt rewrite_prompt(std::string_view transcript, ImageStyle style);

inline constexpr std::size_t kMaxNameLength = 40;

/// First kMaxNameLength UTF-8 code points of the main object.
std::string object_name(std::string_view main_object);

enum class GenKind { Image, RemoveBackground, Describe, GlobalDescribe, Chat, BackgroundRender };

std::string_view to_string(GenKind kind);

struct GenRequest {
    GenKind kind = GenKind::Image;
    std::string prompt;                 // filled template or instruction
    std::string subject;                // main object / object name
    ImageStyle style = ImageStyle::Tactile;
    std::optional<Bytes> image;         // PNG input for background removal, description, chat, render
    std::optional<std::string> question;
    std::string context;                // stored description or offline canvas description
};

struct GenFailure {
    ErrorCode code = ErrorCode::BackendUnavailable;
    std::string message;
};

struct GenResult {
    std::optional<Bytes> image;         // PNG
    std::optional<std::string> description;
    std::optional<GenFailure> error;
};

/// Pluggable generative service. Implementations report failures through
/// GenResult::error rather than throwing.
class GenBackend {
public:
    virtual ~GenBackend() = default;
    virtual std::string_view kind() const = 0;
    virtual GenResult generate_image(const GenRequest& request) = 0;
    virtual GenResult remove_background(const GenRequest& request) = 0;
    virtual GenResult describe_image(const GenRequest& request) = 0;
    virtual GenResult describe_canvas(const GenRequest& request) = 0;
    virtual GenResult answer_question(const GenRequest& request) = 0;
    virtual GenResult render_background(const GenRequest& request) = 0;
};

/// Seed-deterministic stand-in: every result is a pure function of the
/// request and the seed.
class MockBackend final : public GenBackend {
public:
    explicit MockBackend(std::uint64_t seed) : seed_(seed) {}

    std::string_view kind() const override { return "mock"; }
    GenResult generate_image(const GenRequest& request) override;
    GenResult remove_background(const GenRequest& request) override;
    GenResult describe_image(const GenRequest& request) override;
    GenResult describe_canvas(const GenRequest& request) override;
    GenResult answer_question(const GenRequest& request) override;
    GenResult render_background(const GenRequest& request) override;

    // Side length of generated rasters.
    static constexpr int kImageSize = 128;

private:
    std::uint64_t seed_;
};

struct RemoteConfig {
    std::string endpoint;               // e.g. http://localhost:9000
    std::string api_key;
    std::string model = "default";
    std::chrono::milliseconds timeout{60000};
    int retries = 2;
    std::vector<std::chrono::milliseconds> backoff{std::chrono::milliseconds(1000),
                                                   std::chrono::milliseconds(4000)};

    /// Reads ALTCANVAS_BACKEND_URL, ALTCANVAS_API_KEY, ALTCANVAS_MODEL and
    /// ALTCANVAS_TIMEOUT_S. Throws InvalidConfig when the URL is missing.
    static RemoteConfig from_environment();
};

/// JSON-over-HTTP adapter: POST {endpoint}/v1/{operation}. See README for
/// the request and response schema.
class RemoteBackend final : public GenBackend {
public:
    explicit RemoteBackend(RemoteConfig config);

    std::string_view kind() const override { return "remote"; }
    GenResult generate_image(const GenRequest& request) override;
    GenResult remove_background(const GenRequest& request) override;
    GenResult describe_image(const GenRequest& request) override;
    GenResult describe_canvas(const GenRequest& request) override;
    GenResult answer_question(const GenRequest& request) override;
    GenResult render_background(const GenRequest& request) override;

private:
    GenResult post(std::string_view operation, const std::string& body);

    RemoteConfig config_;
};

std::unique_ptr<GenBackend> make_backend(std::string_view kind, std::uint64_t seed);

struct GeneratedObject {
    std::string name;
    std::string main_object;
    std::string prompt;                 // final filled template
    Bytes image;                        // PNG after background removal
    std::string description;
};

/// rewrite_prompt -> generate -> remove background -> describe. Throws Error
/// with the backend's failure code; never returns partial results.
GeneratedObject generate_object(GenBackend& backend, std::string_view transcript, ImageStyle style);

/// Sends the snapshot with the global description prompt. The mock answers
/// with the offline description passed as context.
std::string describe_canvas(GenBackend& backend, const Scene& scene, const Bytes& snapshot_png);

/// Throws EmptyTranscript for a blank question.
std::string answer_question(GenBackend& backend, const SceneObject& obj, const std::optional<Bytes>& image_png,
                            std::string_view question);

struct BackgroundRenderResult {
    RasterImage image;
    std::vector<std::string> warnings;
};

/// Composes the scene and asks the backend to re-render it following the
/// instruction. Backend failure falls back to the plain composition.
BackgroundRenderResult background_render(GenBackend& backend, const Scene& scene, const ImageStore& store,
                                         std::string_view instruction);

} // namespace altcanvas
