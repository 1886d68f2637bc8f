#include "altcanvas/genai.hpp"

#include <regex>

#include "altcanvas/feedback.hpp"
#include "altcanvas/prompts.hpp"
#include "altcanvas/render.hpp"

namespace altcanvas {

std::string_view to_string(GenKind kind) {
    switch (kind) {
    case GenKind::Image: return "generate_image";
    case GenKind::RemoveBackground: return "remove_background";
    case GenKind::Describe: return "describe_image";
    case GenKind::GlobalDescribe: return "describe_canvas";
    case GenKind::Chat: return "answer_question";
    case GenKind::BackgroundRender: return "render_background";
    }
    return "generate_image";
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

const std::regex& command_verb() {
    static const std::regex re(R"(^(?:please\s+)?(?:create|add|generate|make|draw)(?:\s+me)?\s+)",
                               std::regex::icase);
    return re;
}

const std::regex& medium_of() {
    static const std::regex re(R"(^(?:\S+\s+){0,3}?(?:image|picture|graphic|drawing)s?\s+of\s+)", std::regex::icase);
    return re;
}

const std::regex& leading_article() {
    static const std::regex re(R"(^(?:a|an|the)\s+)", std::regex::icase);
    return re;
}

const std::regex& trailing_punctuation() {
    static const std::regex re(R"([\s.!?,;:]+$)");
    return re;
}

} // namespace

RewrittenPrompt rewrite_prompt(std::string_view transcript, ImageStyle style) {
    const std::string full = trim(transcript);
    if (full.empty()) throw Error(ErrorCode::EmptyTranscript, "the transcript is empty");

    std::string subject = full;
    std::smatch m;
    if (std::regex_search(subject, m, command_verb())) {
        subject = m.suffix().str();
        if (std::regex_search(subject, m, medium_of())) subject = m.suffix().str();
    }
    subject = std::regex_replace(subject, leading_article(), "");
    subject = std::regex_replace(subject, trailing_punctuation(), "");
    subject = trim(subject);
    if (subject.empty()) subject = full;

    const auto tmpl = style == ImageStyle::Tactile ? prompts::kTactileImage : prompts::kColorImage;
    return {subject, prompts::fill(tmpl, {{"mainObject", subject}, {"voiceText", full}})};
}

std::string object_name(std::string_view main_object) {
    std::size_t i = 0, points = 0;
    while (i < main_object.size() && points < kMaxNameLength) {
        const auto c = static_cast<unsigned char>(main_object[i]);
        std::size_t len = 1;
        if (c >= 0xF0) len = 4;
        else if (c >= 0xE0) len = 3;
        else if (c >= 0xC0) len = 2;
        if (i + len > main_object.size()) break;
        i += len;
        ++points;
    }
    return trim(main_object.substr(0, i));
}

std::unique_ptr<GenBackend> make_backend(std::string_view kind, std::uint64_t seed) {
    if (kind == "mock") return std::make_unique<MockBackend>(seed);
    if (kind == "remote") return std::make_unique<RemoteBackend>(RemoteConfig::from_environment());
    throw Error(ErrorCode::InvalidConfig, "backend must be mock or remote, got '" + std::string(kind) + "'");
}

namespace {

void raise_on_failure(const GenResult& r, std::string_view stage) {
    if (r.error) throw Error(r.error->code, std::string(stage) + ": " + r.error->message);
}

const Bytes& require_image(const GenResult& r, std::string_view stage) {
    raise_on_failure(r, stage);
    if (!r.image) throw Error(ErrorCode::BackendUnavailable, std::string(stage) + ": response had no image");
    return *r.image;
}

const std::string& require_text(const GenResult& r, std::string_view stage) {
    raise_on_failure(r, stage);
    if (!r.description)
        throw Error(ErrorCode::BackendUnavailable, std::string(stage) + ": response had no description");
    return *r.description;
}

} // namespace

GeneratedObject generate_object(GenBackend& backend, std::string_view transcript, ImageStyle style) {
    const auto rewritten = rewrite_prompt(transcript, style);
    GeneratedObject out;
    out.main_object = rewritten.main_object;
    out.name = object_name(rewritten.main_object);
    out.prompt = rewritten.final_prompt;

    GenRequest req;
    req.kind = GenKind::Image;
    req.prompt = rewritten.final_prompt;
    req.subject = out.name;
    req.style = style;
    const Bytes raw = require_image(backend.generate_image(req), "generate_image");

    req.kind = GenKind::RemoveBackground;
    req.image = raw;
    out.image = require_image(backend.remove_background(req), "remove_background");

    req.kind = GenKind::Describe;
    req.prompt = std::string(prompts::kObjectDescriptionQuestion);
    req.image = out.image;
    out.description = require_text(backend.describe_image(req), "describe_image");
    return out;
}

std::string describe_canvas(GenBackend& backend, const Scene& scene, const Bytes& snapshot_png) {
    GenRequest req;
    req.kind = GenKind::GlobalDescribe;
    req.prompt = std::string(prompts::kGlobalDescription);
    req.image = snapshot_png;
    req.context = fallback_global_description(scene);
    return require_text(backend.describe_canvas(req), "describe_canvas");
}

std::string answer_question(GenBackend& backend, const SceneObject& obj, const std::optional<Bytes>& image_png,
                            std::string_view question) {
    const std::string q = trim(question);
    if (q.empty()) throw Error(ErrorCode::EmptyTranscript, "the question is empty");
    GenRequest req;
    req.kind = GenKind::Chat;
    req.prompt = prompts::fill(prompts::kChat, {{"voiceText", q}});
    req.subject = obj.name;
    req.image = image_png;
    req.question = q;
    req.context = obj.description;
    return require_text(backend.answer_question(req), "answer_question");
}

BackgroundRenderResult background_render(GenBackend& backend, const Scene& scene, const ImageStore& store,
                                         std::string_view instruction) {
    auto composed = compose(scene, store);
    BackgroundRenderResult out{std::move(composed.image), std::move(composed.warnings)};
    GenRequest req;
    req.kind = GenKind::BackgroundRender;
    req.prompt = trim(instruction);
    req.image = encode_png(out.image);
    const GenResult r = backend.render_background(req);
    if (r.error || !r.image) {
        out.warnings.push_back("background render failed, returning the plain composition" +
                               (r.error ? ": " + r.error->message : std::string()));
        return out;
    }
    try {
        out.image = decode_png(*r.image);
    } catch (const std::exception& e) {
        out.warnings.push_back(std::string("background render returned an unreadable image: ") + e.what());
    }
    return out;
}

} // namespace altcanvas
