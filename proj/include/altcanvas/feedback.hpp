#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "altcanvas/scene.hpp"

namespace altcanvas {

enum class EarconKind { NavUp, NavDown, NavLeft, NavRight, Thump, Beep, Overlap, SizeTick };

std::string_view to_string(EarconKind kind);
std::optional<EarconKind> parse_earcon_kind(std::string_view text);

struct Speech {
    std::string text;
    int rate = 2;

    bool operator==(const Speech&) const = default;
};

struct Earcon {
    EarconKind kind = EarconKind::Beep;
    double pan = 0.0;                       // -1 left .. +1 right
    std::optional<double> frequency_hz;     // SizeTick only, rounded to 0.1 Hz

    bool operator==(const Earcon&) const = default;
};

struct StopSpeech {
    bool operator==(const StopSpeech&) const = default;
};

using FeedbackEvent = std::variant<Speech, Earcon, StopSpeech>;

struct SonificationParams {
    double base_frequency_hz = 440.0;
    int octave_span_px = 200;
    double pan_gain = 1.0;
};

/// f = base * 2^((max(w, h) - 100) / octave_span). Unrounded.
double size_to_frequency(const Size2D& size, const SonificationParams& params = {});
double pan_for_direction(Direction d, const SonificationParams& params = {});

EarconKind nav_earcon(Direction d);
Earcon directional_earcon(Direction d, const SonificationParams& params = {});
Earcon thump(std::optional<Direction> d = std::nullopt, const SonificationParams& params = {});
Earcon size_tick(const Size2D& size, const SonificationParams& params = {});

inline constexpr std::string_view kNoOtherObjects = "No other objects on the canvas";

/// Per-object axis offsets from the focused object, nearest first
/// (Euclidean center distance, ties by id). Phrases read
/// "frisbee, 50 pixels up and 30 pixels left".
std::string radar_scan(const Scene& scene, ObjectId id);

/// Fills the local description template with the object's top-left
/// coordinates, size and stored description.
std::string local_description(const SceneObject& obj);

/// Deterministic thirds-based canvas summary used offline and by the mock backend.
std::string fallback_global_description(const Scene& scene);

/// 0..2 for top/left, middle/center, bottom/right thirds.
int third_index(int coordinate, int extent);
std::string region_name(const SceneObject& obj, const CanvasConfig& config);

std::string generation_announcement(const SceneObject& obj);

std::string capitalize_first(std::string text);

} // namespace altcanvas
