#include "altcanvas/feedback.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

#include "altcanvas/prompts.hpp"

namespace altcanvas {

std::string_view to_string(EarconKind kind) {
    switch (kind) {
    case EarconKind::NavUp: return "NavUp";
    case EarconKind::NavDown: return "NavDown";
    case EarconKind::NavLeft: return "NavLeft";
    case EarconKind::NavRight: return "NavRight";
    case EarconKind::Thump: return "Thump";
    case EarconKind::Beep: return "Beep";
    case EarconKind::Overlap: return "Overlap";
    case EarconKind::SizeTick: return "SizeTick";
    }
    return "Beep";
}

std::optional<EarconKind> parse_earcon_kind(std::string_view text) {
    for (auto k : {EarconKind::NavUp, EarconKind::NavDown, EarconKind::NavLeft, EarconKind::NavRight,
                   EarconKind::Thump, EarconKind::Beep, EarconKind::Overlap, EarconKind::SizeTick})
        if (to_string(k) == text) return k;
    return std::nullopt;
}

double size_to_frequency(const Size2D& size, const SonificationParams& params) {
    const int s = std::max(size.width, size.height);
    return params.base_frequency_hz *
           std::exp2(static_cast<double>(s - 100) / static_cast<double>(params.octave_span_px));
}

double pan_for_direction(Direction d, const SonificationParams& params) {
    switch (d) {
    case Direction::Left: return -params.pan_gain;
    case Direction::Right: return params.pan_gain;
    default: return 0.0;
    }
}

EarconKind nav_earcon(Direction d) {
    switch (d) {
    case Direction::Up: return EarconKind::NavUp;
    case Direction::Down: return EarconKind::NavDown;
    case Direction::Left: return EarconKind::NavLeft;
    case Direction::Right: return EarconKind::NavRight;
    }
    return EarconKind::NavUp;
}

Earcon directional_earcon(Direction d, const SonificationParams& params) {
    return {nav_earcon(d), pan_for_direction(d, params), std::nullopt};
}

Earcon thump(std::optional<Direction> d, const SonificationParams& params) {
    return {EarconKind::Thump, d ? pan_for_direction(*d, params) : 0.0, std::nullopt};
}

Earcon size_tick(const Size2D& size, const SonificationParams& params) {
    const double f = std::round(size_to_frequency(size, params) * 10.0) / 10.0;
    return {EarconKind::SizeTick, 0.0, f};
}

std::string radar_scan(const Scene& scene, ObjectId id) {
    const SceneObject& self = scene.at(id);
    struct Entry {
        std::int64_t dist2;
        ObjectId id;
        int dx;
        int dy;
        std::string name;
    };
    std::vector<Entry> entries;
    for (const auto& o : scene.objects()) {
        if (o.id == id) continue;
        const int dx = o.center.x - self.center.x;
        const int dy = o.center.y - self.center.y;
        entries.push_back({std::int64_t{dx} * dx + std::int64_t{dy} * dy, o.id, dx, dy, o.name});
    }
    if (entries.empty()) return std::string(kNoOtherObjects);
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.dist2 != b.dist2 ? a.dist2 < b.dist2 : a.id < b.id;
    });

    std::string out;
    for (const auto& e : entries) {
        if (!out.empty()) out += "; ";
        out += e.name + ", ";
        std::vector<std::string> parts;
        if (e.dy != 0) parts.push_back(std::to_string(std::abs(e.dy)) + " pixels " + (e.dy < 0 ? "up" : "down"));
        if (e.dx != 0) parts.push_back(std::to_string(std::abs(e.dx)) + " pixels " + (e.dx < 0 ? "left" : "right"));
        if (parts.empty())
            out += "at the same position";
        else
            out += parts.size() == 2 ? parts[0] + " and " + parts[1] : parts[0];
    }
    return out;
}

std::string local_description(const SceneObject& obj) {
    const Box box = bounding_box(obj);
    std::string desc = obj.description;
    if (!desc.empty() && desc.back() == '.') desc.pop_back();
    return prompts::fill(prompts::squash_whitespace(prompts::kLocalDescription),
                         {{"image.name", obj.name},
                          {"image.coordinate.x", std::to_string(box.top_left.x)},
                          {"image.coordinate.y", std::to_string(box.top_left.y)},
                          {"image.sizeParts.width", std::to_string(obj.size.width)},
                          {"image.sizeParts.height", std::to_string(obj.size.height)},
                          {"image.descriptions", desc}});
}

int third_index(int coordinate, int extent) {
    if (coordinate < 0) return 0;
    const std::int64_t idx = (3LL * coordinate) / extent;
    return static_cast<int>(std::min<std::int64_t>(idx, 2));
}

std::string region_name(const SceneObject& obj, const CanvasConfig& config) {
    static constexpr std::string_view rows[] = {"top", "middle", "bottom"};
    static constexpr std::string_view cols[] = {"left", "center", "right"};
    return std::string(rows[third_index(obj.center.y, config.height)]) + "-" +
           std::string(cols[third_index(obj.center.x, config.width)]);
}

std::string fallback_global_description(const Scene& scene) {
    if (scene.empty()) return "The canvas is empty.";
    std::string out = "The canvas has ";
    const auto& objs = scene.objects();
    for (std::size_t i = 0; i < objs.size(); ++i) {
        if (i > 0) out += ", ";
        out += objs[i].name + " in the " + region_name(objs[i], scene.config());
    }
    out += ".";
    std::vector<std::string> pairs;
    for (std::size_t i = 0; i < objs.size(); ++i)
        for (std::size_t j = i + 1; j < objs.size(); ++j)
            if (overlaps(objs[i], objs[j])) pairs.push_back(objs[i].name + " and " + objs[j].name);
    if (!pairs.empty()) {
        out += " Overlapping: ";
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            if (i > 0) out += ", ";
            out += pairs[i];
        }
        out += ".";
    }
    return out;
}

std::string capitalize_first(std::string text) {
    if (!text.empty()) text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    return text;
}

std::string generation_announcement(const SceneObject& obj) {
    const Box box = bounding_box(obj);
    std::string out = capitalize_first(obj.name) + " has been generated. The coordinates of the image are " +
                      std::to_string(box.top_left.x) + " by " + std::to_string(box.top_left.y) + ".";
    if (!obj.description.empty()) out += " " + obj.description;
    out += " The image measures " + std::to_string(obj.size.width) + " by " +
           std::to_string(obj.size.height) + ".";
    return out;
}

} // namespace altcanvas
