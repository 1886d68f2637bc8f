#include "altcanvas/scene.hpp"

#include <algorithm>
#include <cctype>

namespace altcanvas {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NonEmptyScene: return "NonEmptyScene";
    case ErrorCode::UnknownObject: return "UnknownObject";
    case ErrorCode::TileOccupied: return "TileOccupied";
    case ErrorCode::UnknownTile: return "UnknownTile";
    case ErrorCode::DuplicateObject: return "DuplicateObject";
    case ErrorCode::NotAnObjectTile: return "NotAnObjectTile";
    case ErrorCode::PushBlockedAtCanvasEdge: return "PushBlockedAtCanvasEdge";
    case ErrorCode::EmptyTranscript: return "EmptyTranscript";
    case ErrorCode::BackendUnavailable: return "BackendUnavailable";
    case ErrorCode::ContentRejected: return "ContentRejected";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::InvalidThresholds: return "InvalidThresholds";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::MalformedCommand: return "MalformedCommand";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::RenderFailed: return "RenderFailed";
    case ErrorCode::SequenceConflict: return "SequenceConflict";
    }
    return "Unknown";
}

std::optional<ErrorCode> parse_error_code(std::string_view text) {
    for (int i = 0; i <= static_cast<int>(ErrorCode::SequenceConflict); ++i)
        if (to_string(static_cast<ErrorCode>(i)) == text) return static_cast<ErrorCode>(i);
    return std::nullopt;
}

std::string_view to_string(Direction d) {
    switch (d) {
    case Direction::Up: return "up";
    case Direction::Down: return "down";
    case Direction::Left: return "left";
    case Direction::Right: return "right";
    }
    return "up";
}

std::string_view to_string(ImageStyle s) {
    return s == ImageStyle::Tactile ? "tactile" : "color";
}

namespace {

std::string lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

} // namespace

std::optional<Direction> parse_direction(std::string_view text) {
    const auto t = lower(text);
    if (t == "up") return Direction::Up;
    if (t == "down") return Direction::Down;
    if (t == "left") return Direction::Left;
    if (t == "right") return Direction::Right;
    return std::nullopt;
}

std::optional<ImageStyle> parse_image_style(std::string_view text) {
    const auto t = lower(text);
    if (t == "tactile") return ImageStyle::Tactile;
    if (t == "color" || t == "colour") return ImageStyle::Color;
    return std::nullopt;
}

void CanvasConfig::validate() const {
    if (width < kMinCanvasDimension)
        throw Error(ErrorCode::InvalidConfig,
                    "canvas width must be at least " + std::to_string(kMinCanvasDimension) +
                        " pixels (got " + std::to_string(width) + ")");
    if (height < kMinCanvasDimension)
        throw Error(ErrorCode::InvalidConfig,
                    "canvas height must be at least " + std::to_string(kMinCanvasDimension) +
                        " pixels (got " + std::to_string(height) + ")");
    if (speech_rate < 1 || speech_rate > 3)
        throw Error(ErrorCode::InvalidConfig,
                    "speech rate must be 1, 2 or 3 (got " + std::to_string(speech_rate) + ")");
}

int Size2D::height_for_width(int new_width) const {
    const std::int64_t num = 2LL * new_width * aspect_height + aspect_width;
    const std::int64_t den = 2LL * aspect_width;
    // floor division for possibly negative numerators
    std::int64_t q = num / den;
    if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
    return static_cast<int>(q);
}

const SceneObject* Scene::find(ObjectId id) const {
    auto it = std::find_if(objects_.begin(), objects_.end(),
                           [&](const SceneObject& o) { return o.id == id; });
    return it == objects_.end() ? nullptr : &*it;
}

SceneObject* Scene::find(ObjectId id) {
    return const_cast<SceneObject*>(std::as_const(*this).find(id));
}

const SceneObject& Scene::at(ObjectId id) const {
    if (auto* o = find(id)) return *o;
    throw Error(ErrorCode::UnknownObject, "no object with id " + std::to_string(id.value));
}

SceneObject& Scene::at(ObjectId id) {
    return const_cast<SceneObject&>(std::as_const(*this).at(id));
}

SceneObject& Scene::add(SceneObject obj) {
    if (find(obj.id))
        throw Error(ErrorCode::DuplicateObject,
                    "object id " + std::to_string(obj.id.value) + " already in scene");
    obj.z = objects_.empty() ? 0 : objects_.back().z + 1;
    objects_.push_back(std::move(obj));
    return objects_.back();
}

void Scene::remove(ObjectId id) {
    auto it = std::find_if(objects_.begin(), objects_.end(),
                           [&](const SceneObject& o) { return o.id == id; });
    if (it == objects_.end())
        throw Error(ErrorCode::UnknownObject, "no object with id " + std::to_string(id.value));
    objects_.erase(it);
}

void Scene::restore(std::vector<SceneObject> objects) {
    objects_ = std::move(objects);
}

Box bounding_box(const SceneObject& obj) {
    // width is positive, so integer division is floor
    const Point tl{obj.center.x - obj.size.width / 2, obj.center.y - obj.size.height / 2};
    return {tl, {tl.x + obj.size.width, tl.y + obj.size.height}};
}

bool overlaps(const SceneObject& a, const SceneObject& b) {
    const Box ba = bounding_box(a);
    const Box bb = bounding_box(b);
    return std::max(ba.top_left.x, bb.top_left.x) < std::min(ba.bottom_right.x, bb.bottom_right.x) &&
           std::max(ba.top_left.y, bb.top_left.y) < std::min(ba.bottom_right.y, bb.bottom_right.y);
}

bool within_bounds(const SceneObject& obj, const CanvasConfig& config) {
    const Box b = bounding_box(obj);
    return b.top_left.x >= 0 && b.top_left.y >= 0 && b.bottom_right.x <= config.width &&
           b.bottom_right.y <= config.height;
}

Point offset(Point p, Direction d, int step) {
    switch (d) {
    case Direction::Up: return {p.x, p.y - step};
    case Direction::Down: return {p.x, p.y + step};
    case Direction::Left: return {p.x - step, p.y};
    case Direction::Right: return {p.x + step, p.y};
    }
    return p;
}

const SceneObject& place_first(Scene& scene, SceneObject obj) {
    if (!scene.empty())
        throw Error(ErrorCode::NonEmptyScene, "first placement requires an empty scene");
    obj.center = {scene.config().width / 2, scene.config().height / 2};
    return scene.add(std::move(obj));
}

MoveOutcome move_object(Scene& scene, ObjectId id, Direction direction, int step) {
    SceneObject& obj = scene.at(id);
    SceneObject moved = obj;
    moved.center = offset(obj.center, direction, step);
    if (!within_bounds(moved, scene.config())) return BlockedAtEdge{};
    obj.center = moved.center;

    std::vector<ObjectId> hits;
    for (const auto& other : scene.objects())
        if (other.id != id && overlaps(obj, other)) hits.push_back(other.id);
    if (hits.empty()) return Moved{obj.center};
    return MovedWithOverlap{obj.center, std::move(hits)};
}

ResizeOutcome resize_object(Scene& scene, ObjectId id, ResizeDirection direction, int step) {
    SceneObject& obj = scene.at(id);
    const int new_width =
        direction == ResizeDirection::Increase ? obj.size.width + step : obj.size.width - step;
    if (new_width < kMinObjectDimension) return AtMinimum{};
    const int new_height = obj.size.height_for_width(new_width);
    if (new_height < kMinObjectDimension) return AtMinimum{};

    SceneObject resized = obj;
    resized.size.width = new_width;
    resized.size.height = new_height;
    if (!within_bounds(resized, scene.config())) return BlockedAtEdge{};
    obj.size = resized.size;
    return Resized{obj.size};
}

} // namespace altcanvas
