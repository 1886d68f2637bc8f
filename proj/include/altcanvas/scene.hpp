#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "altcanvas/error.hpp"

namespace altcanvas {

enum class Direction { Up, Down, Left, Right };

enum class ImageStyle { Tactile, Color };

std::string_view to_string(Direction d);
std::string_view to_string(ImageStyle s);
std::optional<Direction> parse_direction(std::string_view text);
std::optional<ImageStyle> parse_image_style(std::string_view text);

inline constexpr int kMinCanvasDimension = 100;
inline constexpr int kMinObjectDimension = 10;
inline constexpr int kDefaultObjectSize = 100;
inline constexpr int kMoveStep = 20;
inline constexpr int kResizeStep = 10;

struct CanvasConfig {
    int width = 600;
    int height = 600;
    ImageStyle image_style = ImageStyle::Tactile;
    int speech_rate = 2;

    // Throws Error(InvalidConfig) naming the offending field.
    void validate() const;

    bool operator==(const CanvasConfig&) const = default;
};

struct Point {
    int x = 0;
    int y = 0;

    bool operator==(const Point&) const = default;
};

/// Object extent in pixels. The aspect ratio is kept as the rational
/// aspect_width / aspect_height captured when the object was generated, so
/// height can always be recomputed exactly from width.
struct Size2D {
    int width = kDefaultObjectSize;
    int height = kDefaultObjectSize;
    int aspect_width = kDefaultObjectSize;
    int aspect_height = kDefaultObjectSize;

    static Size2D with_aspect(int width, int height) { return {width, height, width, height}; }

    // round-half-up(width * aspect_height / aspect_width), integer exact.
    int height_for_width(int new_width) const;

    bool operator==(const Size2D&) const = default;
};

struct ObjectId {
    std::uint64_t value = 0;

    auto operator<=>(const ObjectId&) const = default;
};

struct Box {
    Point top_left;
    Point bottom_right;   // exclusive

    bool operator==(const Box&) const = default;
};

struct SceneObject {
    ObjectId id;
    std::string name;
    Point center;
    Size2D size;
    std::string prompt_text;
    std::string description;
    int z = 0;
    std::optional<std::string> image_ref;

    bool operator==(const SceneObject&) const = default;
};

class Scene {
public:
    Scene() = default;
    explicit Scene(CanvasConfig config) : config_(config) {}

    const CanvasConfig& config() const { return config_; }
    void set_config(const CanvasConfig& config) { config_ = config; }

    const std::vector<SceneObject>& objects() const { return objects_; }
    bool empty() const { return objects_.empty(); }
    std::size_t size() const { return objects_.size(); }

    const SceneObject* find(ObjectId id) const;
    SceneObject* find(ObjectId id);
    // Throws Error(UnknownObject).
    const SceneObject& at(ObjectId id) const;
    SceneObject& at(ObjectId id);

    // Appends on top of the stack (z = last z + 1, or 0 for the first object).
    // Throws DuplicateObject if the id is already present.
    SceneObject& add(SceneObject obj);
    void remove(ObjectId id);

    // Restores objects verbatim (z values included); used by deserialization.
    void restore(std::vector<SceneObject> objects);

    bool operator==(const Scene&) const = default;

private:
    CanvasConfig config_;
    std::vector<SceneObject> objects_;
};

Box bounding_box(const SceneObject& obj);
bool overlaps(const SceneObject& a, const SceneObject& b);
bool within_bounds(const SceneObject& obj, const CanvasConfig& config);
Point offset(Point p, Direction d, int step);

/// Centers obj on the canvas (floor division) and appends it with z = 0.
/// Throws NonEmptyScene if the scene already has objects.
const SceneObject& place_first(Scene& scene, SceneObject obj);

struct Moved { Point center; };
struct BlockedAtEdge {};
struct MovedWithOverlap { Point center; std::vector<ObjectId> overlapped; };
using MoveOutcome = std::variant<Moved, BlockedAtEdge, MovedWithOverlap>;

// Overlap is reported, never blocking; leaving the canvas is blocking.
MoveOutcome move_object(Scene& scene, ObjectId id, Direction direction, int step = kMoveStep);

enum class ResizeDirection { Increase, Decrease };

struct Resized { Size2D size; };
struct AtMinimum {};
using ResizeOutcome = std::variant<Resized, AtMinimum, BlockedAtEdge>;

ResizeOutcome resize_object(Scene& scene, ObjectId id, ResizeDirection direction,
                            int step = kResizeStep);

} // namespace altcanvas
