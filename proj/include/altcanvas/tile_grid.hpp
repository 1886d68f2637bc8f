#pragma once

#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "altcanvas/scene.hpp"

namespace altcanvas {

/// Tile coordinates: row grows downward, col grows rightward; both may be negative.
struct TileCoord {
    int row = 0;
    int col = 0;

    auto operator<=>(const TileCoord&) const = default;
};

TileCoord step(TileCoord c, Direction d);
int chebyshev(TileCoord a, TileCoord b);

inline constexpr int kPushStep = 120;
inline constexpr int kRelayoutThreshold = 50;

struct MovedToEmpty { TileCoord coord; };
struct MovedToObject { TileCoord coord; ObjectId id; };
struct EdgeBump {};
using NavOutcome = std::variant<MovedToEmpty, MovedToObject, EdgeBump>;

/// The tile view. Tiles are uniform cells: a tile is either empty or a proxy
/// for exactly one scene object. Occupied tiles always have all eight
/// neighbours present so the user can place new objects around them.
class TileGrid {
public:
    // A single empty tile at (0,0) with the cursor on it.
    static TileGrid init();

    const std::map<TileCoord, std::optional<ObjectId>>& tiles() const { return tiles_; }
    TileCoord cursor() const { return cursor_; }
    void set_cursor(TileCoord c);

    bool contains(TileCoord c) const { return tiles_.count(c) != 0; }
    std::optional<ObjectId> occupant(TileCoord c) const;
    std::optional<TileCoord> find(ObjectId id) const;
    std::size_t occupied_count() const;

    void occupy(TileCoord coord, ObjectId id);
    NavOutcome navigate(Direction d);

    // Builds a grid verbatim from serialized tiles (validated by the caller).
    static TileGrid restore(std::map<TileCoord, std::optional<ObjectId>> tiles, TileCoord cursor);

    bool operator==(const TileGrid&) const = default;

private:
    friend void push(TileGrid&, Scene&, TileCoord, Direction);
    friend void delete_at(TileGrid&, Scene&, TileCoord);
    friend TileGrid relayout_from_scene(const Scene&, std::optional<TileCoord>);

    void add_neighbours(TileCoord c);

    std::map<TileCoord, std::optional<ObjectId>> tiles_;
    TileCoord cursor_;
};

/// Shifts the occupied tile at coord one step, cascading any occupied tiles
/// in the way, and moves every shifted object by kPushStep pixels. Atomic:
/// throws PushBlockedAtCanvasEdge with grid and scene untouched if any
/// object would leave the canvas. The cursor follows a pushed tile.
void push(TileGrid& grid, Scene& scene, TileCoord coord, Direction direction);

/// Removes the object at coord from the scene, leaves the tile empty and
/// prunes empty tiles no longer adjacent to any occupied tile.
void delete_at(TileGrid& grid, Scene& scene, TileCoord coord);

/// Derives tile coordinates from object centers (see tile_grid.cpp for the
/// clustering rules). The cursor is kept if its coordinate survives,
/// otherwise moved to the lowest occupied (row, col).
TileGrid relayout_from_scene(const Scene& scene, std::optional<TileCoord> cursor = std::nullopt);

/// Checks bijection, neighbour closure and cursor presence. Returns an
/// empty string when consistent, otherwise a description of the violation.
std::string check_invariants(const TileGrid& grid, const Scene& scene);

} // namespace altcanvas
