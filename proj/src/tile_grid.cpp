#include "altcanvas/tile_grid.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <string>

namespace altcanvas {

TileCoord step(TileCoord c, Direction d) {
    switch (d) {
    case Direction::Up: return {c.row - 1, c.col};
    case Direction::Down: return {c.row + 1, c.col};
    case Direction::Left: return {c.row, c.col - 1};
    case Direction::Right: return {c.row, c.col + 1};
    }
    return c;
}

int chebyshev(TileCoord a, TileCoord b) {
    return std::max(std::abs(a.row - b.row), std::abs(a.col - b.col));
}

TileGrid TileGrid::init() {
    TileGrid g;
    g.tiles_.emplace(TileCoord{0, 0}, std::nullopt);
    g.cursor_ = {0, 0};
    return g;
}

TileGrid TileGrid::restore(std::map<TileCoord, std::optional<ObjectId>> tiles, TileCoord cursor) {
    TileGrid g;
    g.tiles_ = std::move(tiles);
    g.cursor_ = cursor;
    return g;
}

void TileGrid::set_cursor(TileCoord c) {
    if (!contains(c)) throw Error(ErrorCode::UnknownTile, "cursor target tile does not exist");
    cursor_ = c;
}

std::optional<ObjectId> TileGrid::occupant(TileCoord c) const {
    auto it = tiles_.find(c);
    return it == tiles_.end() ? std::nullopt : it->second;
}

std::optional<TileCoord> TileGrid::find(ObjectId id) const {
    for (const auto& [coord, tile] : tiles_)
        if (tile == id) return coord;
    return std::nullopt;
}

std::size_t TileGrid::occupied_count() const {
    return static_cast<std::size_t>(
        std::count_if(tiles_.begin(), tiles_.end(), [](const auto& t) { return t.second.has_value(); }));
}

void TileGrid::add_neighbours(TileCoord c) {
    for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc)
            tiles_.try_emplace(TileCoord{c.row + dr, c.col + dc}, std::nullopt);
}

void TileGrid::occupy(TileCoord coord, ObjectId id) {
    auto it = tiles_.find(coord);
    if (it == tiles_.end()) throw Error(ErrorCode::UnknownTile, "no tile at that coordinate");
    if (it->second) throw Error(ErrorCode::TileOccupied, "tile already holds an object");
    if (find(id))
        throw Error(ErrorCode::DuplicateObject,
                    "object " + std::to_string(id.value) + " already has a tile");
    it->second = id;
    add_neighbours(coord);
}

NavOutcome TileGrid::navigate(Direction d) {
    const TileCoord target = step(cursor_, d);
    auto it = tiles_.find(target);
    if (it == tiles_.end()) return EdgeBump{};
    cursor_ = target;
    if (it->second) return MovedToObject{target, *it->second};
    return MovedToEmpty{target};
}

void push(TileGrid& grid, Scene& scene, TileCoord coord, Direction direction) {
    if (!grid.occupant(coord))
        throw Error(ErrorCode::NotAnObjectTile, "push needs an object tile");

    std::vector<TileCoord> chain;
    for (TileCoord c = coord; grid.occupant(c); c = step(c, direction)) chain.push_back(c);

    // Validate every translation before touching anything.
    for (const auto& c : chain) {
        SceneObject probe = scene.at(*grid.occupant(c));
        probe.center = offset(probe.center, direction, kPushStep);
        if (!within_bounds(probe, scene.config()))
            throw Error(ErrorCode::PushBlockedAtCanvasEdge,
                        "pushing would move " + probe.name + " off the canvas");
    }

    std::vector<std::pair<TileCoord, ObjectId>> moves;
    for (const auto& c : chain) moves.emplace_back(c, *grid.occupant(c));
    for (const auto& [c, id] : moves) grid.tiles_[c] = std::nullopt;
    for (const auto& [c, id] : moves) {
        const TileCoord dest = step(c, direction);
        grid.tiles_[dest] = id;
        SceneObject& obj = scene.at(id);
        obj.center = offset(obj.center, direction, kPushStep);
    }
    for (const auto& [c, id] : moves) grid.add_neighbours(step(c, direction));
    if (grid.cursor_ == coord) grid.cursor_ = step(coord, direction);
}

namespace {

std::optional<TileCoord> lowest_occupied(const std::map<TileCoord, std::optional<ObjectId>>& tiles) {
    for (const auto& [c, t] : tiles)
        if (t) return c;
    return std::nullopt;
}

bool adjacent_to_occupied(const std::map<TileCoord, std::optional<ObjectId>>& tiles, TileCoord c) {
    for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) {
            if (dr == 0 && dc == 0) continue;
            auto it = tiles.find({c.row + dr, c.col + dc});
            if (it != tiles.end() && it->second) return true;
        }
    return false;
}

} // namespace

void delete_at(TileGrid& grid, Scene& scene, TileCoord coord) {
    const auto id = grid.occupant(coord);
    if (!id) throw Error(ErrorCode::NotAnObjectTile, "there is no image on this tile");
    scene.remove(*id);
    grid.tiles_[coord] = std::nullopt;

    if (!lowest_occupied(grid.tiles_)) {
        grid = TileGrid::init();
        return;
    }
    for (auto it = grid.tiles_.begin(); it != grid.tiles_.end();) {
        const bool keep = it->second || it->first == TileCoord{0, 0} ||
                          adjacent_to_occupied(grid.tiles_, it->first);
        it = keep ? std::next(it) : grid.tiles_.erase(it);
    }
    if (!grid.contains(grid.cursor_)) grid.cursor_ = *lowest_occupied(grid.tiles_);
}

namespace {

// Groups sorted values into clusters anchored at their smallest member: a
// value joins the current cluster while it is within threshold of the
// cluster's first value. Anchoring (rather than chaining) guarantees that
// values more than threshold apart always land in different clusters.
std::map<int, int> cluster_ranks(std::vector<int> values, int threshold) {
    std::sort(values.begin(), values.end());
    std::map<int, int> rank;
    int cluster = -1;
    int anchor = 0;
    for (int v : values) {
        if (cluster < 0 || v > anchor + threshold) {
            ++cluster;
            anchor = v;
        }
        rank.emplace(v, cluster);
    }
    return rank;
}

} // namespace

TileGrid relayout_from_scene(const Scene& scene, std::optional<TileCoord> cursor) {
    if (scene.empty()) return TileGrid::init();

    std::vector<int> xs, ys;
    for (const auto& o : scene.objects()) {
        xs.push_back(o.center.x);
        ys.push_back(o.center.y);
    }
    const auto col_rank = cluster_ranks(xs, kRelayoutThreshold);
    const auto row_rank = cluster_ranks(ys, kRelayoutThreshold);

    // Objects sharing a (row cluster, col cluster) cell are spread rightwards
    // in z order. A column cluster is widened to fit its most crowded cell so
    // every later column shifts with it.
    std::map<std::pair<int, int>, std::vector<ObjectId>> cells;   // objects are in z order
    for (const auto& o : scene.objects())
        cells[{row_rank.at(o.center.y), col_rank.at(o.center.x)}].push_back(o.id);

    const int col_clusters = col_rank.rbegin()->second + 1;
    std::vector<int> width(static_cast<std::size_t>(col_clusters), 1);
    for (const auto& [cell, ids] : cells)
        width[static_cast<std::size_t>(cell.second)] =
            std::max(width[static_cast<std::size_t>(cell.second)], static_cast<int>(ids.size()));
    std::vector<int> base(static_cast<std::size_t>(col_clusters), 0);
    for (int c = 1; c < col_clusters; ++c)
        base[static_cast<std::size_t>(c)] =
            base[static_cast<std::size_t>(c - 1)] + width[static_cast<std::size_t>(c - 1)];

    TileGrid g;
    for (const auto& [cell, ids] : cells)
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const TileCoord at{cell.first, base[static_cast<std::size_t>(cell.second)] + static_cast<int>(i)};
            g.tiles_[at] = ids[i];
        }
    std::vector<TileCoord> occupied;
    for (const auto& [c, t] : g.tiles_) occupied.push_back(c);
    for (const auto& c : occupied) g.add_neighbours(c);

    if (cursor && g.contains(*cursor))
        g.cursor_ = *cursor;
    else
        g.cursor_ = *lowest_occupied(g.tiles_);
    return g;
}

std::string check_invariants(const TileGrid& grid, const Scene& scene) {
    std::set<ObjectId> seen;
    for (const auto& [c, t] : grid.tiles()) {
        if (!t) continue;
        if (!scene.find(*t)) return "tile holds unknown object " + std::to_string(t->value);
        if (!seen.insert(*t).second) return "object " + std::to_string(t->value) + " on two tiles";
        for (int dr = -1; dr <= 1; ++dr)
            for (int dc = -1; dc <= 1; ++dc)
                if (!grid.contains({c.row + dr, c.col + dc}))
                    return "occupied tile (" + std::to_string(c.row) + "," + std::to_string(c.col) +
                           ") is missing a neighbour";
    }
    if (seen.size() != scene.size()) return "tile count does not match scene object count";
    if (!grid.contains(grid.cursor())) return "cursor is off the grid";
    return {};
}

} // namespace altcanvas
