#include <doctest.h>

#include <random>

#include "altcanvas/scene.hpp"
#include "oracles.hpp"

using namespace altcanvas;

namespace {

SceneObject object(std::uint64_t id, Point center, int w, int h, std::string name = "obj") {
    SceneObject o;
    o.id = ObjectId{id};
    o.name = std::move(name);
    o.center = center;
    o.size = Size2D::with_aspect(w, h);
    return o;
}

Scene scene_with(int w, int h) {
    CanvasConfig c;
    c.width = w;
    c.height = h;
    return Scene(c);
}

} // namespace

TEST_CASE("place_first centers the first object") {
    auto s = scene_with(600, 600);
    const auto& dog = place_first(s, object(1, {}, 100, 100, "dog"));
    CHECK(dog.center == Point{300, 300});
    CHECK(bounding_box(dog).top_left == Point{250, 250});
    CHECK(dog.z == 0);

    auto small = scene_with(100, 100);
    CHECK(place_first(small, object(1, {}, 10, 10)).center == Point{50, 50});

    auto odd = scene_with(601, 601);
    CHECK(place_first(odd, object(1, {}, 100, 100)).center == Point{300, 300});

    CHECK_THROWS_AS(place_first(s, object(2, {}, 100, 100)), Error);
}

TEST_CASE("bounding_box") {
    CHECK(bounding_box(object(1, {300, 300}, 100, 100)) == Box{{250, 250}, {350, 350}});
    CHECK(bounding_box(object(1, {300, 300}, 100, 50)) == Box{{250, 275}, {350, 325}});
    CHECK(bounding_box(object(1, {10, 10}, 30, 30)) == Box{{-5, -5}, {25, 25}});
    // odd sizes keep their full width
    const Box b = bounding_box(object(1, {50, 50}, 15, 15));
    CHECK(b.bottom_right.x - b.top_left.x == 15);
    CHECK(b.top_left.x == 43);
}

TEST_CASE("overlaps examples") {
    const auto a = object(1, {300, 300}, 100, 100);
    CHECK(overlaps(a, object(2, {360, 300}, 100, 100)));
    CHECK_FALSE(overlaps(a, object(2, {400, 300}, 100, 100)));
    CHECK(overlaps(a, a));
}

TEST_CASE("overlaps agrees with the pixel-membership oracle") {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<int> pos(0, 300), dim(10, 120);
    int mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto a = object(1, {pos(rng), pos(rng)}, dim(rng), dim(rng));
        const auto b = object(2, {pos(rng), pos(rng)}, dim(rng), dim(rng));
        if (overlaps(a, b) != oracle::pixels_overlap(a, b)) ++mismatches;
        CHECK(overlaps(a, b) == overlaps(b, a));
        CHECK(overlaps(a, a));
    }
    CHECK(mismatches == 0);
}

TEST_CASE("within_bounds allows touching the canvas edge") {
    CanvasConfig c;
    CHECK(within_bounds(object(1, {50, 50}, 100, 100), c));
    CHECK_FALSE(within_bounds(object(1, {40, 50}, 100, 100), c));
    CHECK(within_bounds(object(1, {550, 550}, 100, 100), c));
}

TEST_CASE("move_object") {
    auto s = scene_with(600, 600);
    place_first(s, object(1, {}, 100, 100, "dog"));

    auto out = move_object(s, ObjectId{1}, Direction::Right, 20);
    REQUIRE(std::holds_alternative<Moved>(out));
    CHECK(std::get<Moved>(out).center == Point{320, 300});

    SUBCASE("blocked at the edge leaves the center alone") {
        s.at(ObjectId{1}).center = {50, 300};
        CHECK(std::holds_alternative<BlockedAtEdge>(move_object(s, ObjectId{1}, Direction::Left, 20)));
        CHECK(s.at(ObjectId{1}).center == Point{50, 300});
    }

    SUBCASE("overlap is reported but does not block") {
        s.add(object(2, {220, 300}, 100, 100, "bowl"));
        auto r = move_object(s, ObjectId{2}, Direction::Right, 20);
        REQUIRE(std::holds_alternative<MovedWithOverlap>(r));
        CHECK(std::get<MovedWithOverlap>(r).overlapped == std::vector<ObjectId>{ObjectId{1}});
        CHECK(s.at(ObjectId{2}).center == Point{240, 300});
        CHECK(oracle::pixels_overlap(s.at(ObjectId{1}), s.at(ObjectId{2})));
    }

    CHECK_THROWS_AS(move_object(s, ObjectId{99}, Direction::Up, 20), Error);
}

TEST_CASE("move then inverse move restores the center") {
    std::mt19937_64 rng(7);
    auto s = scene_with(600, 600);
    place_first(s, object(1, {}, 100, 100));
    const Direction dirs[] = {Direction::Up, Direction::Down, Direction::Left, Direction::Right};
    auto inverse = [](Direction d) {
        switch (d) {
        case Direction::Up: return Direction::Down;
        case Direction::Down: return Direction::Up;
        case Direction::Left: return Direction::Right;
        default: return Direction::Left;
        }
    };
    for (int i = 0; i < 500; ++i) {
        const Direction d = dirs[rng() % 4];
        const Point before = s.at(ObjectId{1}).center;
        if (std::holds_alternative<BlockedAtEdge>(move_object(s, ObjectId{1}, d, 20))) continue;
        if (std::holds_alternative<BlockedAtEdge>(move_object(s, ObjectId{1}, inverse(d), 20))) continue;
        CHECK(s.at(ObjectId{1}).center == before);
        move_object(s, ObjectId{1}, d, 20);
    }
}

TEST_CASE("resize_object") {
    auto s = scene_with(600, 600);
    place_first(s, object(1, {}, 100, 100));
    auto r = resize_object(s, ObjectId{1}, ResizeDirection::Increase, 10);
    REQUIRE(std::holds_alternative<Resized>(r));
    CHECK(std::get<Resized>(r).size.width == 110);
    CHECK(std::get<Resized>(r).size.height == 110);
    CHECK(s.at(ObjectId{1}).center == Point{300, 300});

    s.add(object(2, {100, 100}, 100, 50));
    auto wide = resize_object(s, ObjectId{2}, ResizeDirection::Increase, 10);
    REQUIRE(std::holds_alternative<Resized>(wide));
    CHECK(std::get<Resized>(wide).size.width == 110);
    CHECK(std::get<Resized>(wide).size.height == 55);

    s.add(object(3, {400, 100}, 15, 15));
    CHECK(std::holds_alternative<AtMinimum>(resize_object(s, ObjectId{3}, ResizeDirection::Decrease, 10)));
    CHECK(s.at(ObjectId{3}).size.width == 15);

    s.add(object(4, {50, 500}, 100, 100));
    CHECK(std::holds_alternative<BlockedAtEdge>(resize_object(s, ObjectId{4}, ResizeDirection::Increase, 10)));
    CHECK(s.at(ObjectId{4}).size.width == 100);
}

TEST_CASE("height rounding is half-up") {
    const auto s = Size2D::with_aspect(100, 50);   // aspect 2
    CHECK(s.height_for_width(105) == 53);          // 52.5 rounds up
    CHECK(Size2D::with_aspect(3, 1).height_for_width(10) == 3);   // 3.33
    CHECK(Size2D::with_aspect(3, 2).height_for_width(10) == 7);   // 6.67
}

TEST_CASE("resize increase then decrease restores size; aspect drift is bounded") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> dim(50, 200);
    for (int trial = 0; trial < 20; ++trial) {
        auto s = scene_with(2000, 2000);
        int w = dim(rng), h = dim(rng);
        // keep the aspect within [1/2, 2]; the 1/height bound is aspect/(2h) in general
        if (w > 2 * h) w = 2 * h;
        if (h > 2 * w) h = 2 * w;
        place_first(s, object(1, {}, w, h));
        const auto& obj = s.at(ObjectId{1});
        const double aspect = double(obj.size.aspect_width) / obj.size.aspect_height;
        for (int i = 0; i < 1000; ++i) {
            const auto dir = (rng() % 2) ? ResizeDirection::Increase : ResizeDirection::Decrease;
            const Size2D before = obj.size;
            auto r = resize_object(s, ObjectId{1}, dir, 10);
            if (std::holds_alternative<Resized>(r)) {
                CHECK(std::abs(obj.size.width - before.width) == 10);
                const auto back = dir == ResizeDirection::Increase ? ResizeDirection::Decrease
                                                                   : ResizeDirection::Increase;
                auto r2 = resize_object(s, ObjectId{1}, back, 10);
                if (std::holds_alternative<Resized>(r2) && before.height == before.height_for_width(before.width))
                    CHECK(obj.size == before);
                resize_object(s, ObjectId{1}, dir, 10);
            }
            CHECK(std::abs(double(obj.size.width) / obj.size.height - aspect) <= 1.0 / obj.size.height + 1e-12);
            CHECK(within_bounds(obj, s.config()));
        }
    }
}

TEST_CASE("canvas config validation") {
    CanvasConfig c;
    CHECK_NOTHROW(c.validate());
    c.width = 50;
    CHECK_THROWS_AS(c.validate(), Error);
    c = {};
    c.speech_rate = 4;
    CHECK_THROWS_AS(c.validate(), Error);
}
