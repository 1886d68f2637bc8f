#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "altcanvas/feedback.hpp"
#include "altcanvas/prompts.hpp"
#include "oracles.hpp"

using namespace altcanvas;

namespace {

SceneObject object(std::uint64_t id, std::string name, Point center, int w = 100, int h = 100,
                   std::string description = {}) {
    SceneObject o;
    o.id = ObjectId{id};
    o.name = std::move(name);
    o.center = center;
    o.size = Size2D::with_aspect(w, h);
    o.description = std::move(description);
    return o;
}

std::string read_golden(const std::string& name) {
    std::ifstream in(std::string(ALTCANVAS_TEST_DATA) + "/prompts/" + name, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("size_to_frequency") {
    CHECK(size_to_frequency(Size2D::with_aspect(100, 100)) == doctest::Approx(440.0));
    CHECK(size_to_frequency(Size2D::with_aspect(300, 300)) == doctest::Approx(880.0));
    CHECK(size_tick(Size2D::with_aspect(110, 110)).frequency_hz == doctest::Approx(455.5));
    CHECK(size_to_frequency(Size2D::with_aspect(100, 300)) == doctest::Approx(880.0));
    double prev = 0;
    for (int s = 10; s <= 2000; s += 10) {
        const double f = size_to_frequency(Size2D::with_aspect(s, s));
        CHECK(f > prev);
        prev = f;
    }
}

TEST_CASE("pan and earcon kinds") {
    CHECK(pan_for_direction(Direction::Left) == -1.0);
    CHECK(pan_for_direction(Direction::Up) == 0.0);
    CHECK(pan_for_direction(Direction::Right) == 1.0);
    CHECK(directional_earcon(Direction::Left).kind == EarconKind::NavLeft);
    CHECK(directional_earcon(Direction::Left).pan <= 0);
    CHECK(directional_earcon(Direction::Right).pan >= 0);
    CHECK_FALSE(directional_earcon(Direction::Down).frequency_hz);
    CHECK(size_tick(Size2D{}).frequency_hz.has_value());
    for (auto k : {EarconKind::NavUp, EarconKind::Thump, EarconKind::SizeTick})
        CHECK(parse_earcon_kind(to_string(k)) == k);
}

TEST_CASE("radar_scan phrasing") {
    CanvasConfig c;
    Scene s(c);
    s.add(object(1, "dog", {300, 300}));
    CHECK(radar_scan(s, ObjectId{1}) == "No other objects on the canvas");
    s.add(object(2, "frisbee", {270, 250}));
    s.add(object(3, "tree", {320, 300}));
    CHECK(radar_scan(s, ObjectId{1}) == "tree, 20 pixels right; frisbee, 50 pixels up and 30 pixels left");
    s.add(object(4, "ball", {300, 300}));
    CHECK(radar_scan(s, ObjectId{4}).rfind("dog, at the same position", 0) == 0);
}

TEST_CASE("radar_scan matches a sorted-distance oracle and is translation invariant") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> pos(100, 400);
    for (int trial = 0; trial < 200; ++trial) {
        CanvasConfig c;
        c.width = c.height = 1000;
        Scene s(c), shifted(c);
        const int n = 2 + static_cast<int>(rng() % 6);
        const int tx = pos(rng) - 100, ty = pos(rng) - 100;
        for (int i = 0; i < n; ++i) {
            const Point p{pos(rng), pos(rng)};
            s.add(object(static_cast<std::uint64_t>(i + 1), "o" + std::to_string(i + 1), p));
            shifted.add(object(static_cast<std::uint64_t>(i + 1), "o" + std::to_string(i + 1), {p.x + tx, p.y + ty}));
        }
        const auto& self = s.objects().front();
        std::vector<std::pair<double, std::uint64_t>> order;
        for (const auto& o : s.objects())
            if (o.id != self.id)
                order.emplace_back(std::hypot(o.center.x - self.center.x, o.center.y - self.center.y), o.id.value);
        std::stable_sort(order.begin(), order.end());

        std::string expected;
        for (const auto& [d, id] : order) {
            const auto& o = s.at(ObjectId{id});
            const int dx = o.center.x - self.center.x, dy = o.center.y - self.center.y;
            if (!expected.empty()) expected += "; ";
            expected += o.name + ", ";
            std::string v = dy ? std::to_string(std::abs(dy)) + " pixels " + (dy < 0 ? "up" : "down") : "";
            std::string h = dx ? std::to_string(std::abs(dx)) + " pixels " + (dx < 0 ? "left" : "right") : "";
            if (v.empty() && h.empty()) expected += "at the same position";
            else if (!v.empty() && !h.empty()) expected += v + " and " + h;
            else expected += v + h;
        }
        CHECK(radar_scan(s, self.id) == expected);
        CHECK(radar_scan(shifted, self.id) == radar_scan(s, self.id));
    }
}

TEST_CASE("local_description fills the local template") {
    const auto dog = object(1, "dog", {300, 300}, 100, 100, "A simple line drawing of a dog.");
    const auto text = local_description(dog);
    CHECK(text.find("x-coordinate 250 and y-coordinate 250") != std::string::npos);
    CHECK(text ==
          "The image is called dog. It is located at x-coordinate 250 and y-coordinate 250. The size of the "
          "image is 100 in width and 100 in height. Additional description: A simple line drawing of a dog.");

    const auto tiny = object(2, "dot", {0, 0}, 1, 1);
    CHECK(local_description(tiny).find("x-coordinate 0 and y-coordinate 0") != std::string::npos);
    CHECK(local_description(object(3, "golden retriever puppy", {300, 300})).find("called golden retriever puppy.") !=
          std::string::npos);
}

TEST_CASE("prompt templates are byte-identical to the golden copies") {
    CHECK(std::string(prompts::kTactileImage) == read_golden("tactile.txt"));
    CHECK(std::string(prompts::kGlobalDescription) == read_golden("global.txt"));
    CHECK(std::string(prompts::kLocalDescription) == read_golden("local.txt"));
    CHECK(std::string(prompts::kChat) == read_golden("chat.txt"));
}

TEST_CASE("fill and squash") {
    CHECK(prompts::fill("a ${x} b ${y} ${z}", {{"x", "1"}, {"y", "${x}"}}) == "a 1 b ${x} ${z}");
    CHECK(prompts::squash_whitespace("  a \n b\t\tc  ") == "a b c");
}

TEST_CASE("fallback_global_description") {
    CanvasConfig c;
    Scene s(c);
    CHECK(fallback_global_description(s) == "The canvas is empty.");
    s.add(object(1, "dog", {300, 300}));
    CHECK(fallback_global_description(s) == "The canvas has dog in the middle-center.");
    s.add(object(2, "table", {100, 500}, 150, 100));
    s.add(object(3, "potted plant", {120, 450}, 60, 80));
    CHECK(fallback_global_description(s) ==
          "The canvas has dog in the middle-center, table in the bottom-left, potted plant in the bottom-left. "
          "Overlapping: table and potted plant.");
}

TEST_CASE("thirds classification agrees with a rational oracle") {
    std::mt19937_64 rng(11);
    int mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        const int extent = 100 + static_cast<int>(rng() % 1000);
        const int c = static_cast<int>(rng() % static_cast<unsigned>(extent + 1));
        if (third_index(c, extent) != oracle::third(c, extent)) ++mismatches;
    }
    CHECK(mismatches == 0);
}

TEST_CASE("generation_announcement") {
    const auto dog = object(1, "dog", {300, 300}, 100, 100, "A simple line drawing of a dog.");
    CHECK(generation_announcement(dog) ==
          "Dog has been generated. The coordinates of the image are 250 by 250. A simple line drawing of a "
          "dog. The image measures 100 by 100.");
}
