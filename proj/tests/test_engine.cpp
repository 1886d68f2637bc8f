#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "altcanvas/engine.hpp"
#include "altcanvas/script.hpp"
#include "altcanvas/session_file.hpp"

using namespace altcanvas;

namespace {

KeyPress key(Key k) { return KeyPress{k, std::nullopt}; }
KeyPress arrow(Direction d) { return KeyPress{Key::Arrow, d}; }
KeyPress shift_arrow(Direction d) { return KeyPress{Key::ShiftArrow, d}; }

struct Harness {
    SessionState state;
    std::unique_ptr<GenBackend> backend = make_backend("mock", 7);
    MemoryImageStore store;

    explicit Harness(CanvasConfig config = {}) : state(new_session(config, 7)) {}

    std::vector<FeedbackEvent> send(const Command& cmd) { return apply(state, cmd, *backend, store); }

    void generate(const std::string& prompt) {
        send(key(Key::Enter));
        send(TranscriptArrived{prompt});
        send(key(Key::Enter));
    }
};

std::string speech_of(const std::vector<FeedbackEvent>& events) {
    std::string out;
    for (const auto& e : events)
        if (const auto* s = std::get_if<Speech>(&e)) out += (out.empty() ? "" : " | ") + s->text;
    return out;
}

bool has_earcon(const std::vector<FeedbackEvent>& events, EarconKind kind) {
    for (const auto& e : events)
        if (const auto* k = std::get_if<Earcon>(&e); k && k->kind == kind) return true;
    return false;
}

std::string read_fixture(const std::string& name) {
    std::ifstream in(std::string(ALTCANVAS_FIXTURES) + "/" + name, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string replay_file(const Script& s) {
    auto backend = make_backend(s.backend, s.seed);
    MemoryImageStore store;
    return serialize_session({replay(s.config, s.seed, s.commands, *backend, store), s.backend});
}

} // namespace

TEST_CASE("Enter on an empty tile opens a transcript with a beep") {
    Harness h;
    const HandleResult r = handle(h.state, key(Key::Enter));
    CHECK(std::holds_alternative<AwaitTranscriptMode>(h.state.mode));
    REQUIRE(r.events.size() == 1);
    CHECK(std::get<Earcon>(r.events[0]).kind == EarconKind::Beep);
    CHECK_FALSE(r.dispatch);
}

TEST_CASE("Escape from a confirmation cancels") {
    Harness h;
    h.send(key(Key::Enter));
    h.send(TranscriptArrived{"Create an image of a dog"});
    REQUIRE(std::holds_alternative<ConfirmTranscriptMode>(h.state.mode));
    const auto events = h.send(key(Key::Escape));
    CHECK(std::holds_alternative<NavigateMode>(h.state.mode));
    CHECK(speech_of(events) == "Cancelled");
    CHECK(h.state.scene.empty());
}

TEST_CASE("transcript confirmation prompt") {
    Harness h;
    h.send(key(Key::Enter));
    CHECK(speech_of(h.send(TranscriptArrived{"Create an image of a dog"})) ==
          "Detected: Create an image of a dog. Press Enter to confirm or the Escape key to cancel.");
    CHECK(speech_of(h.send(TranscriptArrived{"  "})) == "I did not hear anything. Please try again.");
}

TEST_CASE("first object is centered and announced at 250 by 250") {
    Harness h;
    h.send(key(Key::Enter));
    h.send(TranscriptArrived{"Create an image of a dog"});
    const auto events = h.send(key(Key::Enter));
    REQUIRE(h.state.scene.size() == 1);
    const auto& dog = h.state.scene.objects()[0];
    CHECK(dog.center == Point{300, 300});
    CHECK(speech_of(events).find("The coordinates of the image are 250 by 250") != std::string::npos);
    CHECK(h.state.grid.occupant(h.state.grid.cursor()) == dog.id);
    CHECK(std::holds_alternative<NavigateMode>(h.state.mode));
}

TEST_CASE("location edit: three right presses then Shift reports 360 by 300") {
    Harness h;
    h.generate("Create an image of a dog");
    CHECK(speech_of(h.send(key(Key::ShiftL))) == "Location edit mode");
    for (int i = 0; i < 3; ++i) CHECK(has_earcon(h.send(arrow(Direction::Right)), EarconKind::NavRight));
    const std::string said = speech_of(h.send(key(Key::Shift)));
    CHECK(h.state.scene.objects()[0].center == Point{360, 300});
    CHECK(said.find("360") != std::string::npos);
    CHECK(said.find("300") != std::string::npos);
}

TEST_CASE("Arrow Right on a fresh session thumps") {
    Harness h;
    const auto events = h.send(arrow(Direction::Right));
    REQUIRE(events.size() == 1);
    CHECK(std::get<Earcon>(events[0]).kind == EarconKind::Thump);
}

TEST_CASE("second object is placed one push step from the nearest occupied tile") {
    Harness h;
    h.generate("Create an image of a dog");
    h.send(arrow(Direction::Right));
    h.generate("Create an image of a cat");
    REQUIRE(h.state.scene.size() == 2);
    CHECK(h.state.scene.objects()[1].center == Point{420, 300});
    CHECK(h.state.grid.occupant(h.state.grid.cursor()) == h.state.scene.objects()[1].id);
}

TEST_CASE("regeneration keeps id, center and size") {
    Harness h;
    h.generate("Create an image of a dog");
    h.send(key(Key::ShiftS));
    h.send(arrow(Direction::Up));
    h.send(key(Key::Escape));
    const SceneObject before = h.state.scene.objects()[0];
    h.generate("Create an image of a cat");
    REQUIRE(h.state.scene.size() == 1);
    const SceneObject& after = h.state.scene.objects()[0];
    CHECK(after.id == before.id);
    CHECK(after.center == before.center);
    CHECK(after.size == before.size);
    CHECK(after.name == "cat");
    CHECK(after.image_ref != before.image_ref);
}

TEST_CASE("inapplicable commands are absorbed with a notice") {
    Harness h;
    for (Key k : {Key::ShiftI, Key::ShiftR, Key::ShiftC, Key::ShiftL, Key::ShiftS, Key::ShiftX}) {
        const SessionState before = h.state;
        CHECK(speech_of(h.send(key(k))) == kNotAvailable);
        CHECK(h.state.scene == before.scene);
        CHECK(h.state.mode == before.mode);
        CHECK(h.state.event_log.size() == before.event_log.size() + 1);
    }
    CHECK(h.send(key(Key::Shift)).empty());
}

TEST_CASE("deletion is refused inside edit modes") {
    Harness h;
    h.generate("Create an image of a dog");
    h.send(key(Key::ShiftL));
    CHECK(speech_of(h.send(key(Key::ShiftX))) == kNotAvailable);
    CHECK(h.state.scene.size() == 1);
    h.send(key(Key::Escape));
    h.send(key(Key::ShiftS));
    CHECK(speech_of(h.send(key(Key::ShiftX))) == kNotAvailable);
    h.send(key(Key::Escape));
    CHECK(speech_of(h.send(key(Key::ShiftX))) == "Deleted image on the tile");
    CHECK(h.state.scene.empty());
}

TEST_CASE("push announces the direction and refuses to leave the canvas") {
    Harness h;
    h.generate("Create an image of a dog");
    CHECK(speech_of(h.send(shift_arrow(Direction::Left))) == "Pushed image to the left");
    CHECK(h.state.scene.objects()[0].center == Point{180, 300});
    h.send(shift_arrow(Direction::Left));
    CHECK(h.state.scene.objects()[0].center == Point{60, 300});
    const auto blocked = h.send(shift_arrow(Direction::Left));
    CHECK(has_earcon(blocked, EarconKind::Thump));
    CHECK(speech_of(blocked) == "Cannot push, an image would leave the canvas");
    CHECK(h.state.scene.objects()[0].center == Point{60, 300});
}

TEST_CASE("size edit ticks, reports and stops at the minimum") {
    Harness h;
    h.generate("Create an image of a dog");
    h.send(key(Key::ShiftS));
    const auto up = h.send(arrow(Direction::Up));
    REQUIRE(up.size() == 1);
    CHECK(std::get<Earcon>(up[0]).kind == EarconKind::SizeTick);
    CHECK(speech_of(h.send(key(Key::Shift))) == "size 110 by 110");
    std::string last;
    for (int i = 0; i < 20; ++i) last = speech_of(h.send(arrow(Direction::Down)));
    CHECK(last == "Minimum size reached");
    CHECK(speech_of(h.send(key(Key::Escape))) == "Exited size edit mode");
}

TEST_CASE("overlap during location edit is spoken") {
    Harness h;
    h.generate("Create an image of a dog");
    h.send(arrow(Direction::Right));
    h.generate("Create an image of a cat");
    h.send(key(Key::ShiftL));
    // 420 -> 400 leaves the boxes touching; 380 overlaps.
    CHECK_FALSE(has_earcon(h.send(arrow(Direction::Left)), EarconKind::Overlap));
    const auto events = h.send(arrow(Direction::Left));
    CHECK(has_earcon(events, EarconKind::Overlap));
    CHECK(speech_of(events) == "Overlapping with dog");
}

TEST_CASE("backend wait absorbs keys and Escape drops the late result") {
    Harness h;
    handle(h.state, key(Key::Enter));
    handle(h.state, TranscriptArrived{"Create an image of a dog"});
    const HandleResult r = handle(h.state, key(Key::Enter));
    REQUIRE(r.dispatch);
    CHECK(speech_of(handle(h.state, arrow(Direction::Left)).events) == kPleaseWait);
    const Command result = execute(h.state, *r.dispatch, *h.backend, h.store);
    handle(h.state, key(Key::Escape));
    CHECK(std::holds_alternative<NavigateMode>(h.state.mode));
    CHECK(handle(h.state, result).events.empty());
    CHECK(h.state.scene.empty());
}

TEST_CASE("backend failures are spoken and return to navigation") {
    Harness h;
    handle(h.state, key(Key::Enter));
    handle(h.state, TranscriptArrived{"Create an image of a dog"});
    const HandleResult r = handle(h.state, key(Key::Enter));
    const auto events = handle(h.state, BackendFailed{r.dispatch->request, ErrorCode::ContentRejected, "blocked"}).events;
    CHECK(speech_of(events).rfind("Image generation failed. ", 0) == 0);
    CHECK(std::holds_alternative<NavigateMode>(h.state.mode));
    CHECK_FALSE(h.state.pending);
}

TEST_CASE("global description and chat round trips") {
    Harness h;
    h.generate("Create an image of a dog");
    const auto global = h.send(key(Key::ShiftG));
    CHECK(speech_of(global).find("dog") != std::string::npos);
    CHECK(std::holds_alternative<NavigateMode>(h.state.mode));

    CHECK(speech_of(h.send(key(Key::ShiftC))) == "Ask a question about the image and I will answer.");
    h.send(TranscriptArrived{"What color is it?"});
    const auto answer = h.send(key(Key::Enter));
    CHECK_FALSE(speech_of(answer).empty());
    CHECK(std::holds_alternative<NavigateMode>(h.state.mode));
}

TEST_CASE("help list reads SHIFT + G first and has eleven entries") {
    REQUIRE(kHelpEntries.size() == 11);
    Harness h;
    h.send(key(Key::ShiftK));
    CHECK(speech_of(h.send(arrow(Direction::Down))).rfind("SHIFT + G", 0) == 0);
    for (std::size_t i = 1; i < kHelpEntries.size(); ++i) h.send(arrow(Direction::Down));
    CHECK(has_earcon(h.send(arrow(Direction::Down)), EarconKind::Thump));
    CHECK(speech_of(h.send(key(Key::Escape))) == "Closed keyboard commands");
}

TEST_CASE("command names round-trip through the parser") {
    for (const char* name : {"enter", "escape", "shift", "shift-g", "shift-i", "shift-r", "shift-c", "shift-l",
                             "shift-s", "shift-k", "shift-x", "arrow-up", "arrow-left", "shift-arrow-down",
                             "shift-arrow-right"})
        CHECK(command_name(parse_command(name)) == name);
    CHECK(command_name(parse_command("transcript", std::string("hi"))) == "transcript");
    CHECK_THROWS_AS(parse_command("transcript"), Error);
    CHECK_THROWS_AS(parse_command("enter", std::string("x")), Error);
    CHECK_THROWS_AS(parse_command("generation-arrived"), Error);
    CHECK_THROWS_AS(parse_command("ctrl-z"), Error);
}

TEST_CASE("replay of nothing is the initial state") {
    auto backend = make_backend("mock", 3);
    MemoryImageStore store;
    const SessionState s = replay(CanvasConfig{}, 3, {}, *backend, store);
    CHECK(s == new_session(CanvasConfig{}, 3));
    CHECK(s.event_log.empty());
}

TEST_CASE("bundled task scripts replay byte-identically and pass their checks") {
    for (const char* task : {"task1", "task2"}) {
        CAPTURE(task);
        const Script script = parse_script(read_fixture(std::string(task) + ".script"));
        const std::string first = replay_file(script);
        CHECK(first == replay_file(script));
        const SessionDocument doc = parse_session(first);
        for (const auto& r : evaluate_checks(read_fixture(std::string(task) + ".checks"), doc.state.scene)) {
            CAPTURE(r.check);
            CAPTURE(r.detail);
            CHECK(r.passed);
        }
    }
}

TEST_CASE("script parser reports line numbers") {
    CHECK_THROWS_WITH_AS(parse_script("0\tenter\n2\tenter\n"), doctest::Contains("line 2"), Error);
    CHECK_THROWS_WITH_AS(parse_script("0\tbogus\n"), doctest::Contains("line 1"), Error);
    CHECK_THROWS_WITH_AS(parse_script("0\tenter\n@width\t600\n"), doctest::Contains("line 2"), Error);
    CHECK_THROWS_WITH_AS(parse_script("@width\t50\n"), doctest::Contains("100"), Error);
    const Script s = parse_script("# c\n@width\t800\n@seed\t9\n0\ttranscript\ta\tb\n");
    CHECK(s.config.width == 800);
    CHECK(s.seed == 9);
    CHECK(std::get<TranscriptArrived>(s.commands[0]).text == "a\tb");
}

TEST_CASE("checks fail on missing objects and reject malformed lines") {
    Harness h;
    h.generate("Create an image of a dog");
    const auto results = evaluate_checks("count\t1\nrow\tcat\ttop\n", h.state.scene);
    REQUIRE(results.size() == 2);
    CHECK(results[0].passed);
    CHECK_FALSE(results[1].passed);
    CHECK_THROWS_AS(evaluate_checks("sideways\tdog\n", h.state.scene), Error);
    CHECK_THROWS_AS(evaluate_checks("count\n", h.state.scene), Error);
}

// Random walks over the whole command vocabulary with the mock backend.
TEST_CASE("state machine properties under random commands") {
    static const std::vector<std::string> names = {
        "enter", "escape", "shift", "shift-g", "shift-i", "shift-r", "shift-c", "shift-l", "shift-s", "shift-k",
        "shift-x", "arrow-up", "arrow-down", "arrow-left", "arrow-right", "shift-arrow-up", "shift-arrow-down",
        "shift-arrow-left", "shift-arrow-right", "transcript"};
    static const std::vector<std::string> prompts = {"Create an image of a dog", "a red apple", "a clock", " "};
    std::mt19937_64 rng(20261017);
    for (int walk = 0; walk < 20; ++walk) {
        Harness h;
        for (int step = 0; step < 300; ++step) {
            const std::string& name = names[rng() % names.size()];
            const Command cmd = name == "transcript" ? parse_command(name, prompts[rng() % prompts.size()])
                                                     : parse_command(name);
            const bool was_location_edit = std::holds_alternative<LocationEditMode>(h.state.mode);

            // Escape from any mode other than Navigate reaches Navigate in one step.
            if (!std::holds_alternative<NavigateMode>(h.state.mode)) {
                SessionState probe = h.state;
                handle(probe, key(Key::Escape));
                CHECK(std::holds_alternative<NavigateMode>(probe.mode));
            }

            const std::size_t log_before = h.state.event_log.size();
            const HandleResult r = handle(h.state, cmd);
            CHECK(h.state.event_log.size() == log_before + 1);
            if (r.dispatch) {
                handle(h.state, execute(h.state, *r.dispatch, *h.backend, h.store));
                CHECK(h.state.event_log.size() == log_before + 2);
            }
            for (std::size_t i = log_before; i < h.state.event_log.size(); ++i) REQUIRE(h.state.event_log[i].seq == i);

            if (const auto* m = std::get_if<LocationEditMode>(&h.state.mode)) CHECK(h.state.scene.find(m->id));
            if (const auto* m = std::get_if<SizeEditMode>(&h.state.mode)) CHECK(h.state.scene.find(m->id));
            CHECK(check_invariants(h.state.grid, h.state.scene).empty());
            if (was_location_edit && std::holds_alternative<NavigateMode>(h.state.mode))
                CHECK(h.state.grid.tiles() == relayout_from_scene(h.state.scene).tiles());
        }
    }
}

TEST_CASE("replay is deterministic for random scripts") {
    std::mt19937_64 rng(99);
    static const std::vector<std::string> names = {"enter", "escape", "shift-l", "shift-s", "arrow-up",
                                                   "arrow-right", "shift-arrow-left", "shift-g", "transcript"};
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Command> cmds;
        for (int i = 0; i < 120; ++i) {
            const std::string& n = names[rng() % names.size()];
            cmds.push_back(n == "transcript" ? parse_command(n, std::string("a blue kite")) : parse_command(n));
        }
        const Script s{CanvasConfig{}, static_cast<std::uint64_t>(trial), "mock", cmds};
        CHECK(replay_file(s) == replay_file(s));
    }
}
