#include <doctest.h>

#include <atomic>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "altcanvas/genai.hpp"
#include "altcanvas/prompts.hpp"
#include "altcanvas/render.hpp"

using namespace altcanvas;

namespace {

// Local HTTP server on an ephemeral port, torn down at scope exit.
struct FakeService {
    httplib::Server server;
    std::thread thread;
    int port = 0;

    void start() {
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    ~FakeService() {
        server.stop();
        if (thread.joinable()) thread.join();
    }
    RemoteConfig config() const {
        RemoteConfig c;
        c.endpoint = "http://127.0.0.1:" + std::to_string(port);
        c.api_key = "k";
        c.backoff = {std::chrono::milliseconds(1), std::chrono::milliseconds(1)};
        c.timeout = std::chrono::milliseconds(2000);
        return c;
    }
};

SceneObject dog_object() {
    SceneObject o;
    o.id = ObjectId{1};
    o.name = "dog";
    o.center = {300, 300};
    o.description = "A simple line drawing of a dog.";
    return o;
}

} // namespace

TEST_CASE("rewrite_prompt extracts the main object") {
    CHECK(rewrite_prompt("Create an image of a dog", ImageStyle::Tactile).main_object == "dog");
    CHECK(rewrite_prompt("Add an image of a tree with a thick trunk", ImageStyle::Tactile).main_object ==
          "tree with a thick trunk");
    CHECK(rewrite_prompt("dog", ImageStyle::Tactile).main_object == "dog");
    CHECK(rewrite_prompt("  draw a picture of the red apple. ", ImageStyle::Color).main_object == "red apple");
    CHECK(rewrite_prompt("Make a bowl", ImageStyle::Tactile).main_object == "bowl");
    CHECK(rewrite_prompt("Generate a simple drawing of a clock", ImageStyle::Tactile).main_object == "clock");
    CHECK(rewrite_prompt("create", ImageStyle::Tactile).main_object == "create");
    CHECK(rewrite_prompt("the", ImageStyle::Tactile).main_object == "the");
    try {
        rewrite_prompt("   ", ImageStyle::Tactile);
        FAIL("expected EmptyTranscript");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyTranscript);
    }
}

TEST_CASE("rewrite_prompt fills the style template") {
    const auto t = rewrite_prompt("Create an image of a dog", ImageStyle::Tactile);
    CHECK(t.final_prompt == prompts::fill(prompts::kTactileImage,
                                          {{"mainObject", "dog"}, {"voiceText", "Create an image of a dog"}}));
    CHECK(t.final_prompt.rfind("Create ONLY ONE DIGITAL graphic of the dog \n", 0) == 0);
    CHECK(t.final_prompt.find("requested the following object: Create an image of a dog.") != std::string::npos);
    const auto c = rewrite_prompt("Create an image of a dog", ImageStyle::Color);
    CHECK(c.final_prompt.find("color illustration of the dog") != std::string::npos);
}

TEST_CASE("rewrite_prompt never returns an empty main object") {
    for (const char* t : {"a", "an image of", "Create an image of", "...", "draw the", "x"})
        CHECK_FALSE(rewrite_prompt(t, ImageStyle::Tactile).main_object.empty());
}

TEST_CASE("object_name truncates by code points") {
    CHECK(object_name("dog") == "dog");
    const std::string long_name(60, 'a');
    CHECK(object_name(long_name).size() == 40);
    std::string accented;
    for (int i = 0; i < 50; ++i) accented += "\xC3\xA9";   // e-acute
    CHECK(object_name(accented).size() == 80);
}

TEST_CASE("mock backend is deterministic and seed dependent") {
    const auto a = generate_object(*make_backend("mock", 7), "Create an image of a dog", ImageStyle::Tactile);
    const auto b = generate_object(*make_backend("mock", 7), "Create an image of a dog", ImageStyle::Tactile);
    const auto c = generate_object(*make_backend("mock", 8), "Create an image of a dog", ImageStyle::Tactile);
    CHECK(a.image == b.image);
    CHECK(a.description == b.description);
    CHECK(a.image != c.image);
    CHECK(a.name == "dog");
    CHECK(a.description == "A simple line drawing of a dog.");
    const auto apple = generate_object(*make_backend("mock", 7), "apple", ImageStyle::Color);
    CHECK(apple.description == "A simple color illustration of an apple.");

    const auto img = decode_png(a.image);
    CHECK(img.width == MockBackend::kImageSize);
    CHECK(img.at(0, 0).a == 0);
    CHECK(img.at(img.width / 2, img.height / 2).a == 255);
}

TEST_CASE("mock descriptions and chat") {
    MockBackend mock(1);
    CanvasConfig cfg;
    Scene empty(cfg);
    CHECK(describe_canvas(mock, empty, {}) == "The canvas is empty.");
    Scene s(cfg);
    s.add(dog_object());
    CHECK(describe_canvas(mock, s, {}) == "The canvas has dog in the middle-center.");

    const auto answer = answer_question(mock, dog_object(), std::nullopt, "Describe the shape of the dog's tail?");
    CHECK(answer == "About dog: Describe the shape of the dog's tail? Context: A simple line drawing of a dog.");
    try {
        answer_question(mock, dog_object(), std::nullopt, " ");
        FAIL("expected EmptyTranscript");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyTranscript);
    }
}

namespace {

struct BrokenBackend final : GenBackend {
    std::string_view kind() const override { return "broken"; }
    static GenResult fail() {
        GenResult r;
        r.error = GenFailure{ErrorCode::BackendUnavailable, "down"};
        return r;
    }
    GenResult generate_image(const GenRequest&) override { return fail(); }
    GenResult remove_background(const GenRequest&) override { return fail(); }
    GenResult describe_image(const GenRequest&) override { return fail(); }
    GenResult describe_canvas(const GenRequest&) override { return fail(); }
    GenResult answer_question(const GenRequest&) override { return fail(); }
    GenResult render_background(const GenRequest&) override { return fail(); }
};

} // namespace

TEST_CASE("background_render tints deterministically and falls back") {
    CanvasConfig cfg;
    cfg.width = cfg.height = 120;
    MemoryImageStore store;
    Scene s(cfg);
    auto dog = dog_object();
    dog.center = {60, 60};
    dog.size = Size2D::with_aspect(40, 40);
    dog.image_ref = store.put_raster(RasterImage(10, 10, {0, 0, 0, 255}));
    s.add(dog);

    MockBackend mock(3);
    const auto sunny = background_render(mock, s, store, "a sunny day with blue skies");
    const auto again = background_render(mock, s, store, "a sunny day with blue skies");
    const auto night = background_render(mock, s, store, "a night scene");
    CHECK(sunny.warnings.empty());
    CHECK(sunny.image == again.image);
    CHECK(sunny.image != night.image);
    CHECK(sunny.image.at(0, 0) != Rgba{255, 255, 255, 255});

    BrokenBackend broken;
    const auto plain = background_render(broken, s, store, "a night scene");
    CHECK(plain.warnings.size() == 1);
    CHECK(plain.image == compose(s, store).image);

    try {
        generate_object(broken, "dog", ImageStyle::Tactile);
        FAIL("expected BackendUnavailable");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BackendUnavailable);
    }
}

TEST_CASE("remote backend request bodies and success path") {
    FakeService svc;
    nlohmann::json seen_generate, seen_chat;
    std::string auth;
    const Bytes png = encode_png(RasterImage(4, 4, {1, 2, 3, 255}));
    svc.server.Post("/api/v1/generate_image", [&](const httplib::Request& req, httplib::Response& res) {
        seen_generate = nlohmann::json::parse(req.body);
        auth = req.get_header_value("Authorization");
        res.set_content(nlohmann::json{{"image", base64_encode(png)}}.dump(), "application/json");
    });
    svc.server.Post("/api/v1/answer_question", [&](const httplib::Request& req, httplib::Response& res) {
        seen_chat = nlohmann::json::parse(req.body);
        res.set_content(R"({"description":"It is curly."})", "application/json");
    });
    svc.start();
    auto cfg = svc.config();
    cfg.endpoint += "/api/";
    RemoteBackend remote(cfg);

    GenRequest req;
    req.prompt = "draw";
    req.subject = "dog";
    const auto r = remote.generate_image(req);
    REQUIRE_FALSE(r.error);
    CHECK(r.image == png);
    CHECK(seen_generate["n"] == 1);
    CHECK(seen_generate["style"] == "natural");
    CHECK(seen_generate["quality"] == "hd");
    CHECK(seen_generate["prompt"] == "draw");
    CHECK(auth == "Bearer k");

    const auto answer = answer_question(remote, dog_object(), png, "What does the tail look like?");
    CHECK(answer == "It is curly.");
    const std::string prompt = seen_chat["prompt"];
    CHECK(prompt == prompts::fill(prompts::kChat, {{"voiceText", "What does the tail look like?"}}));
    CHECK(prompt.rfind("You are describing an image to a Visually Impaired Person.", 0) == 0);
    CHECK(seen_chat.contains("image"));
}

TEST_CASE("remote backend retries twice, then reports BackendUnavailable") {
    FakeService svc;
    std::atomic<int> hits{0};
    svc.server.Post("/v1/generate_image", [&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.status = 503;
    });
    svc.start();
    RemoteBackend remote(svc.config());
    const auto r = remote.generate_image(GenRequest{});
    REQUIRE(r.error);
    CHECK(r.error->code == ErrorCode::BackendUnavailable);
    CHECK(hits == 3);
}

TEST_CASE("remote backend maps rejections and timeouts") {
    FakeService svc;
    std::atomic<int> hits{0};
    svc.server.Post("/v1/generate_image", [&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.status = 422;
        res.set_content(R"({"error":{"code":"content_rejected","message":"nope"}})", "application/json");
    });
    svc.server.Post("/v1/describe_image", [&](const httplib::Request&, httplib::Response& res) {
        std::this_thread::sleep_for(std::chrono::milliseconds(600));
        res.set_content(R"({"description":"late"})", "application/json");
    });
    svc.start();
    auto cfg = svc.config();
    cfg.timeout = std::chrono::milliseconds(200);
    RemoteBackend remote(cfg);
    const auto rejected = remote.generate_image(GenRequest{});
    REQUIRE(rejected.error);
    CHECK(rejected.error->code == ErrorCode::ContentRejected);
    CHECK(hits == 1);
    const auto slow = remote.describe_image(GenRequest{});
    REQUIRE(slow.error);
    CHECK(slow.error->code == ErrorCode::Timeout);
}

TEST_CASE("remote backend with nothing listening is unavailable") {
    RemoteConfig cfg;
    cfg.endpoint = "http://127.0.0.1:1";
    cfg.backoff = {std::chrono::milliseconds(1)};
    RemoteBackend remote(cfg);
    const auto r = remote.describe_canvas(GenRequest{});
    REQUIRE(r.error);
    CHECK(r.error->code == ErrorCode::BackendUnavailable);
    CHECK_THROWS_AS(RemoteBackend(RemoteConfig{}), Error);
}
