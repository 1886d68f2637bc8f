#include "cli.hpp"

#include <csignal>
#include <fstream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "altcanvas/http_frontend.hpp"
#include "altcanvas/script.hpp"
#include "altcanvas/service.hpp"
#include "altcanvas/session_file.hpp"
#include "altcanvas/session_render.hpp"

namespace altcanvas::cli {

namespace {

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::BackendUnavailable:
    case ErrorCode::ContentRejected:
    case ErrorCode::Timeout: return kExitBackend;
    default: return kExitUsage;
    }
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path images_dir_for(const std::filesystem::path& session_path) {
    return session_path.parent_path() / "images";
}

struct NewOptions {
    CanvasConfig config;
    std::string style = "tactile";
    std::uint64_t seed = 0;
    std::string backend = "mock";
    std::string out = "session.json";
};

struct ReplayOptions {
    std::string script;
    std::string out;
    std::string checks;
    std::optional<std::uint64_t> seed;
    bool allow_network = false;
};

struct RenderOptions {
    std::string session;
    std::string kind = "snapshot";
    std::string out;
    std::string format;
    std::string edges = "sobel";
    EdgeParams params;
    std::string instruction;
    std::string images;
    bool allow_network = false;
};

struct ServeOptions {
    std::string data_dir = "altcanvas-data";
    std::string bind = "127.0.0.1:8080";
    bool allow_network = false;
    int heartbeat_ms = 15000;
};

int cmd_new(const NewOptions& o, std::ostream& out) {
    CanvasConfig config = o.config;
    const auto style = parse_image_style(o.style);
    if (!style) throw Error(ErrorCode::InvalidConfig, "--style must be tactile or color");
    config.image_style = *style;
    if (o.backend != "mock" && o.backend != "remote") throw Error(ErrorCode::InvalidConfig, "--backend must be mock or remote");
    const SessionDocument doc{new_session(config, o.seed), o.backend};
    save_session_file(o.out, doc);
    out << o.out << "\n";
    return kExitOk;
}

std::unique_ptr<GenBackend> backend_for(const std::string& kind, std::uint64_t seed, bool allow_network) {
    if (kind == "remote" && !allow_network)
        throw Error(ErrorCode::InvalidConfig, "this session uses the remote backend; pass --allow-network");
    return make_backend(kind, seed);
}

int cmd_replay(const ReplayOptions& o, std::ostream& out, std::ostream& err) {
    Script script = load_script(o.script);
    if (o.seed) script.seed = *o.seed;
    const auto backend = backend_for(script.backend, script.seed, o.allow_network);
    std::unique_ptr<ImageStore> store;
    if (o.out.empty()) store = std::make_unique<MemoryImageStore>();
    else store = std::make_unique<DirectoryImageStore>(images_dir_for(o.out));

    const SessionState state = replay(script.config, script.seed, script.commands, *backend, *store);
    for (const auto& entry : state.event_log) out << log_entry_to_json(entry).dump() << "\n";
    if (!o.out.empty()) save_session_file(o.out, SessionDocument{state, script.backend});

    int failed_requests = 0;
    for (const auto& entry : state.event_log)
        if (const auto* f = std::get_if<BackendFailed>(&entry.command)) {
            ++failed_requests;
            err << "backend failure (entry " << entry.seq << "): " << to_string(f->code) << ": " << f->message << "\n";
        }
    if (failed_requests > 0) return kExitBackend;

    if (!o.checks.empty()) {
        const auto results = evaluate_checks(read_text(o.checks), state.scene);
        int failures = 0;
        for (const auto& r : results) {
            err << (r.passed ? "PASS" : "FAIL") << " line " << r.line << ": " << r.check << " (" << r.detail << ")\n";
            failures += r.passed ? 0 : 1;
        }
        if (failures > 0) {
            err << failures << " of " << results.size() << " checks failed\n";
            return kExitAssertion;
        }
    }
    return kExitOk;
}

int cmd_render(RenderOptions o, std::ostream& out, std::ostream& err) {
    const SessionDocument doc = load_session_file(o.session);
    RenderRequest req;
    const auto kind = parse_render_kind(o.kind);
    if (!kind) throw Error(ErrorCode::InvalidConfig, "--kind must be snapshot, color or tactile");
    req.kind = *kind;
    if (!o.format.empty()) {
        const auto f = parse_export_format(o.format);
        if (!f) throw Error(ErrorCode::UnsupportedFormat, "--format must be png or svg");
        req.format = *f;
    }
    const auto algorithm = parse_edge_algorithm(o.edges);
    if (!algorithm) throw Error(ErrorCode::InvalidThresholds, "--edges must be sobel or canny");
    o.params.algorithm = *algorithm;
    req.edges = o.params;
    req.instruction = o.instruction;

    const DirectoryImageStore store(o.images.empty() ? images_dir_for(o.session) : std::filesystem::path(o.images));
    const auto backend = backend_for(doc.backend, doc.state.seed, o.allow_network);
    const RenderOutput r = render_scene(doc.state.scene, store, *backend, req);
    for (const auto& w : r.warnings) err << "warning: " << w << "\n";
    std::ofstream file(o.out, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorCode::InvalidConfig, "cannot write " + o.out);
    file.write(reinterpret_cast<const char*>(r.bytes.data()), static_cast<std::streamsize>(r.bytes.size()));
    out << o.out << " (" << r.media_type << ", " << r.bytes.size() << " bytes)\n";
    return kExitOk;
}

int cmd_serve(const ServeOptions& o, std::ostream& out) {
    const auto [host, port] = parse_bind_address(o.bind);
    if (o.heartbeat_ms <= 0) throw Error(ErrorCode::InvalidConfig, "--heartbeat-ms must be positive");
    ServiceConfig config;
    config.data_dir = o.data_dir;
    config.allow_remote = o.allow_network;
    SessionService service(config);
    HttpFrontend http(service, std::chrono::milliseconds(o.heartbeat_ms));

    // SIGINT/SIGTERM are consumed by a waiter thread that stops the server.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    const int bound = http.bind(host, port);
    out << "altcanvas listening on " << host << ":" << bound << " (data " << o.data_dir << ")" << std::endl;
    std::thread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        service.shutdown();
        http.stop();
    });
    http.listen();
    // listen() can also return on its own; release the waiter.
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
    service.drain();
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tile-based accessible image authoring: session files, script replay, renders and the HTTP service", "altcanvas"};
    app.set_config("--config", "", "TOML or INI file with option defaults; command-line flags override it");
    app.require_subcommand(1);

    NewOptions n;
    auto* sub_new = app.add_subcommand("new", "Create an empty session file");
    sub_new->add_option("--width", n.config.width, "Canvas width in pixels (minimum 100)")->capture_default_str();
    sub_new->add_option("--height", n.config.height, "Canvas height in pixels (minimum 100)")->capture_default_str();
    sub_new->add_option("--style", n.style, "Image style: tactile or color")->capture_default_str();
    sub_new->add_option("--speech-rate", n.config.speech_rate, "Speech rate 1, 2 or 3")->capture_default_str();
    sub_new->add_option("--seed", n.seed, "Seed for the mock backend")->capture_default_str();
    sub_new->add_option("--backend", n.backend, "mock or remote")->capture_default_str();
    sub_new->add_option("-o,--out", n.out, "Session file to write")->capture_default_str();

    ReplayOptions r;
    auto* sub_replay = app.add_subcommand("replay", "Run a command script and print the event log as NDJSON");
    sub_replay->add_option("script", r.script, "Command script")->required();
    sub_replay->add_option("-o,--out", r.out, "Write the final session file here (images go to ./images beside it)");
    sub_replay->add_option("--assert", r.checks, "Checks file evaluated against the final scene (exit 3 on failure)");
    sub_replay->add_option("--seed", r.seed, "Override the script's seed");
    sub_replay->add_flag("--allow-network", r.allow_network, "Permit scripts that use the remote backend");

    RenderOptions d;
    auto* sub_render = app.add_subcommand("render", "Render a session to PNG or SVG");
    sub_render->add_option("session", d.session, "Session file")->required();
    sub_render->add_option("--kind", d.kind, "snapshot, color or tactile")->capture_default_str();
    sub_render->add_option("-o,--out", d.out, "Output file")->required();
    sub_render->add_option("--format", d.format, "png or svg (default: svg for tactile, png otherwise)");
    sub_render->add_option("--edges", d.edges, "Edge detector for tactile: sobel or canny")->capture_default_str();
    sub_render->add_option("--threshold", d.params.threshold, "Sobel binarization threshold 0-255")->capture_default_str();
    sub_render->add_option("--low", d.params.canny_low, "Canny low threshold")->capture_default_str();
    sub_render->add_option("--high", d.params.canny_high, "Canny high threshold")->capture_default_str();
    sub_render->add_option("--sigma", d.params.gaussian_sigma, "Canny Gaussian sigma")->capture_default_str();
    sub_render->add_option("--instruction", d.instruction, "Background instruction for color renders");
    sub_render->add_option("--images", d.images, "Image directory (default: ./images beside the session)");
    sub_render->add_flag("--allow-network", d.allow_network, "Permit the remote backend for color renders");

    ServeOptions s;
    auto* sub_serve = app.add_subcommand("serve", "Run the HTTP session service");
    sub_serve->add_option("--data-dir", s.data_dir, "Session and image directory")
        ->envname("ALTCANVAS_DATA_DIR")
        ->capture_default_str();
    sub_serve->add_option("--bind", s.bind, "host:port to listen on")->envname("ALTCANVAS_BIND")->capture_default_str();
    sub_serve->add_flag("--allow-network", s.allow_network, "Permit sessions that use the remote backend");
    sub_serve->add_option("--heartbeat-ms", s.heartbeat_ms, "Event stream keepalive interval")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*sub_new) return cmd_new(n, out);
        if (*sub_replay) return cmd_replay(r, out, err);
        if (*sub_render) return cmd_render(d, out, err);
        if (*sub_serve) return cmd_serve(s, out);
    } catch (const Error& e) {
        err << "altcanvas: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "altcanvas: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}

} // namespace altcanvas::cli
