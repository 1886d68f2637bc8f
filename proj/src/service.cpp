#include "altcanvas/service.hpp"

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "altcanvas/codec.hpp"

namespace altcanvas {

ServiceConfig ServiceConfig::from_environment() {
    ServiceConfig c;
    const char* dir = std::getenv("ALTCANVAS_DATA_DIR");
    c.data_dir = dir && *dir ? dir : "altcanvas-data";
    return c;
}

struct SessionService::Record {
    std::string id;
    mutable std::mutex mu;
    mutable std::condition_variable cv;   // client sequence advanced or events appended
    SessionDocument doc;
    std::unique_ptr<GenBackend> backend;
    std::string created_at;
    std::string updated_at;
    std::uint64_t next_client_seq = 0;
    std::vector<StreamEvent> events;
};

namespace {

std::string now_iso() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string random_id() {
    static std::mutex mu;
    static std::mt19937_64 rng{std::random_device{}()};
    std::lock_guard lk(mu);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
    return buf;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Stands in for the remote backend when the server was started without it.
struct DisabledBackend final : GenBackend {
    std::string_view kind() const override { return "disabled"; }
    static GenResult fail() {
        GenResult r;
        r.error = GenFailure{ErrorCode::BackendUnavailable, "the remote backend is not enabled on this server"};
        return r;
    }
    GenResult generate_image(const GenRequest&) override { return fail(); }
    GenResult remove_background(const GenRequest&) override { return fail(); }
    GenResult describe_image(const GenRequest&) override { return fail(); }
    GenResult describe_canvas(const GenRequest&) override { return fail(); }
    GenResult answer_question(const GenRequest&) override { return fail(); }
    GenResult render_background(const GenRequest&) override { return fail(); }
};

std::vector<StreamEvent> flatten(const std::vector<LogEntry>& log) {
    std::vector<StreamEvent> out;
    for (const auto& entry : log)
        for (const auto& e : entry.events) out.push_back({out.size(), entry.seq, e});
    return out;
}

} // namespace

SessionService::SessionService(ServiceConfig config) : config_(std::move(config)) {
    std::filesystem::create_directories(config_.data_dir / "sessions");
    store_ = std::make_shared<DirectoryImageStore>(config_.data_dir / "images");

    for (const auto& entry : std::filesystem::directory_iterator(config_.data_dir / "sessions")) {
        const auto& path = entry.path();
        const std::string name = path.filename().string();
        if (path.extension() != ".json" || name.find(".meta.") != std::string::npos) continue;
        const std::string id = path.stem().string();
        try {
            SessionDocument doc = load_session_file(path);
            std::string created = now_iso();
            std::uint64_t next_seq = 0;
            const auto meta_path = config_.data_dir / "sessions" / (id + ".meta.json");
            if (std::filesystem::exists(meta_path)) {
                const auto meta = ojson::parse(read_file(meta_path));
                created = meta.value("created_at", created);
                next_seq = meta.value("next_client_seq", std::uint64_t{0});
            }
            auto r = std::make_shared<Record>();
            r->id = id;
            r->backend = doc.backend == "remote" && !config_.allow_remote
                             ? std::unique_ptr<GenBackend>(std::make_unique<DisabledBackend>())
                             : make_backend(doc.backend, doc.state.seed);
            r->events = flatten(doc.state.event_log);
            r->doc = std::move(doc);
            r->created_at = created;
            r->updated_at = created;
            r->next_client_seq = next_seq;
            sessions_.emplace(id, std::move(r));
        } catch (const std::exception& e) {
            std::cerr << "altcanvas: skipping session " << id << ": " << e.what() << "\n";
        }
    }
}

SessionService::~SessionService() {
    shutdown();
    drain();
}

std::shared_ptr<SessionService::Record> SessionService::find(const std::string& id) const {
    std::lock_guard lk(mu_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "unknown session '" + id + "'");
    return it->second;
}

std::string SessionService::register_record(SessionDocument doc, std::string created_at,
                                            std::uint64_t next_client_seq) {
    if (doc.backend == "remote" && !config_.allow_remote)
        throw Error(ErrorCode::InvalidConfig, "the remote backend is not enabled on this server");
    auto r = std::make_shared<Record>();
    r->backend = make_backend(doc.backend, doc.state.seed);
    r->events = flatten(doc.state.event_log);
    r->doc = std::move(doc);
    r->created_at = created_at;
    r->updated_at = created_at;
    r->next_client_seq = next_client_seq;
    {
        std::lock_guard lk(mu_);
        do r->id = random_id();
        while (sessions_.count(r->id));
        sessions_.emplace(r->id, r);
    }
    std::lock_guard lk(r->mu);
    persist(*r);
    return r->id;
}

std::string SessionService::create_session(const CanvasConfig& config, const std::string& backend,
                                           std::uint64_t seed) {
    if (backend != "mock" && backend != "remote")
        throw Error(ErrorCode::InvalidConfig, "backend must be mock or remote");
    SessionDocument doc{new_session(config, seed), backend};
    return register_record(std::move(doc), now_iso(), 0);
}

std::string SessionService::import_session(std::string_view session_file) {
    return register_record(parse_session(session_file), now_iso(), 0);
}

std::vector<std::string> SessionService::list_sessions() const {
    std::lock_guard lk(mu_);
    std::vector<std::string> ids;
    for (const auto& [id, r] : sessions_) ids.push_back(id);
    return ids;
}

SessionInfo SessionService::info(const std::string& id) const {
    auto r = find(id);
    std::lock_guard lk(r->mu);
    return {r->id, r->doc.backend, r->doc.state.seed, r->created_at, r->updated_at, r->next_client_seq};
}

std::string SessionService::session_file(const std::string& id) const {
    auto r = find(id);
    std::lock_guard lk(r->mu);
    return serialize_session(r->doc);
}

std::string SessionService::state_digest(const std::string& id) const {
    return sha256_hex(session_file(id));
}

SessionDocument SessionService::document(const std::string& id) const {
    auto r = find(id);
    std::lock_guard lk(r->mu);
    return r->doc;
}

void SessionService::persist(Record& r) {
    const auto dir = config_.data_dir / "sessions";
    save_session_file(dir / (r.id + ".json"), r.doc);
    const ojson meta{{"created_at", r.created_at}, {"updated_at", r.updated_at},
                     {"next_client_seq", r.next_client_seq}};
    const auto tmp = dir / (r.id + ".meta.json.tmp");
    std::ofstream(tmp, std::ios::binary | std::ios::trunc) << meta.dump(2) << "\n";
    std::filesystem::rename(tmp, dir / (r.id + ".meta.json"));
}

SubmitResult SessionService::commit(Record& r, const HandleResult& result) {
    SubmitResult out;
    out.entry = r.doc.state.event_log.back().seq;
    out.events = result.events;
    for (const auto& e : result.events) r.events.push_back({r.events.size(), out.entry, e});
    r.updated_at = now_iso();
    return out;
}

SubmitResult SessionService::submit(const std::string& id, const Command& cmd,
                                    std::optional<std::uint64_t> client_seq) {
    if (!is_user_command(cmd))
        throw Error(ErrorCode::MalformedCommand, "'" + command_name(cmd) + "' cannot be submitted by clients");
    auto r = find(id);
    std::unique_lock lk(r->mu);
    if (client_seq) {
        if (*client_seq < r->next_client_seq)
            throw Error(ErrorCode::SequenceConflict, "sequence number " + std::to_string(*client_seq) +
                                                         " was already used (next is " +
                                                         std::to_string(r->next_client_seq) + ")");
        const bool ready = r->cv.wait_for(lk, config_.sequence_wait, [&] {
            return r->next_client_seq == *client_seq || stopping_;
        });
        if (!ready || stopping_)
            throw Error(ErrorCode::SequenceConflict, "gave up waiting for sequence number " +
                                                         std::to_string(r->next_client_seq));
    }

    const HandleResult first = handle(r->doc.state, cmd);
    SubmitResult out = commit(*r, first);
    out.deferred = first.dispatch.has_value();
    if (client_seq) ++r->next_client_seq;

    if (first.dispatch) {
        if (r->doc.backend == "mock") {
            const Command result = execute(r->doc.state, *first.dispatch, *r->backend, *store_);
            commit(*r, handle(r->doc.state, result));
        } else {
            std::lock_guard wl(workers_mu_);
            workers_.emplace_back(&SessionService::run_backend, this, r, *first.dispatch);
        }
    }
    persist(*r);
    out.state_digest = sha256_hex(serialize_session(r->doc));
    r->cv.notify_all();
    return out;
}

void SessionService::run_backend(std::shared_ptr<Record> r, Dispatch dispatch) {
    SessionState snapshot;
    {
        std::lock_guard lk(r->mu);
        snapshot = r->doc.state;
    }
    const Command result = execute(snapshot, dispatch, *r->backend, *store_);
    std::lock_guard lk(r->mu);
    commit(*r, handle(r->doc.state, result));
    persist(*r);
    r->cv.notify_all();
}

std::vector<StreamEvent> SessionService::events(const std::string& id, std::uint64_t from,
                                                std::chrono::milliseconds wait) const {
    auto r = find(id);
    std::unique_lock lk(r->mu);
    if (wait.count() > 0)
        r->cv.wait_for(lk, wait, [&] { return r->events.size() > from || stopping_; });
    if (from >= r->events.size()) return {};
    return {r->events.begin() + static_cast<std::ptrdiff_t>(from), r->events.end()};
}

RenderOutput SessionService::render(const std::string& id, const RenderRequest& request) const {
    auto r = find(id);
    Scene scene;
    {
        std::lock_guard lk(r->mu);
        scene = r->doc.state.scene;
    }
    return render_scene(scene, *store_, *r->backend, request);
}

CanvasConfig SessionService::update_settings(const std::string& id, const CanvasConfig& config) {
    config.validate();
    auto r = find(id);
    std::lock_guard lk(r->mu);
    for (const auto& o : r->doc.state.scene.objects())
        if (!within_bounds(o, config))
            throw Error(ErrorCode::InvalidConfig, "the canvas cannot shrink past '" + o.name + "'");
    r->doc.state.scene.set_config(config);
    r->updated_at = now_iso();
    persist(*r);
    r->cv.notify_all();
    return config;
}

void SessionService::drain() {
    std::vector<std::thread> done;
    {
        std::lock_guard lk(workers_mu_);
        done.swap(workers_);
    }
    for (auto& t : done) t.join();
}

void SessionService::shutdown() {
    stopping_ = true;
    std::lock_guard lk(mu_);
    for (const auto& [id, r] : sessions_) {
        std::lock_guard rl(r->mu);
        r->cv.notify_all();
    }
}

} // namespace altcanvas
