#include "altcanvas/http_frontend.hpp"

#include <atomic>
#include <charconv>

#include <httplib.h>

#include "altcanvas/codec.hpp"

namespace altcanvas {

namespace {

constexpr const char* kId = "([0-9a-f]{1,64})";
constexpr auto kPollSlice = std::chrono::milliseconds(200);

int status_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::UnknownSession: return 404;
    case ErrorCode::SequenceConflict: return 409;
    case ErrorCode::UnsupportedFormat: return 415;
    case ErrorCode::RenderFailed: return 500;
    case ErrorCode::BackendUnavailable:
    case ErrorCode::Timeout: return 502;
    default: return 400;
    }
}

void send_json(httplib::Response& res, int status, const ojson& body) {
    res.status = status;
    res.set_content(body.dump() + "\n", "application/json");
}

void send_error(httplib::Response& res, ErrorCode code, const std::string& message) {
    send_json(res, status_for(code), ojson{{"error", {{"code", std::string(to_string(code))}, {"message", message}}}});
}

ojson parse_body(const httplib::Request& req, bool allow_empty) {
    if (req.body.empty()) {
        if (allow_empty) return ojson::object();
        throw Error(ErrorCode::MalformedCommand, "request body is empty");
    }
    try {
        ojson j = ojson::parse(req.body);
        if (!j.is_object()) throw Error(ErrorCode::MalformedCommand, "request body must be a JSON object");
        return j;
    } catch (const ojson::parse_error& e) {
        throw Error(ErrorCode::MalformedCommand, std::string("request body is not JSON: ") + e.what());
    }
}

template <class T>
T json_field(const ojson& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const ojson::exception&) {
        throw Error(ErrorCode::InvalidConfig, std::string("field '") + key + "' has the wrong type");
    }
}

CanvasConfig merge_config(CanvasConfig c, const ojson& j) {
    c.width = json_field(j, "width", c.width);
    c.height = json_field(j, "height", c.height);
    c.speech_rate = json_field(j, "speech_rate", c.speech_rate);
    if (j.contains("image_style")) {
        const auto style = parse_image_style(json_field<std::string>(j, "image_style", ""));
        if (!style) throw Error(ErrorCode::InvalidConfig, "image_style must be tactile or color");
        c.image_style = *style;
    }
    return c;
}

ojson config_json(const CanvasConfig& c) {
    return ojson{{"width", c.width}, {"height", c.height}, {"image_style", std::string(to_string(c.image_style))},
                 {"speech_rate", c.speech_rate}};
}

template <class T>
T query_number(const httplib::Request& req, const char* key, T fallback) {
    if (!req.has_param(key)) return fallback;
    const std::string v = req.get_param_value(key);
    T out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw Error(ErrorCode::MalformedCommand, std::string("query parameter '") + key + "' is not a number");
    return out;
}

std::string stream_line(const StreamEvent& e) {
    return ojson{{"seq", e.seq}, {"entry", e.entry}, {"event", event_to_json(e.event)}}.dump() + "\n";
}

} // namespace

std::pair<std::string, int> parse_bind_address(const std::string& text) {
    const auto colon = text.rfind(':');
    if (colon == std::string::npos || colon == 0)
        throw Error(ErrorCode::InvalidConfig, "bind address must be host:port, got '" + text + "'");
    int port = -1;
    const std::string p = text.substr(colon + 1);
    const auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), port);
    if (ec != std::errc() || ptr != p.data() + p.size() || port < 0 || port > 65535)
        throw Error(ErrorCode::InvalidConfig, "bad port in bind address '" + text + "'");
    return {text.substr(0, colon), port};
}

struct HttpFrontend::Impl {
    SessionService& svc;
    std::chrono::milliseconds heartbeat;
    httplib::Server server;
    std::atomic<bool> stopping{false};

    Impl(SessionService& s, std::chrono::milliseconds hb) : svc(s), heartbeat(hb) { routes(); }

    // Runs a handler, mapping library errors to JSON error responses.
    template <class F>
    auto guarded(F f) {
        return [f](const httplib::Request& req, httplib::Response& res) {
            try {
                f(req, res);
            } catch (const Error& e) {
                send_error(res, e.code(), e.what());
            } catch (const std::exception& e) {
                send_error(res, ErrorCode::RenderFailed, std::string("internal error: ") + e.what());
            }
        };
    }

    void routes() {
        server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
            send_json(res, 200, ojson{{"status", "ok"}});
        });

        server.Get("/sessions", guarded([this](const httplib::Request&, httplib::Response& res) {
            send_json(res, 200, ojson{{"sessions", svc.list_sessions()}});
        }));

        server.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
            const ojson body = parse_body(req, true);
            std::string id;
            if (body.contains("format_version")) {
                id = svc.import_session(req.body);
            } else {
                const CanvasConfig config = merge_config(CanvasConfig{}, body);
                id = svc.create_session(config, json_field<std::string>(body, "backend", "mock"),
                                        json_field<std::uint64_t>(body, "seed", 0));
            }
            send_json(res, 201, ojson{{"session_id", id}, {"state_digest", svc.state_digest(id)}});
        }));

        server.Get(std::string("/sessions/") + kId,
                   guarded([this](const httplib::Request& req, httplib::Response& res) {
                       const std::string file = svc.session_file(req.matches[1]);
                       res.set_header("X-State-Digest", sha256_hex(file));
                       res.set_content(file, "application/json");
                   }));

        server.Post(std::string("/sessions/") + kId + "/commands",
                    guarded([this](const httplib::Request& req, httplib::Response& res) {
                        const ojson body = parse_body(req, false);
                        if (!body.contains("command") || !body["command"].is_string())
                            throw Error(ErrorCode::MalformedCommand, "field 'command' must be a string");
                        std::optional<std::string> payload;
                        if (body.contains("payload") && !body["payload"].is_null()) {
                            if (!body["payload"].is_string())
                                throw Error(ErrorCode::MalformedCommand, "field 'payload' must be a string");
                            payload = body["payload"].get<std::string>();
                        }
                        std::optional<std::uint64_t> seq;
                        if (body.contains("seq") && !body["seq"].is_null()) {
                            if (!body["seq"].is_number_unsigned())
                                throw Error(ErrorCode::MalformedCommand, "field 'seq' must be a non-negative integer");
                            seq = body["seq"].get<std::uint64_t>();
                        }
                        const Command cmd = parse_command(body["command"].get<std::string>(), payload);
                        const SubmitResult r = svc.submit(req.matches[1], cmd, seq);
                        ojson events = ojson::array();
                        for (const auto& e : r.events) events.push_back(event_to_json(e));
                        send_json(res, r.deferred ? 202 : 200,
                                  ojson{{"entry", r.entry},
                                        {"events", std::move(events)},
                                        {"deferred", r.deferred},
                                        {"state_digest", r.state_digest}});
                    }));

        server.Get(std::string("/sessions/") + kId + "/events",
                   guarded([this](const httplib::Request& req, httplib::Response& res) { stream(req, res); }));

        server.Get(std::string("/sessions/") + kId + "/render",
                   guarded([this](const httplib::Request& req, httplib::Response& res) {
                       RenderRequest r;
                       if (req.has_param("kind")) {
                           const auto k = parse_render_kind(req.get_param_value("kind"));
                           if (!k) throw Error(ErrorCode::UnsupportedFormat, "kind must be snapshot, color or tactile");
                           r.kind = *k;
                       }
                       if (req.has_param("format")) {
                           const auto f = parse_export_format(req.get_param_value("format"));
                           if (!f) throw Error(ErrorCode::UnsupportedFormat, "format must be png or svg");
                           r.format = *f;
                       }
                       if (req.has_param("edges")) {
                           const auto a = parse_edge_algorithm(req.get_param_value("edges"));
                           if (!a) throw Error(ErrorCode::InvalidThresholds, "edges must be sobel or canny");
                           r.edges.algorithm = *a;
                       }
                       r.edges.threshold = query_number(req, "threshold", r.edges.threshold);
                       r.edges.canny_low = query_number(req, "low", r.edges.canny_low);
                       r.edges.canny_high = query_number(req, "high", r.edges.canny_high);
                       r.edges.gaussian_sigma = query_number(req, "sigma", r.edges.gaussian_sigma);
                       if (req.has_param("instruction")) r.instruction = req.get_param_value("instruction");
                       const RenderOutput out = svc.render(req.matches[1], r);
                       std::string warnings;
                       for (const auto& w : out.warnings) warnings += (warnings.empty() ? "" : "; ") + w;
                       if (!warnings.empty()) res.set_header("X-Render-Warnings", warnings);
                       res.set_content(std::string(out.bytes.begin(), out.bytes.end()), out.media_type);
                   }));

        server.Put(std::string("/sessions/") + kId + "/settings",
                   guarded([this](const httplib::Request& req, httplib::Response& res) {
                       const std::string id = req.matches[1];
                       const CanvasConfig merged =
                           merge_config(svc.document(id).state.config(), parse_body(req, false));
                       const CanvasConfig applied = svc.update_settings(id, merged);
                       send_json(res, 200, ojson{{"config", config_json(applied)},
                                                 {"state_digest", svc.state_digest(id)}});
                   }));
    }

    void stream(const httplib::Request& req, httplib::Response& res) {
        const std::string id = req.matches[1];
        const auto from = query_number<std::uint64_t>(req, "from", 0);
        const bool follow = !req.has_param("follow") || req.get_param_value("follow") != "0";
        svc.info(id);   // UnknownSession before the stream starts

        struct Cursor {
            std::uint64_t next;
            std::chrono::steady_clock::time_point last_write;
        };
        auto cursor = std::make_shared<Cursor>(Cursor{from, std::chrono::steady_clock::now()});
        res.set_chunked_content_provider(
            "application/x-ndjson", [this, id, follow, cursor](std::size_t, httplib::DataSink& sink) {
                if (!sink.is_writable()) return false;
                const auto wait = follow ? std::min(kPollSlice, heartbeat) : std::chrono::milliseconds(0);
                std::vector<StreamEvent> batch;
                try {
                    batch = svc.events(id, cursor->next, wait);
                } catch (const Error&) {
                    return false;
                }
                std::string out;
                for (const auto& e : batch) out += stream_line(e);
                if (!batch.empty()) cursor->next = batch.back().seq + 1;
                const auto now = std::chrono::steady_clock::now();
                if (out.empty() && follow && now - cursor->last_write >= heartbeat)
                    out = ojson{{"heartbeat", true}, {"next", cursor->next}}.dump() + "\n";
                if (!out.empty()) {
                    if (!sink.write(out.data(), out.size())) return false;
                    cursor->last_write = now;
                }
                if (!follow || stopping || svc.stopping()) sink.done();
                return true;
            });
    }
};

HttpFrontend::HttpFrontend(SessionService& service, std::chrono::milliseconds heartbeat)
    : impl_(std::make_unique<Impl>(service, heartbeat)) {}

HttpFrontend::~HttpFrontend() { stop(); }

int HttpFrontend::bind(const std::string& host, int port) {
    int bound = -1;
    if (port == 0) bound = impl_->server.bind_to_any_port(host);
    else if (impl_->server.bind_to_port(host, port)) bound = port;
    if (bound <= 0) throw Error(ErrorCode::InvalidConfig, "cannot bind " + host + ":" + std::to_string(port));
    return bound;
}

void HttpFrontend::listen() { impl_->server.listen_after_bind(); }

void HttpFrontend::stop() {
    impl_->stopping = true;
    if (impl_->server.is_running()) impl_->server.stop();
}

void HttpFrontend::wait_until_ready() { impl_->server.wait_until_ready(); }

} // namespace altcanvas
