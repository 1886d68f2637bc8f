#include <cstdlib>
#include <regex>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "altcanvas/genai.hpp"

namespace altcanvas {

using json = nlohmann::ordered_json;

RemoteConfig RemoteConfig::from_environment() {
    RemoteConfig c;
    auto env = [](const char* name) -> std::optional<std::string> {
        const char* v = std::getenv(name);
        if (!v || !*v) return std::nullopt;
        return std::string(v);
    };
    const auto url = env("ALTCANVAS_BACKEND_URL");
    if (!url) throw Error(ErrorCode::InvalidConfig, "ALTCANVAS_BACKEND_URL must be set for the remote backend");
    c.endpoint = *url;
    c.api_key = env("ALTCANVAS_API_KEY").value_or("");
    c.model = env("ALTCANVAS_MODEL").value_or(c.model);
    if (const auto t = env("ALTCANVAS_TIMEOUT_S")) {
        char* end = nullptr;
        const double seconds = std::strtod(t->c_str(), &end);
        if (end == t->c_str() || *end != '\0' || seconds <= 0)
            throw Error(ErrorCode::InvalidConfig, "ALTCANVAS_TIMEOUT_S must be a positive number");
        c.timeout = std::chrono::milliseconds(static_cast<long long>(seconds * 1000));
    }
    return c;
}

RemoteBackend::RemoteBackend(RemoteConfig config) : config_(std::move(config)) {
    static const std::regex url(R"(^https?://[^/]+(/.*)?$)");
    if (!std::regex_match(config_.endpoint, url))
        throw Error(ErrorCode::InvalidConfig, "backend URL must look like http(s)://host[:port][/prefix]");
    if (config_.retries < 0) throw Error(ErrorCode::InvalidConfig, "retries must be >= 0");
}

namespace {

GenResult failed(ErrorCode code, std::string message) {
    GenResult r;
    r.error = GenFailure{code, std::move(message)};
    return r;
}

ErrorCode code_from_wire(const std::string& code) {
    if (code == "content_rejected") return ErrorCode::ContentRejected;
    if (code == "timeout") return ErrorCode::Timeout;
    return ErrorCode::BackendUnavailable;
}

GenResult parse_response(const std::string& body) {
    json doc;
    try {
        doc = json::parse(body);
    } catch (const json::exception& e) {
        return failed(ErrorCode::BackendUnavailable, std::string("unparseable response: ") + e.what());
    }
    if (!doc.is_object()) return failed(ErrorCode::BackendUnavailable, "response is not a JSON object");
    GenResult r;
    try {
        if (doc.contains("error") && !doc["error"].is_null()) {
            const auto& e = doc["error"];
            return failed(code_from_wire(e.value("code", "")), e.value("message", "remote error"));
        }
        if (doc.contains("image") && doc["image"].is_string())
            r.image = base64_decode(doc["image"].get<std::string>());
        if (doc.contains("description") && doc["description"].is_string())
            r.description = doc["description"].get<std::string>();
    } catch (const std::exception& e) {
        return failed(ErrorCode::BackendUnavailable, std::string("malformed response: ") + e.what());
    }
    if (!r.image && !r.description) return failed(ErrorCode::BackendUnavailable, "response carried no result");
    return r;
}

json base_body(const RemoteConfig& config, const GenRequest& request) {
    json body;
    body["model"] = config.model;
    body["prompt"] = request.prompt;
    if (request.image) body["image"] = base64_encode(*request.image);
    return body;
}

} // namespace

GenResult RemoteBackend::post(std::string_view operation, const std::string& body) {
    static const std::regex split(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    std::regex_match(config_.endpoint, m, split);
    std::string prefix = m[2].str();
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    const std::string path = prefix + "/v1/" + std::string(operation);

    httplib::Client client(m[1].str());
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
    client.set_connection_timeout(static_cast<time_t>(secs.count()), static_cast<time_t>(usecs.count()));
    client.set_read_timeout(static_cast<time_t>(secs.count()), static_cast<time_t>(usecs.count()));
    client.set_write_timeout(static_cast<time_t>(secs.count()), static_cast<time_t>(usecs.count()));
    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

    GenResult last = failed(ErrorCode::BackendUnavailable, "no attempt made");
    for (int attempt = 0; attempt <= config_.retries; ++attempt) {
        if (attempt > 0) {
            const auto idx = static_cast<std::size_t>(attempt - 1);
            const auto delay = config_.backoff.empty() ? std::chrono::milliseconds(0)
                                                       : config_.backoff[std::min(idx, config_.backoff.size() - 1)];
            std::this_thread::sleep_for(delay);
        }
        const auto started = std::chrono::steady_clock::now();
        auto res = client.Post(path, headers, body, "application/json");
        if (!res) {
            const auto elapsed = std::chrono::steady_clock::now() - started;
            if (res.error() == httplib::Error::ConnectionTimeout ||
                (res.error() == httplib::Error::Read && elapsed >= config_.timeout))
                return failed(ErrorCode::Timeout, std::string(operation) + " timed out");
            last = failed(ErrorCode::BackendUnavailable,
                          std::string(operation) + ": " + httplib::to_string(res.error()));
            continue;
        }
        if (res->status == 200) return parse_response(res->body);
        if (res->status == 400 || res->status == 422) {
            GenResult r = parse_response(res->body);
            if (r.error && r.error->code != ErrorCode::BackendUnavailable) return r;
            return failed(ErrorCode::ContentRejected, std::string(operation) + ": request rejected (HTTP " +
                                                          std::to_string(res->status) + ")");
        }
        last = failed(ErrorCode::BackendUnavailable,
                      std::string(operation) + ": HTTP " + std::to_string(res->status));
        if (res->status != 429 && res->status < 500) return last;
    }
    return last;
}

GenResult RemoteBackend::generate_image(const GenRequest& request) {
    json body = base_body(config_, request);
    body["n"] = 1;
    body["style"] = "natural";
    body["quality"] = "hd";
    body["image_style"] = std::string(to_string(request.style));
    return post("generate_image", body.dump());
}

GenResult RemoteBackend::remove_background(const GenRequest& request) {
    return post("remove_background", base_body(config_, request).dump());
}

GenResult RemoteBackend::describe_image(const GenRequest& request) {
    return post("describe_image", base_body(config_, request).dump());
}

GenResult RemoteBackend::describe_canvas(const GenRequest& request) {
    return post("describe_canvas", base_body(config_, request).dump());
}

GenResult RemoteBackend::answer_question(const GenRequest& request) {
    json body = base_body(config_, request);
    body["question"] = request.question.value_or("");
    return post("answer_question", body.dump());
}

GenResult RemoteBackend::render_background(const GenRequest& request) {
    return post("render_background", base_body(config_, request).dump());
}

} // namespace altcanvas
