#include "altcanvas/session_file.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "altcanvas/codec.hpp"

namespace altcanvas {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void corrupt(const std::string& path, const std::string& what) {
    throw Error(ErrorCode::CorruptFile, "session file field '" + path + "': " + what);
}

// Typed field access with a path for diagnostics.
class Field {
public:
    Field(const ojson& j, std::string path) : j_(j), path_(std::move(path)) {}

    const std::string& path() const { return path_; }
    const ojson& raw() const { return j_; }

    Field operator[](const char* key) const {
        if (!j_.is_object()) corrupt(path_, "expected an object");
        const auto it = j_.find(key);
        const std::string sub = path_.empty() ? key : path_ + "." + key;
        if (it == j_.end()) corrupt(sub, "missing");
        return Field(*it, sub);
    }
    Field at(std::size_t i) const { return Field(j_[i], path_ + "[" + std::to_string(i) + "]"); }

    bool is_null() const { return j_.is_null(); }

    std::size_t array_size() const {
        if (!j_.is_array()) corrupt(path_, "expected an array");
        return j_.size();
    }
    std::int64_t integer() const {
        if (!j_.is_number_integer()) corrupt(path_, "expected an integer");
        return j_.get<std::int64_t>();
    }
    int int32() const {
        const auto v = integer();
        if (v < INT32_MIN || v > INT32_MAX) corrupt(path_, "integer out of range");
        return static_cast<int>(v);
    }
    std::uint64_t unsigned_integer() const {
        if (!j_.is_number_unsigned()) corrupt(path_, "expected a non-negative integer");
        return j_.get<std::uint64_t>();
    }
    double number() const {
        if (!j_.is_number()) corrupt(path_, "expected a number");
        return j_.get<double>();
    }
    std::string string() const {
        if (!j_.is_string()) corrupt(path_, "expected a string");
        return j_.get<std::string>();
    }

private:
    const ojson& j_;
    std::string path_;
};

// Re-throws command/event decoding errors as CorruptFile at the right path.
template <class F>
auto decode_at(const Field& f, F&& decode) {
    try {
        return decode(f.raw());
    } catch (const Error& e) {
        corrupt(f.path(), e.what());
    }
}

ojson tile_json(TileCoord c) { return ojson{{"row", c.row}, {"col", c.col}}; }
TileCoord tile_from(const Field& f) { return {f["row"].int32(), f["col"].int32()}; }

ojson id_or_null(const std::optional<ObjectId>& id) { return id ? ojson(id->value) : ojson(nullptr); }
std::optional<ObjectId> id_from(const Field& f) {
    if (f.is_null()) return std::nullopt;
    return ObjectId{f.unsigned_integer()};
}

ojson config_json(const CanvasConfig& c) {
    return ojson{{"width", c.width},
                 {"height", c.height},
                 {"image_style", std::string(to_string(c.image_style))},
                 {"speech_rate", c.speech_rate}};
}

CanvasConfig config_from(const Field& f) {
    CanvasConfig c;
    c.width = f["width"].int32();
    c.height = f["height"].int32();
    const auto style = parse_image_style(f["image_style"].string());
    if (!style) corrupt(f["image_style"].path(), "expected tactile or color");
    c.image_style = *style;
    c.speech_rate = f["speech_rate"].int32();
    try {
        c.validate();
    } catch (const Error& e) {
        corrupt(f.path(), e.what());
    }
    return c;
}

ojson object_json(const SceneObject& o) {
    return ojson{{"id", o.id.value},
                 {"name", o.name},
                 {"center", {{"x", o.center.x}, {"y", o.center.y}}},
                 {"size",
                  {{"width", o.size.width},
                   {"height", o.size.height},
                   {"aspect_width", o.size.aspect_width},
                   {"aspect_height", o.size.aspect_height}}},
                 {"z", o.z},
                 {"prompt_text", o.prompt_text},
                 {"description", o.description},
                 {"image_ref", o.image_ref ? ojson(*o.image_ref) : ojson(nullptr)}};
}

SceneObject object_from(const Field& f) {
    SceneObject o;
    o.id = ObjectId{f["id"].unsigned_integer()};
    o.name = f["name"].string();
    o.center = {f["center"]["x"].int32(), f["center"]["y"].int32()};
    const Field size = f["size"];
    o.size = {size["width"].int32(), size["height"].int32(), size["aspect_width"].int32(),
              size["aspect_height"].int32()};
    if (o.size.width < kMinObjectDimension || o.size.height < kMinObjectDimension)
        corrupt(size.path(), "object smaller than the minimum size");
    if (o.size.aspect_width <= 0 || o.size.aspect_height <= 0) corrupt(size.path(), "aspect must be positive");
    o.z = f["z"].int32();
    o.prompt_text = f["prompt_text"].string();
    o.description = f["description"].string();
    if (!f["image_ref"].is_null()) o.image_ref = f["image_ref"].string();
    return o;
}

ojson mode_json(const Mode& mode) {
    ojson j{{"name", std::string(mode_name(mode))}};
    std::visit(overloaded{
                   [](const NavigateMode&) {},
                   [&](const AwaitTranscriptMode& m) { j["purpose"] = std::string(to_string(m.purpose)); },
                   [&](const ConfirmTranscriptMode& m) {
                       j["purpose"] = std::string(to_string(m.purpose));
                       j["text"] = m.text;
                   },
                   [&](const AwaitBackendMode& m) {
                       j["purpose"] = std::string(to_string(m.purpose));
                       j["request"] = m.request;
                   },
                   [&](const LocationEditMode& m) { j["object"] = m.id.value; },
                   [&](const SizeEditMode& m) { j["object"] = m.id.value; },
                   [&](const HelpListMode& m) { j["index"] = m.index; },
               },
               mode);
    return j;
}

Purpose purpose_from(const Field& f) {
    const auto p = parse_purpose(f.string());
    if (!p) corrupt(f.path(), "unknown purpose");
    return *p;
}

Mode mode_from(const Field& f) {
    const std::string name = f["name"].string();
    if (name == "navigate") return NavigateMode{};
    if (name == "await_transcript") return AwaitTranscriptMode{purpose_from(f["purpose"])};
    if (name == "confirm_transcript") return ConfirmTranscriptMode{f["text"].string(), purpose_from(f["purpose"])};
    if (name == "await_backend") return AwaitBackendMode{purpose_from(f["purpose"]), f["request"].unsigned_integer()};
    if (name == "location_edit") return LocationEditMode{ObjectId{f["object"].unsigned_integer()}};
    if (name == "size_edit") return SizeEditMode{ObjectId{f["object"].unsigned_integer()}};
    if (name == "help_list") {
        const int index = f["index"].int32();
        if (index < 0 || index > static_cast<int>(kHelpEntries.size())) corrupt(f["index"].path(), "out of range");
        return HelpListMode{index};
    }
    corrupt(f["name"].path(), "unknown mode '" + name + "'");
}

ojson pending_json(const std::optional<PendingAction>& p) {
    if (!p) return nullptr;
    return ojson{{"purpose", std::string(to_string(p->purpose))},
                 {"tile", tile_json(p->tile)},
                 {"target", id_or_null(p->target)},
                 {"transcript", p->transcript}};
}

std::optional<PendingAction> pending_from(const Field& f) {
    if (f.is_null()) return std::nullopt;
    return PendingAction{purpose_from(f["purpose"]), tile_from(f["tile"]), id_from(f["target"]),
                         f["transcript"].string()};
}

// Structural checks beyond field types.
void check_consistency(const SessionState& s) {
    std::set<ObjectId> ids;
    std::optional<int> last_z;
    for (const auto& o : s.scene.objects()) {
        if (!ids.insert(o.id).second) corrupt("objects", "duplicate object id " + std::to_string(o.id.value));
        if (last_z && o.z <= *last_z) corrupt("objects", "z values must strictly increase");
        last_z = o.z;
        if (!within_bounds(o, s.config()))
            corrupt("objects", "object " + std::to_string(o.id.value) + " lies outside the canvas");
        if (o.id.value >= s.next_object_id) corrupt("next_object_id", "must exceed every object id");
    }
    if (const std::string why = check_invariants(s.grid, s.scene); !why.empty()) corrupt("tiles", why);
    const auto check_id = [&](ObjectId id) {
        if (!ids.count(id)) corrupt("mode.object", "unknown object " + std::to_string(id.value));
    };
    if (const auto* m = std::get_if<LocationEditMode>(&s.mode)) check_id(m->id);
    if (const auto* m = std::get_if<SizeEditMode>(&s.mode)) check_id(m->id);
    const bool needs_pending = std::holds_alternative<AwaitTranscriptMode>(s.mode) ||
                               std::holds_alternative<ConfirmTranscriptMode>(s.mode) ||
                               std::holds_alternative<AwaitBackendMode>(s.mode);
    if (needs_pending != s.pending.has_value())
        corrupt("pending", needs_pending ? "missing for the current mode" : "present outside a transcript mode");
}

} // namespace

ojson event_to_json(const FeedbackEvent& event) {
    return std::visit(overloaded{
                          [](const Speech& s) { return ojson{{"type", "speech"}, {"text", s.text}, {"rate", s.rate}}; },
                          [](const Earcon& e) {
                              ojson j{{"type", "earcon"}, {"kind", std::string(to_string(e.kind))}, {"pan", e.pan}};
                              if (e.frequency_hz) j["frequency_hz"] = *e.frequency_hz;
                              return j;
                          },
                          [](const StopSpeech&) { return ojson{{"type", "stop_speech"}}; },
                      },
                      event);
}

FeedbackEvent event_from_json(const ojson& j) {
    const Field f(j, "event");
    const std::string type = f["type"].string();
    if (type == "speech") return Speech{f["text"].string(), f["rate"].int32()};
    if (type == "stop_speech") return StopSpeech{};
    if (type == "earcon") {
        const auto kind = parse_earcon_kind(f["kind"].string());
        if (!kind) corrupt("event.kind", "unknown earcon");
        Earcon e{*kind, f["pan"].number(), std::nullopt};
        if (j.contains("frequency_hz")) e.frequency_hz = f["frequency_hz"].number();
        return e;
    }
    corrupt("event.type", "unknown event type '" + type + "'");
}

ojson command_to_json(const Command& cmd) {
    ojson j{{"name", command_name(cmd)}};
    std::visit(overloaded{
                   [](const KeyPress&) {},
                   [&](const TranscriptArrived& t) { j["text"] = t.text; },
                   [&](const GenerationArrived& g) {
                       j["request"] = g.request;
                       j["content"] = ojson{{"name", g.content.name},
                                            {"main_object", g.content.main_object},
                                            {"prompt", g.content.prompt},
                                            {"image_ref", g.content.image_ref},
                                            {"description", g.content.description}};
                   },
                   [&](const DescriptionArrived& d) {
                       j["request"] = d.request;
                       j["text"] = d.text;
                   },
                   [&](const BackendFailed& b) {
                       j["request"] = b.request;
                       j["code"] = std::string(to_string(b.code));
                       j["message"] = b.message;
                   },
               },
               cmd);
    return j;
}

Command command_from_json(const ojson& j) {
    try {
        const Field f(j, "command");
        const std::string name = f["name"].string();
        if (name == "transcript") return TranscriptArrived{f["text"].string()};
        if (name == "generation-arrived") {
            const Field c = f["content"];
            return GenerationArrived{f["request"].unsigned_integer(),
                                     {c["name"].string(), c["main_object"].string(), c["prompt"].string(),
                                      c["image_ref"].string(), c["description"].string()}};
        }
        if (name == "description-arrived") return DescriptionArrived{f["request"].unsigned_integer(), f["text"].string()};
        if (name == "backend-failed") {
            const auto code = parse_error_code(f["code"].string());
            if (!code) corrupt("command.code", "unknown error code");
            return BackendFailed{f["request"].unsigned_integer(), *code, f["message"].string()};
        }
        return parse_command(name);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::MalformedCommand) throw;
        throw Error(ErrorCode::MalformedCommand, e.what());
    }
}

ojson log_entry_to_json(const LogEntry& entry) {
    ojson events = ojson::array();
    for (const auto& e : entry.events) events.push_back(event_to_json(e));
    return ojson{{"seq", entry.seq}, {"command", command_to_json(entry.command)}, {"events", std::move(events)}};
}

std::string serialize_session(const SessionDocument& doc) {
    const SessionState& s = doc.state;
    ojson objects = ojson::array();
    for (const auto& o : s.scene.objects()) objects.push_back(object_json(o));
    ojson tiles = ojson::array();
    for (const auto& [coord, occupant] : s.grid.tiles()) {
        ojson t = tile_json(coord);
        t["object"] = id_or_null(occupant);
        tiles.push_back(std::move(t));
    }
    ojson log = ojson::array();
    for (const auto& entry : s.event_log) log.push_back(log_entry_to_json(entry));

    const ojson j{{"format_version", kFormatVersion},
                  {"backend", doc.backend},
                  {"seed", s.seed},
                  {"config", config_json(s.config())},
                  {"next_object_id", s.next_object_id},
                  {"next_request", s.next_request},
                  {"objects", std::move(objects)},
                  {"tiles", std::move(tiles)},
                  {"cursor", tile_json(s.grid.cursor())},
                  {"mode", mode_json(s.mode)},
                  {"pending", pending_json(s.pending)},
                  {"event_log", std::move(log)}};
    return j.dump(2) + "\n";
}

SessionDocument parse_session(std::string_view text) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const ojson::parse_error& e) {
        throw Error(ErrorCode::CorruptFile,
                    "session file is not valid JSON at byte offset " + std::to_string(e.byte) + ": " + e.what());
    }
    const Field root(j, "");
    if (!j.is_object()) corrupt("<root>", "expected an object");
    const Field version = root["format_version"];
    if (version.integer() != kFormatVersion)
        corrupt("format_version", "unsupported version " + std::to_string(version.integer()) + " (expected " +
                                      std::to_string(kFormatVersion) + ")");

    SessionDocument doc;
    doc.backend = root["backend"].string();
    if (doc.backend != "mock" && doc.backend != "remote") corrupt("backend", "expected mock or remote");
    SessionState& s = doc.state;
    s.seed = root["seed"].unsigned_integer();
    s.scene = Scene(config_from(root["config"]));
    s.next_object_id = root["next_object_id"].unsigned_integer();
    s.next_request = root["next_request"].unsigned_integer();

    const Field objects = root["objects"];
    std::vector<SceneObject> objs;
    for (std::size_t i = 0; i < objects.array_size(); ++i) objs.push_back(object_from(objects.at(i)));
    s.scene.restore(std::move(objs));

    const Field tiles = root["tiles"];
    std::map<TileCoord, std::optional<ObjectId>> tile_map;
    for (std::size_t i = 0; i < tiles.array_size(); ++i) {
        const Field t = tiles.at(i);
        if (!tile_map.emplace(tile_from(t), id_from(t["object"])).second) corrupt(t.path(), "duplicate tile");
    }
    const TileCoord cursor = tile_from(root["cursor"]);
    if (!tile_map.count(cursor)) corrupt("cursor", "not on an existing tile");
    s.grid = TileGrid::restore(std::move(tile_map), cursor);
    s.mode = mode_from(root["mode"]);
    s.pending = pending_from(root["pending"]);

    const Field log = root["event_log"];
    for (std::size_t i = 0; i < log.array_size(); ++i) {
        const Field e = log.at(i);
        LogEntry entry;
        entry.seq = e["seq"].unsigned_integer();
        if (entry.seq != i) corrupt(e["seq"].path(), "sequence numbers must be dense from 0");
        entry.command = decode_at(e["command"], command_from_json);
        const Field events = e["events"];
        for (std::size_t k = 0; k < events.array_size(); ++k)
            entry.events.push_back(decode_at(events.at(k), event_from_json));
        s.event_log.push_back(std::move(entry));
    }
    check_consistency(s);
    return doc;
}

std::string state_digest(const SessionDocument& doc) { return sha256_hex(serialize_session(doc)); }

void save_session_file(const std::filesystem::path& path, const SessionDocument& doc) {
    const std::string text = serialize_session(doc);
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write " + tmp.string());
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

SessionDocument load_session_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::CorruptFile, "cannot open session file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_session(ss.str());
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.what());
    }
}

} // namespace altcanvas
