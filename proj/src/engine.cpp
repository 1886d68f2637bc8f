#include "altcanvas/engine.hpp"

#include <algorithm>
#include <array>

#include "altcanvas/render.hpp"

namespace altcanvas {

// ---------------------------------------------------------------- commands

namespace {

struct KeyName {
    Key key;
    std::string_view name;
};

constexpr std::array<KeyName, 11> kPlainKeys{{
    {Key::Enter, "enter"},
    {Key::Escape, "escape"},
    {Key::Shift, "shift"},
    {Key::ShiftG, "shift-g"},
    {Key::ShiftI, "shift-i"},
    {Key::ShiftR, "shift-r"},
    {Key::ShiftC, "shift-c"},
    {Key::ShiftL, "shift-l"},
    {Key::ShiftS, "shift-s"},
    {Key::ShiftK, "shift-k"},
    {Key::ShiftX, "shift-x"},
}};

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

} // namespace

std::string command_name(const Command& cmd) {
    return std::visit(overloaded{
                          [](const KeyPress& k) -> std::string {
                              if (k.key == Key::Arrow) return "arrow-" + std::string(to_string(*k.direction));
                              if (k.key == Key::ShiftArrow)
                                  return "shift-arrow-" + std::string(to_string(*k.direction));
                              for (const auto& kn : kPlainKeys)
                                  if (kn.key == k.key) return std::string(kn.name);
                              return "unknown";
                          },
                          [](const TranscriptArrived&) -> std::string { return "transcript"; },
                          [](const GenerationArrived&) -> std::string { return "generation-arrived"; },
                          [](const DescriptionArrived&) -> std::string { return "description-arrived"; },
                          [](const BackendFailed&) -> std::string { return "backend-failed"; },
                      },
                      cmd);
}

bool is_user_command(const Command& cmd) {
    return std::holds_alternative<KeyPress>(cmd) || std::holds_alternative<TranscriptArrived>(cmd);
}

Command parse_command(std::string_view name, const std::optional<std::string>& payload) {
    auto malformed = [&](const std::string& why) {
        return Error(ErrorCode::MalformedCommand, "command '" + std::string(name) + "': " + why);
    };
    if (name == "transcript") {
        if (!payload) throw malformed("a transcript needs a payload");
        return TranscriptArrived{*payload};
    }
    if (payload) throw malformed("this command takes no payload");
    for (const auto& kn : kPlainKeys)
        if (kn.name == name) return KeyPress{kn.key, std::nullopt};
    for (const auto& [prefix, key] : {std::pair<std::string_view, Key>{"shift-arrow-", Key::ShiftArrow},
                                      std::pair<std::string_view, Key>{"arrow-", Key::Arrow}}) {
        if (name.substr(0, prefix.size()) == prefix) {
            const auto d = parse_direction(name.substr(prefix.size()));
            if (!d) throw malformed("unknown direction");
            return KeyPress{key, d};
        }
    }
    throw malformed("unknown command");
}

// ------------------------------------------------------------------- modes

std::string_view to_string(Purpose p) {
    switch (p) {
    case Purpose::Generate: return "generate";
    case Purpose::Chat: return "chat";
    case Purpose::GlobalDescribe: return "global_describe";
    }
    return "generate";
}

std::optional<Purpose> parse_purpose(std::string_view text) {
    for (auto p : {Purpose::Generate, Purpose::Chat, Purpose::GlobalDescribe})
        if (to_string(p) == text) return p;
    return std::nullopt;
}

std::string_view mode_name(const Mode& mode) {
    return std::visit(overloaded{
                          [](const NavigateMode&) { return std::string_view("navigate"); },
                          [](const AwaitTranscriptMode&) { return std::string_view("await_transcript"); },
                          [](const ConfirmTranscriptMode&) { return std::string_view("confirm_transcript"); },
                          [](const AwaitBackendMode&) { return std::string_view("await_backend"); },
                          [](const LocationEditMode&) { return std::string_view("location_edit"); },
                          [](const SizeEditMode&) { return std::string_view("size_edit"); },
                          [](const HelpListMode&) { return std::string_view("help_list"); },
                      },
                      mode);
}

const std::vector<std::string> kHelpEntries{
    "SHIFT + G Global Canvas Description: Hear global description about the canvas",
    "SHIFT + I Local Image Description: Hear local description about the image on tile",
    "SHIFT + R Radar Scan for Surrounding Objects: Hear the name of the object and numerical distance",
    "SHIFT + C Image Chat: Ask a question about the image",
    "SHIFT + L Location Edit: Edit the location of an image",
    "SHIFT + S Size Edit: Increase / Decrease the size of an image",
    "SHIFT + Arrow Key Push Image: Push image tiles to create tile space",
    "SHIFT + X Delete Image: Delete an Image on the tile",
    "Arrow Keys Tile Navigation, Location/Size Edit: Navigate through different spaces on tiles",
    "ESC Quit / Stop: Exit an editing mode, stop model speech",
    "SHIFT + K Keyboard Commands: Hear this list of keyboard commands",
};

SessionState new_session(const CanvasConfig& config, std::uint64_t seed) {
    config.validate();
    SessionState s;
    s.scene = Scene(config);
    s.seed = seed;
    return s;
}

// ------------------------------------------------------------------ handle

namespace {

std::string push_word(Direction d) {
    switch (d) {
    case Direction::Up: return "top";
    case Direction::Down: return "bottom";
    case Direction::Left: return "left";
    case Direction::Right: return "right";
    }
    return "top";
}

std::string failure_reason(ErrorCode code) {
    switch (code) {
    case ErrorCode::ContentRejected: return "The request was rejected by the service.";
    case ErrorCode::Timeout: return "The service took too long to answer.";
    case ErrorCode::EmptyTranscript: return "The request was empty.";
    default: return "The service is unavailable.";
    }
}

std::string join_names(const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i > 0) out += i + 1 == names.size() ? " and " : ", ";
        out += names[i];
    }
    return out;
}

// Keeps the box inside the canvas by translating the center.
Point clamp_center(Point center, const Size2D& size, const CanvasConfig& config) {
    SceneObject probe;
    probe.center = center;
    probe.size = size;
    const Box b = bounding_box(probe);
    if (b.top_left.x < 0) center.x -= b.top_left.x;
    else if (b.bottom_right.x > config.width) center.x -= b.bottom_right.x - config.width;
    if (b.top_left.y < 0) center.y -= b.top_left.y;
    else if (b.bottom_right.y > config.height) center.y -= b.bottom_right.y - config.height;
    return center;
}

class Machine {
public:
    explicit Machine(SessionState& s) : s_(s) {}

    HandleResult run(const Command& cmd) {
        std::visit([&](const auto& mode) { on(mode, cmd); }, Mode(s_.mode));
        return std::move(out_);
    }

private:
    SessionState& s_;
    HandleResult out_;

    void say(std::string text) { out_.events.emplace_back(Speech{std::move(text), s_.config().speech_rate}); }
    void emit(FeedbackEvent e) { out_.events.push_back(std::move(e)); }
    void not_available() { say(std::string(kNotAvailable)); }
    void beep() { emit(Earcon{EarconKind::Beep, 0.0, std::nullopt}); }

    void to_navigate() {
        s_.mode = NavigateMode{};
        s_.pending.reset();
    }

    void cancel() {
        emit(StopSpeech{});
        say("Cancelled");
        to_navigate();
    }

    std::optional<ObjectId> focused() const { return s_.grid.occupant(s_.grid.cursor()); }

    static const KeyPress* key_of(const Command& cmd) { return std::get_if<KeyPress>(&cmd); }
    static bool is_backend_result(const Command& cmd) { return !is_user_command(cmd); }

    // Stale backend results and bare SHIFT are absorbed without feedback.
    bool absorbed_silently(const Command& cmd) const {
        if (is_backend_result(cmd)) return true;
        const KeyPress* k = key_of(cmd);
        return k && k->key == Key::Shift;
    }

    // -- Navigate
    void on(const NavigateMode&, const Command& cmd) {
        if (absorbed_silently(cmd)) return;
        const KeyPress* k = key_of(cmd);
        if (!k) return not_available();
        const auto occupant = focused();
        switch (k->key) {
        case Key::Arrow: return navigate(*k->direction);
        case Key::Enter:
            s_.pending = PendingAction{Purpose::Generate, s_.grid.cursor(), occupant, ""};
            s_.mode = AwaitTranscriptMode{Purpose::Generate};
            return beep();
        case Key::ShiftG: {
            const auto request = s_.next_request++;
            s_.pending = PendingAction{Purpose::GlobalDescribe, s_.grid.cursor(), std::nullopt, ""};
            s_.mode = AwaitBackendMode{Purpose::GlobalDescribe, request};
            say("Describing the canvas, please wait");
            out_.dispatch = Dispatch{request, Purpose::GlobalDescribe, "", std::nullopt};
            return;
        }
        case Key::ShiftK:
            s_.mode = HelpListMode{0};
            return say("Keyboard commands. Press the down arrow to hear each command.");
        case Key::Escape: return emit(StopSpeech{});
        default: break;
        }
        if (!occupant) return not_available();
        const ObjectId id = *occupant;
        switch (k->key) {
        case Key::ShiftI: return say(local_description(s_.scene.at(id)));
        case Key::ShiftR: return say(radar_scan(s_.scene, id));
        case Key::ShiftC:
            s_.pending = PendingAction{Purpose::Chat, s_.grid.cursor(), id, ""};
            s_.mode = AwaitTranscriptMode{Purpose::Chat};
            say("Ask a question about the image and I will answer.");
            return beep();
        case Key::ShiftL:
            s_.mode = LocationEditMode{id};
            return say("Location edit mode");
        case Key::ShiftS:
            s_.mode = SizeEditMode{id};
            return say("Size edit mode");
        case Key::ShiftArrow:
            try {
                push(s_.grid, s_.scene, s_.grid.cursor(), *k->direction);
                return say("Pushed image to the " + push_word(*k->direction));
            } catch (const Error& e) {
                if (e.code() != ErrorCode::PushBlockedAtCanvasEdge) throw;
                emit(thump(*k->direction));
                return say("Cannot push, an image would leave the canvas");
            }
        case Key::ShiftX:
            delete_at(s_.grid, s_.scene, s_.grid.cursor());
            return say("Deleted image on the tile");
        default: return not_available();
        }
    }

    void navigate(Direction d) {
        const NavOutcome nav = s_.grid.navigate(d);
        std::visit(overloaded{
                       [&](const MovedToEmpty&) { emit(directional_earcon(d)); },
                       [&](const MovedToObject& m) { say(s_.scene.at(m.id).name); },
                       [&](const EdgeBump&) { emit(thump(d)); },
                   },
                   nav);
    }

    // -- AwaitTranscript / ConfirmTranscript
    void on(const AwaitTranscriptMode& m, const Command& cmd) { transcript_step(m.purpose, cmd, false); }
    void on(const ConfirmTranscriptMode& m, const Command& cmd) { transcript_step(m.purpose, cmd, true); }

    void transcript_step(Purpose purpose, const Command& cmd, bool confirming) {
        if (absorbed_silently(cmd)) return;
        if (const auto* t = std::get_if<TranscriptArrived>(&cmd)) {
            const std::string text = trim(t->text);
            if (text.empty()) return say("I did not hear anything. Please try again.");
            s_.pending->transcript = text;
            s_.mode = ConfirmTranscriptMode{text, purpose};
            return say("Detected: " + text + ". Press Enter to confirm or the Escape key to cancel.");
        }
        const KeyPress* k = key_of(cmd);
        if (k->key == Key::Escape) return cancel();
        if (k->key == Key::Enter && confirming) {
            const auto request = s_.next_request++;
            s_.mode = AwaitBackendMode{purpose, request};
            say(purpose == Purpose::Chat ? "Answering, please wait" : std::string(kPleaseWait));
            out_.dispatch = Dispatch{request, purpose, s_.pending->transcript, s_.pending->target};
            return;
        }
        not_available();
    }

    // -- AwaitBackend
    void on(const AwaitBackendMode& m, const Command& cmd) {
        if (const KeyPress* k = key_of(cmd)) {
            if (k->key == Key::Escape) return cancel();
            if (k->key == Key::Shift) return;
            return say(std::string(kPleaseWait));
        }
        if (std::holds_alternative<TranscriptArrived>(cmd)) return say(std::string(kPleaseWait));

        if (const auto* g = std::get_if<GenerationArrived>(&cmd)) {
            if (g->request != m.request || m.purpose != Purpose::Generate) return;
            return place_generated(g->content);
        }
        if (const auto* d = std::get_if<DescriptionArrived>(&cmd)) {
            if (d->request != m.request || m.purpose == Purpose::Generate) return;
            say(d->text);
            return to_navigate();
        }
        const auto& f = std::get<BackendFailed>(cmd);
        if (f.request != m.request) return;
        switch (m.purpose) {
        case Purpose::Generate: say("Image generation failed. " + failure_reason(f.code)); break;
        case Purpose::GlobalDescribe:
            say("Offline description: " + fallback_global_description(s_.scene));
            break;
        case Purpose::Chat: say("Could not answer the question. " + failure_reason(f.code)); break;
        }
        to_navigate();
    }

    void place_generated(const GeneratedContent& content) {
        const PendingAction pending = *s_.pending;
        if (pending.target && s_.scene.find(*pending.target)) {
            SceneObject& obj = s_.scene.at(*pending.target);
            obj.name = content.name;
            obj.prompt_text = pending.transcript;
            obj.description = content.description;
            obj.image_ref = content.image_ref;
            say(generation_announcement(obj));
            return to_navigate();
        }

        SceneObject obj;
        obj.id = ObjectId{s_.next_object_id++};
        obj.name = content.name;
        obj.size = Size2D::with_aspect(kDefaultObjectSize, kDefaultObjectSize);
        obj.prompt_text = pending.transcript;
        obj.description = content.description;
        obj.image_ref = content.image_ref;

        if (s_.scene.empty()) {
            const SceneObject& placed = place_first(s_.scene, obj);
            s_.grid.occupy(pending.tile, placed.id);
            say(generation_announcement(placed));
            return to_navigate();
        }

        // Nearest occupied tile by Chebyshev distance, ties by (row, col).
        std::optional<std::pair<TileCoord, ObjectId>> ref;
        int best = 0;
        for (const auto& [coord, occupant] : s_.grid.tiles()) {
            if (!occupant) continue;
            const int d = chebyshev(coord, pending.tile);
            if (!ref || d < best) ref = {coord, *occupant}, best = d;
        }
        const Point anchor = s_.scene.at(ref->second).center;
        obj.center = clamp_center({anchor.x + (pending.tile.col - ref->first.col) * kPushStep,
                                   anchor.y + (pending.tile.row - ref->first.row) * kPushStep},
                                  obj.size, s_.config());
        const SceneObject& placed = s_.scene.add(obj);
        s_.grid.occupy(pending.tile, placed.id);
        say(generation_announcement(placed));
        to_navigate();
    }

    // -- LocationEdit
    void on(const LocationEditMode& m, const Command& cmd) {
        if (is_backend_result(cmd)) return;
        const KeyPress* k = key_of(cmd);
        if (!k) return not_available();
        switch (k->key) {
        case Key::Arrow: {
            const Direction d = *k->direction;
            const MoveOutcome outcome = move_object(s_.scene, m.id, d);
            std::visit(overloaded{
                           [&](const Moved&) { emit(directional_earcon(d)); },
                           [&](const MovedWithOverlap& o) {
                               emit(directional_earcon(d));
                               emit(Earcon{EarconKind::Overlap, 0.0, std::nullopt});
                               std::vector<std::string> names;
                               for (const ObjectId other : o.overlapped) names.push_back(s_.scene.at(other).name);
                               say("Overlapping with " + join_names(names));
                           },
                           [&](const BlockedAtEdge&) { emit(thump(d)); },
                       },
                       outcome);
            return;
        }
        case Key::Shift: {
            const Point c = s_.scene.at(m.id).center;
            return say("Current location " + std::to_string(c.x) + " by " + std::to_string(c.y));
        }
        case Key::Escape: {
            emit(StopSpeech{});
            s_.grid = relayout_from_scene(s_.scene, s_.grid.cursor());
            if (const auto tile = s_.grid.find(m.id)) s_.grid.set_cursor(*tile);
            say("Exited location edit mode");
            return to_navigate();
        }
        default: return not_available();
        }
    }

    // -- SizeEdit
    void on(const SizeEditMode& m, const Command& cmd) {
        if (is_backend_result(cmd)) return;
        const KeyPress* k = key_of(cmd);
        if (!k) return not_available();
        if (k->key == Key::Arrow && (*k->direction == Direction::Up || *k->direction == Direction::Down)) {
            const auto dir = *k->direction == Direction::Up ? ResizeDirection::Increase : ResizeDirection::Decrease;
            const ResizeOutcome outcome = resize_object(s_.scene, m.id, dir);
            std::visit(overloaded{
                           [&](const Resized& r) { emit(size_tick(r.size)); },
                           [&](const AtMinimum&) {
                               emit(thump());
                               say("Minimum size reached");
                           },
                           [&](const BlockedAtEdge&) { emit(thump()); },
                       },
                       outcome);
            return;
        }
        if (k->key == Key::Shift) {
            const Size2D& sz = s_.scene.at(m.id).size;
            return say("size " + std::to_string(sz.width) + " by " + std::to_string(sz.height));
        }
        if (k->key == Key::Escape) {
            emit(StopSpeech{});
            say("Exited size edit mode");
            return to_navigate();
        }
        not_available();
    }

    // -- HelpList
    void on(const HelpListMode& m, const Command& cmd) {
        if (absorbed_silently(cmd)) return;
        const KeyPress* k = key_of(cmd);
        if (!k) return not_available();
        const int last = static_cast<int>(kHelpEntries.size());
        if (k->key == Key::Arrow && *k->direction == Direction::Down) {
            if (m.index >= last) return emit(thump(Direction::Down));
            s_.mode = HelpListMode{m.index + 1};
            return say(kHelpEntries[static_cast<std::size_t>(m.index)]);
        }
        if (k->key == Key::Arrow && *k->direction == Direction::Up) {
            if (m.index <= 1) return emit(thump(Direction::Up));
            s_.mode = HelpListMode{m.index - 1};
            return say(kHelpEntries[static_cast<std::size_t>(m.index - 2)]);
        }
        if (k->key == Key::Escape) {
            emit(StopSpeech{});
            say("Closed keyboard commands");
            return to_navigate();
        }
        not_available();
    }
};

} // namespace

HandleResult handle(SessionState& state, const Command& cmd) {
    HandleResult result = Machine(state).run(cmd);
    state.event_log.push_back({state.event_log.size(), cmd, result.events});
    return result;
}

// ------------------------------------------------------------------ driver

Command execute(const SessionState& state, const Dispatch& dispatch, GenBackend& backend, ImageStore& store) {
    try {
        switch (dispatch.purpose) {
        case Purpose::Generate: {
            const GeneratedObject g = generate_object(backend, dispatch.transcript, state.config().image_style);
            const std::string ref = store.put(g.image);
            return GenerationArrived{dispatch.request, {g.name, g.main_object, g.prompt, ref, g.description}};
        }
        case Purpose::GlobalDescribe: {
            const Bytes snapshot = encode_png(compose(state.scene, store).image);
            return DescriptionArrived{dispatch.request, describe_canvas(backend, state.scene, snapshot)};
        }
        case Purpose::Chat: {
            const SceneObject& obj = state.scene.at(dispatch.target.value_or(ObjectId{}));
            std::optional<Bytes> image;
            if (obj.image_ref) image = store.get(*obj.image_ref);
            return DescriptionArrived{dispatch.request, answer_question(backend, obj, image, dispatch.transcript)};
        }
        }
        throw Error(ErrorCode::BackendUnavailable, "unknown dispatch purpose");
    } catch (const Error& e) {
        return BackendFailed{dispatch.request, e.code(), e.what()};
    } catch (const std::exception& e) {
        return BackendFailed{dispatch.request, ErrorCode::BackendUnavailable, e.what()};
    }
}

std::vector<FeedbackEvent> apply(SessionState& state, const Command& cmd, GenBackend& backend, ImageStore& store) {
    HandleResult first = handle(state, cmd);
    std::vector<FeedbackEvent> events = std::move(first.events);
    if (first.dispatch) {
        const HandleResult second = handle(state, execute(state, *first.dispatch, backend, store));
        events.insert(events.end(), second.events.begin(), second.events.end());
    }
    return events;
}

SessionState replay(const CanvasConfig& config, std::uint64_t seed, const std::vector<Command>& commands,
                    GenBackend& backend, ImageStore& store) {
    SessionState state = new_session(config, seed);
    for (const auto& cmd : commands) apply(state, cmd, backend, store);
    return state;
}

} // namespace altcanvas
