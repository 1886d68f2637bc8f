#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "altcanvas/feedback.hpp"
#include "altcanvas/genai.hpp"
#include "altcanvas/image_store.hpp"
#include "altcanvas/scene.hpp"
#include "altcanvas/tile_grid.hpp"

namespace altcanvas {

// ---------------------------------------------------------------- commands

enum class Key { Enter, ShiftG, ShiftI, ShiftR, ShiftC, ShiftL, ShiftS, ShiftK, ShiftX, ShiftArrow, Arrow, Shift, Escape };

struct KeyPress {
    Key key = Key::Enter;
    std::optional<Direction> direction;   // ShiftArrow and Arrow only

    bool operator==(const KeyPress&) const = default;
};

struct TranscriptArrived {
    std::string text;

    bool operator==(const TranscriptArrived&) const = default;
};

struct GeneratedContent {
    std::string name;
    std::string main_object;
    std::string prompt;          // final filled template sent to the backend
    std::string image_ref;       // image store key
    std::string description;

    bool operator==(const GeneratedContent&) const = default;
};

// Backend results re-enter the state machine as commands tagged with the
// request number they answer; results for any other request are dropped.
struct GenerationArrived {
    std::uint64_t request = 0;
    GeneratedContent content;

    bool operator==(const GenerationArrived&) const = default;
};

struct DescriptionArrived {
    std::uint64_t request = 0;
    std::string text;

    bool operator==(const DescriptionArrived&) const = default;
};

struct BackendFailed {
    std::uint64_t request = 0;
    ErrorCode code = ErrorCode::BackendUnavailable;
    std::string message;

    bool operator==(const BackendFailed&) const = default;
};

using Command = std::variant<KeyPress, TranscriptArrived, GenerationArrived, DescriptionArrived, BackendFailed>;

/// Script / wire names: enter, escape, shift, shift-g ... shift-x,
/// arrow-{up,down,left,right}, shift-arrow-{...}, transcript.
std::string command_name(const Command& cmd);
/// True for commands a user can issue (keys and transcripts).
bool is_user_command(const Command& cmd);
/// Parses a user command. The payload is required for transcript and
/// forbidden otherwise. Throws MalformedCommand.
Command parse_command(std::string_view name, const std::optional<std::string>& payload = std::nullopt);

// ------------------------------------------------------------------- modes

enum class Purpose { Generate, Chat, GlobalDescribe };

std::string_view to_string(Purpose p);
std::optional<Purpose> parse_purpose(std::string_view text);

struct NavigateMode {
    bool operator==(const NavigateMode&) const = default;
};
struct AwaitTranscriptMode {
    Purpose purpose = Purpose::Generate;
    bool operator==(const AwaitTranscriptMode&) const = default;
};
struct ConfirmTranscriptMode {
    std::string text;
    Purpose purpose = Purpose::Generate;
    bool operator==(const ConfirmTranscriptMode&) const = default;
};
struct AwaitBackendMode {
    Purpose purpose = Purpose::Generate;
    std::uint64_t request = 0;
    bool operator==(const AwaitBackendMode&) const = default;
};
struct LocationEditMode {
    ObjectId id;
    bool operator==(const LocationEditMode&) const = default;
};
struct SizeEditMode {
    ObjectId id;
    bool operator==(const SizeEditMode&) const = default;
};
struct HelpListMode {
    int index = 0;   // 0 = list opened, 1..kHelpEntries.size() = entry read last
    bool operator==(const HelpListMode&) const = default;
};

using Mode = std::variant<NavigateMode, AwaitTranscriptMode, ConfirmTranscriptMode, AwaitBackendMode,
                          LocationEditMode, SizeEditMode, HelpListMode>;

std::string_view mode_name(const Mode& mode);

// The SHIFT+K list, in reading order.
extern const std::vector<std::string> kHelpEntries;

// ------------------------------------------------------------------- state

/// The transcript/generation context that outlives a single mode: set when
/// ENTER or SHIFT+C opens a transcript, consumed when the backend answers.
struct PendingAction {
    Purpose purpose = Purpose::Generate;
    TileCoord tile;                        // cursor tile when the action began
    std::optional<ObjectId> target;        // regenerated or questioned object
    std::string transcript;

    bool operator==(const PendingAction&) const = default;
};

struct LogEntry {
    std::uint64_t seq = 0;
    Command command;
    std::vector<FeedbackEvent> events;

    bool operator==(const LogEntry&) const = default;
};

struct SessionState {
    Scene scene;
    TileGrid grid = TileGrid::init();
    Mode mode = NavigateMode{};
    std::uint64_t seed = 0;
    std::uint64_t next_object_id = 1;
    std::uint64_t next_request = 1;
    std::optional<PendingAction> pending;
    std::vector<LogEntry> event_log;

    const CanvasConfig& config() const { return scene.config(); }

    bool operator==(const SessionState&) const = default;
};

/// Validates the config and returns an empty session.
SessionState new_session(const CanvasConfig& config, std::uint64_t seed);

/// Work the driver must carry out for an AwaitBackend transition.
struct Dispatch {
    std::uint64_t request = 0;
    Purpose purpose = Purpose::Generate;
    std::string transcript;                // generation prompt or chat question
    std::optional<ObjectId> target;        // chat subject

    bool operator==(const Dispatch&) const = default;
};

struct HandleResult {
    std::vector<FeedbackEvent> events;
    std::optional<Dispatch> dispatch;
};

inline constexpr std::string_view kNotAvailable = "Command not available here";
inline constexpr std::string_view kPleaseWait = "Generating, please wait";

/// The state machine. Deterministic, never throws for well-formed commands,
/// and appends exactly one event_log entry per call.
HandleResult handle(SessionState& state, const Command& cmd);

/// Runs a dispatch against a backend and returns the command carrying its
/// outcome. Generated images are stored in the image store.
Command execute(const SessionState& state, const Dispatch& dispatch, GenBackend& backend, ImageStore& store);

/// handle() followed, for backend transitions, by execute() and handle() of
/// the result. Returns the events of every transition taken.
std::vector<FeedbackEvent> apply(SessionState& state, const Command& cmd, GenBackend& backend, ImageStore& store);

/// Folds apply() over the commands from a fresh session.
SessionState replay(const CanvasConfig& config, std::uint64_t seed, const std::vector<Command>& commands,
                    GenBackend& backend, ImageStore& store);

} // namespace altcanvas
