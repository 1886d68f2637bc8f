#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace altcanvas {

enum class ErrorCode {
    InvalidConfig,
    NonEmptyScene,
    UnknownObject,
    TileOccupied,
    UnknownTile,
    DuplicateObject,
    NotAnObjectTile,
    PushBlockedAtCanvasEdge,
    EmptyTranscript,
    BackendUnavailable,
    ContentRejected,
    Timeout,
    InvalidThresholds,
    UnsupportedFormat,
    UnknownSession,
    MalformedCommand,
    CorruptFile,
    RenderFailed,
    SequenceConflict,
};

std::string_view to_string(ErrorCode code);
std::optional<ErrorCode> parse_error_code(std::string_view text);

// Every failure in the library surfaces as this exception; callers switch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace altcanvas
