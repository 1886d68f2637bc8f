#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "altcanvas/engine.hpp"

namespace altcanvas {

inline constexpr int kFormatVersion = 1;

/// Everything persisted for one session.
struct SessionDocument {
    SessionState state;
    std::string backend = "mock";   // mock | remote

    bool operator==(const SessionDocument&) const = default;
};

using ojson = nlohmann::ordered_json;

ojson event_to_json(const FeedbackEvent& event);
FeedbackEvent event_from_json(const ojson& j);

/// {"name": ..., plus payload fields}. See README for the field list.
ojson command_to_json(const Command& cmd);
/// Throws MalformedCommand naming the offending field.
Command command_from_json(const ojson& j);

ojson log_entry_to_json(const LogEntry& entry);

/// Canonical form: fixed key order, 2-space indent, trailing newline.
/// Geometry is integer-only, so parse then serialize is byte-identical.
std::string serialize_session(const SessionDocument& doc);

/// Throws CorruptFile with a byte offset (syntax) or field path (schema).
SessionDocument parse_session(std::string_view text);

/// Lower-case hex SHA-256 of serialize_session(doc).
std::string state_digest(const SessionDocument& doc);

/// Atomic write (temporary file + rename).
void save_session_file(const std::filesystem::path& path, const SessionDocument& doc);
/// Throws CorruptFile, including for unreadable files.
SessionDocument load_session_file(const std::filesystem::path& path);

} // namespace altcanvas
