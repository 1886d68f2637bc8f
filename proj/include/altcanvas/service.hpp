#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "altcanvas/session_file.hpp"
#include "altcanvas/session_render.hpp"

namespace altcanvas {

struct ServiceConfig {
    std::filesystem::path data_dir;        // <data_dir>/sessions/*.json, <data_dir>/images/*.png
    bool allow_remote = false;             // sessions may use the remote backend
    std::chrono::milliseconds sequence_wait{30000};   // how long an out-of-order command waits

    /// Reads ALTCANVAS_DATA_DIR (default ./altcanvas-data).
    static ServiceConfig from_environment();
};

/// One flattened feedback event as delivered on the event stream.
struct StreamEvent {
    std::uint64_t seq = 0;      // dense per session, from 0
    std::uint64_t entry = 0;    // event_log entry that produced it
    FeedbackEvent event;
};

struct SubmitResult {
    std::uint64_t entry = 0;
    std::vector<FeedbackEvent> events;   // this transition only
    bool deferred = false;               // a backend request was started
    std::string state_digest;
};

struct SessionInfo {
    std::string id;
    std::string backend;
    std::uint64_t seed = 0;
    std::string created_at;              // ISO 8601 UTC
    std::string updated_at;
    std::uint64_t next_client_seq = 0;
};

/// Transport-independent session store. Sessions are independent; commands
/// to one session are applied by a single writer in client sequence order.
/// Every change is persisted before the call returns.
class SessionService {
public:
    explicit SessionService(ServiceConfig config);
    ~SessionService();

    SessionService(const SessionService&) = delete;
    SessionService& operator=(const SessionService&) = delete;

    /// Throws InvalidConfig.
    std::string create_session(const CanvasConfig& config, const std::string& backend, std::uint64_t seed);
    /// Registers a session file under a new id. Throws CorruptFile.
    std::string import_session(std::string_view session_file);

    std::vector<std::string> list_sessions() const;
    SessionInfo info(const std::string& id) const;
    std::string session_file(const std::string& id) const;
    std::string state_digest(const std::string& id) const;
    SessionDocument document(const std::string& id) const;

    /// Applies one user command. With client_seq, the command waits until
    /// every lower sequence number has been applied; a reused or expired
    /// number throws SequenceConflict. Mock backend work runs inline right
    /// after the command; remote work runs on a worker and re-enters as a
    /// command. Throws UnknownSession, MalformedCommand.
    SubmitResult submit(const std::string& id, const Command& cmd, std::optional<std::uint64_t> client_seq);

    /// Events with seq >= from. Blocks up to `wait` for the first one.
    std::vector<StreamEvent> events(const std::string& id, std::uint64_t from,
                                    std::chrono::milliseconds wait = std::chrono::milliseconds(0)) const;

    RenderOutput render(const std::string& id, const RenderRequest& request) const;

    /// Canvas size may not shrink below the extent of existing objects.
    CanvasConfig update_settings(const std::string& id, const CanvasConfig& config);

    /// Waits for outstanding backend workers.
    void drain();

    /// Wakes blocked event waiters and refuses further waiting.
    void shutdown();
    bool stopping() const { return stopping_; }

    const ServiceConfig& config() const { return config_; }

private:
    struct Record;

    std::shared_ptr<Record> find(const std::string& id) const;
    std::string register_record(SessionDocument doc, std::string created_at, std::uint64_t next_client_seq);
    void persist(Record& r);
    void run_backend(std::shared_ptr<Record> r, Dispatch dispatch);
    SubmitResult commit(Record& r, const HandleResult& result);

    ServiceConfig config_;
    std::shared_ptr<ImageStore> store_;
    mutable std::mutex mu_;
    std::map<std::string, std::shared_ptr<Record>> sessions_;
    std::mutex workers_mu_;
    std::vector<std::thread> workers_;
    std::atomic<bool> stopping_{false};
};

} // namespace altcanvas
