#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "altcanvas/service.hpp"

namespace altcanvas {

/// HTTP/JSON transport over a SessionService. Routes:
///   POST /sessions                       create (config fields) or import (a session file)
///   GET  /sessions                       list ids
///   GET  /sessions/{id}                  session file, X-State-Digest header
///   POST /sessions/{id}/commands         {"command", "payload"?, "seq"?}
///   GET  /sessions/{id}/events?from=&follow=   NDJSON stream
///   GET  /sessions/{id}/render?kind=&format=&edges=&threshold=&low=&high=&sigma=&instruction=
///   PUT  /sessions/{id}/settings         partial config
///   GET  /healthz
class HttpFrontend {
public:
    explicit HttpFrontend(SessionService& service,
                          std::chrono::milliseconds heartbeat = std::chrono::milliseconds(15000));
    ~HttpFrontend();

    /// Port 0 picks an ephemeral port. Returns the bound port; throws
    /// InvalidConfig if binding fails.
    int bind(const std::string& host, int port);
    /// Serves until stop(). Call after bind().
    void listen();
    void stop();
    /// Blocks until the listener accepts connections.
    void wait_until_ready();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Splits "host:port". Throws InvalidConfig.
std::pair<std::string, int> parse_bind_address(const std::string& text);

} // namespace altcanvas
