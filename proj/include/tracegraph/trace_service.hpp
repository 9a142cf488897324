#pragma once

#include "tracegraph/knowledge_base.hpp"

#include <chrono>
#include <filesystem>
#include <memory>
#include <string>

namespace tracegraph {

struct BindAddress {
    std::string host = "127.0.0.1";
    int port = 8080;
};

/// Parses HOST:PORT (or :PORT, or PORT). Throws std::invalid_argument.
BindAddress parseBind(const std::string& text);

/// TRACEGRAPH_BIND when set and non-empty, otherwise the given value.
std::string effectiveBind(const std::string& flagValue);

/// JSON-over-HTTP front end to one knowledge base. Requests run
/// concurrently; mutations take an exclusive lock, everything else a shared
/// one. Every response carries the revision in an X-KB-Revision header.
class TraceService {
public:
    TraceService(KnowledgeBase kb, std::filesystem::path kbFile);
    ~TraceService();
    TraceService(const TraceService&) = delete;
    TraceService& operator=(const TraceService&) = delete;

    /// Longest time GET /events blocks waiting for a new revision.
    void setMaxWait(std::chrono::milliseconds wait);

    /// Binds (port 0 picks a free port) and serves on a background thread.
    /// Returns the bound port. Throws std::runtime_error when binding fails.
    int start(const BindAddress& address);
    /// Binds and serves on the calling thread until stop() is called.
    void run(const BindAddress& address);
    void stop();

    std::uint64_t revision() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace tracegraph
