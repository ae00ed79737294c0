#pragma once

// JSON-over-HTTP service wiring the draft workflow, recommender, ingest,
// store and render modules under /api.

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "isc/store.hpp"

namespace isc {

struct ServerConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::filesystem::path data_dir = "data";
    std::optional<std::filesystem::path> rules_file;
};

/// The default rules, or the configured override. Throws Error(Validation).
RuleSet load_configured_rules(const ServerConfig& config);

class ApiServer {
public:
    explicit ApiServer(FileStore& store);
    ~ApiServer();

    ApiServer(const ApiServer&) = delete;
    ApiServer& operator=(const ApiServer&) = delete;

    /// Binds without serving; port 0 picks a free port. Returns the bound
    /// port or -1.
    int bind(const std::string& host, int port);

    /// Serves until stop(); in-flight requests finish before it returns.
    bool listen_after_bind();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Loads rules, opens the store, binds and serves until SIGINT/SIGTERM.
/// Returns a process exit code; errors are reported on stderr.
int serve(const ServerConfig& config);

}  // namespace isc
