#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace deployauth {

// Read-only status interface over an engine home: certificate status, the
// current tree head, inclusion/consistency proofs, audit packages by hash.
// No mutating endpoint exists. Responses are canonical encoding.
class StatusService {
public:
    // fixed_clock pins every time-dependent answer (expiry) for testing;
    // without it the service reads the system clock per request.
    StatusService(std::filesystem::path home_root, std::optional<std::int64_t> fixed_clock);
    ~StatusService();

    // Blocks serving requests. Returns false on bind failure.
    bool listen(const std::string& host, int port);

    // Test support: bind an ephemeral port, then serve from a caller thread.
    int bind_any_port(const std::string& host);
    bool listen_after_bind();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace deployauth
