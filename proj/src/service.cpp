#include "deployauth/service.hpp"

#include <httplib.h>

#include <charconv>
#include <chrono>

#include "deployauth/canonical.hpp"
#include "deployauth/errors.hpp"
#include "deployauth/home.hpp"
#include "deployauth/translog.hpp"

namespace deployauth {

namespace {

std::optional<std::uint64_t> parse_u64(const std::string& s) {
    std::uint64_t n = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return n;
}

void reply_json(httplib::Response& res, const Json& j, int status = 200) {
    res.status = status;
    res.set_content(canonicalize(j), "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
    reply_json(res, Json{{"error", message}}, status);
}

} // namespace

struct StatusService::Impl {
    std::filesystem::path home_root;
    std::optional<std::int64_t> fixed_clock;
    httplib::Server server;

    std::int64_t now() const {
        if (fixed_clock) return *fixed_clock;
        return std::chrono::duration_cast<std::chrono::seconds>(
                   std::chrono::system_clock::now().time_since_epoch())
            .count();
    }

    // A fresh read-only view per request: appends committed by the CLI while
    // the service runs become visible, and the service itself can never
    // mutate anything.
    TransparencyLog open_log() const {
        return TransparencyLog::open_read_only(home_root / "log");
    }

    void configure() {
        server.Get("/v1/status/([^/]+)", [this](const httplib::Request& req,
                                                httplib::Response& res) {
            try {
                auto log = open_log();
                std::string id = req.matches[1];
                reply_json(res, Json{{"certificate_id", id},
                                     {"status", log.status_name(id, now())}});
            } catch (const Error& e) {
                reply_error(res, 400, e.what());
            }
        });

        server.Get("/v1/sth", [this](const httplib::Request&, httplib::Response& res) {
            try {
                auto log = open_log();
                auto sth = log.latest_sth();
                if (!sth) {
                    reply_error(res, 404, "no tree head yet");
                    return;
                }
                reply_json(res, to_json(*sth));
            } catch (const Error& e) {
                reply_error(res, 400, e.what());
            }
        });

        server.Get("/v1/proof/inclusion", [this](const httplib::Request& req,
                                                 httplib::Response& res) {
            auto index = parse_u64(req.get_param_value("index"));
            auto size = parse_u64(req.get_param_value("size"));
            if (!index || !size) {
                reply_error(res, 400, "index and size must be non-negative integers");
                return;
            }
            try {
                auto log = open_log();
                reply_json(res, to_json(log.prove_inclusion(*index, *size)));
            } catch (const Error& e) {
                reply_error(res, 400, e.what());
            }
        });

        server.Get("/v1/proof/consistency", [this](const httplib::Request& req,
                                                   httplib::Response& res) {
            auto old_size = parse_u64(req.get_param_value("old"));
            auto new_size = parse_u64(req.get_param_value("new"));
            if (!old_size || !new_size) {
                reply_error(res, 400, "old and new must be non-negative integers");
                return;
            }
            try {
                auto log = open_log();
                reply_json(res, to_json(log.prove_consistency(*old_size, *new_size)));
            } catch (const Error& e) {
                reply_error(res, 400, e.what());
            }
        });

        server.Get("/v1/package/([0-9a-f]{64})", [this](const httplib::Request& req,
                                                        httplib::Response& res) {
            std::string hash = req.matches[1];
            try {
                std::string bytes = read_file(home_root / "packages" / hash);
                res.status = 200;
                res.set_content(bytes, "application/json");
            } catch (const Error&) {
                reply_error(res, 404, "no package " + hash);
            }
        });
    }
};

StatusService::StatusService(std::filesystem::path home_root,
                             std::optional<std::int64_t> fixed_clock)
    : impl_(std::make_unique<Impl>()) {
    impl_->home_root = std::move(home_root);
    impl_->fixed_clock = fixed_clock;
    impl_->configure();
}

StatusService::~StatusService() = default;

bool StatusService::listen(const std::string& host, int port) {
    return impl_->server.listen(host, port);
}

int StatusService::bind_any_port(const std::string& host) {
    return impl_->server.bind_to_any_port(host);
}

bool StatusService::listen_after_bind() {
    return impl_->server.listen_after_bind();
}

void StatusService::stop() {
    impl_->server.stop();
}

} // namespace deployauth
