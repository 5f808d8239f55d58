#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <optional>
#include <string>

#include "deployauth/engine.hpp"
#include "deployauth/errors.hpp"
#include "deployauth/service.hpp"

namespace {

using namespace deployauth;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;  // operational failure
constexpr int kExitDenied = 2; // governance outcome: denied / verification failed

struct GlobalOptions {
    std::string home;
    std::string clock_text;
    std::string format = "canonical";
};

std::int64_t system_now() {
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

// Accepts unix seconds or UTC "YYYY-MM-DDTHH:MM:SSZ".
std::int64_t parse_clock(const std::string& text) {
    if (text.empty()) return system_now();
    if (text.find_first_not_of("0123456789") == std::string::npos) {
        return std::stoll(text);
    }
    std::tm tm{};
    if (std::sscanf(text.c_str(), "%d-%d-%dT%d:%d:%dZ", &tm.tm_year, &tm.tm_mon, &tm.tm_mday,
                    &tm.tm_hour, &tm.tm_min, &tm.tm_sec) != 6) {
        throw Error(Errc::SyntaxError,
                    "clock must be unix seconds or YYYY-MM-DDTHH:MM:SSZ, got '" + text + "'");
    }
    tm.tm_year -= 1900;
    tm.tm_mon -= 1;
    return static_cast<std::int64_t>(timegm(&tm));
}

void print_json(const GlobalOptions& opts, const Json& j) {
    if (opts.format == "pretty") {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << canonicalize(j) << "\n";
    }
}

std::string trimmed(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) s.pop_back();
    return s;
}

ArtefactKind parse_kind(const std::string& name) {
    auto kind = artefact_kind_from_string(name);
    if (!kind) {
        throw Error(Errc::SchemaError, "unknown artefact kind: " + name);
    }
    return *kind;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deployment authorisation engine"};
    app.require_subcommand(1);

    GlobalOptions opts;
    app.add_option("--home", opts.home, "engine home directory")
        ->envname("DEPLOYAUTH_HOME");
    app.add_option("--clock", opts.clock_text,
                   "UTC clock override (unix seconds or YYYY-MM-DDTHH:MM:SSZ)")
        ->envname("DEPLOYAUTH_CLOCK");
    app.add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"canonical", "pretty"}));

    auto require_home = [&]() -> std::string {
        if (opts.home.empty()) {
            throw Error(Errc::NotFound, "--home is required (or set DEPLOYAUTH_HOME)");
        }
        return opts.home;
    };

    int exit_code = kExitOk;

    // init
    auto* init_cmd = app.add_subcommand("init", "create an engine home and issuer key pair");
    std::string key_seed;
    init_cmd->add_option("--key-seed", key_seed, "issuer key seed, 64 hex chars (testing)");
    init_cmd->callback([&] {
        auto home = EngineHome::init(require_home(),
                                     key_seed.empty() ? std::nullopt
                                                      : std::optional<std::string>(key_seed));
        print_json(opts, Json{{"home", home.root().string()},
                              {"issuer_key_id", crypto::key_id(home.issuer_public_hex())},
                              {"issuer_public_key", home.issuer_public_hex()}});
    });

    // policy
    auto* policy_cmd = app.add_subcommand("policy", "manage policies");
    policy_cmd->require_subcommand(1);

    auto* policy_add = policy_cmd->add_subcommand("add", "parse and register a policy document");
    std::string policy_file;
    policy_add->add_option("file", policy_file, "policy document")->required();
    policy_add->callback([&] {
        Engine engine(EngineHome::open(require_home()));
        Policy p = engine.add_policy(read_file(policy_file));
        print_json(opts, Json{{"policy_id", p.policy_id},
                              {"version", p.version},
                              {"jurisdiction", p.jurisdiction},
                              {"domain", p.domain},
                              {"fingerprint", policy_fingerprint(p)}});
    });

    auto* policy_show = policy_cmd->add_subcommand("show", "resolve and print a policy");
    std::string jurisdiction, domain, version;
    policy_show->add_option("--jurisdiction", jurisdiction)->required();
    policy_show->add_option("--domain", domain)->required();
    policy_show->add_option("--version", version);
    policy_show->callback([&] {
        Engine engine(EngineHome::open(require_home()));
        const Policy& p = engine.registry().resolve(
            jurisdiction, domain,
            version.empty() ? std::nullopt : std::optional<std::string_view>(version));
        print_json(opts, to_json(p));
    });

    auto* policy_fp = policy_cmd->add_subcommand("fingerprint", "fingerprint a policy document");
    std::string policy_fp_file;
    policy_fp->add_option("file", policy_fp_file, "policy document")->required();
    policy_fp->callback([&] {
        Policy p = parse_policy(read_file(policy_fp_file));
        print_json(opts, Json{{"fingerprint", policy_fingerprint(p)}});
    });

    // evidence
    auto* evidence_cmd = app.add_subcommand("evidence", "manage artefacts and bundles");
    evidence_cmd->require_subcommand(1);

    auto* ev_put = evidence_cmd->add_subcommand("put", "store an artefact");
    std::string put_file, put_kind, put_label, put_bundle;
    ev_put->add_option("file", put_file, "artefact file")->required();
    ev_put->add_option("--kind", put_kind, "artefact kind")->required();
    ev_put->add_option("--label", put_label, "short label");
    ev_put->add_option("--bundle", put_bundle, "append to this bundle as well");
    ev_put->callback([&] {
        Engine engine(EngineHome::open(require_home()));
        auto ref = engine.put_artefact(read_file(put_file), parse_kind(put_kind),
                                       parse_clock(opts.clock_text), put_label);
        if (!put_bundle.empty()) {
            engine.append_to_bundle(put_bundle, ref);
        }
        print_json(opts, to_json(ref));
    });

    auto* ev_create = evidence_cmd->add_subcommand("bundle-create", "create an empty bundle");
    std::string create_bundle_id, create_deployment_id;
    ev_create->add_option("--bundle", create_bundle_id)->required();
    ev_create->add_option("--deployment-id", create_deployment_id)->required();
    ev_create->callback([&] {
        Engine engine(EngineHome::open(require_home()));
        engine.create_bundle(create_bundle_id, create_deployment_id);
        print_json(opts, Json{{"bundle_id", create_bundle_id},
                              {"deployment_id", create_deployment_id}});
    });

    auto* ev_append = evidence_cmd->add_subcommand("bundle-append", "append a stored artefact");
    std::string append_bundle, append_hash, append_kind, append_label;
    ev_append->add_option("--bundle", append_bundle)->required();
    ev_append->add_option("--hash", append_hash, "content hash of a stored artefact")->required();
    ev_append->add_option("--kind", append_kind)->required();
    ev_append->add_option("--label", append_label);
    ev_append->callback([&] {
        Engine engine(EngineHome::open(require_home()));
        std::string bytes = engine.store().get(append_hash);
        ArtefactRef ref{append_hash, parse_kind(append_kind), parse_clock(opts.clock_text),
                        static_cast<std::int64_t>(bytes.size()), append_label};
        auto bundle = engine.append_to_bundle(append_bundle, ref);
        print_json(opts, Json{{"bundle_id", bundle.bundle_id},
                              {"entries", static_cast<std::int64_t>(bundle.entries.size())},
                              {"fingerprint", bundle_fingerprint(bundle)}});
    });

    auto* ev_show = evidence_cmd->add_subcommand("bundle-show", "print a bundle manifest");
    std::string show_bundle;
    ev_show->add_option("--bundle", show_bundle)->required();
    ev_show->callback([&] {
        Engine engine(EngineHome::open(require_home()));
        auto bundle = engine.load_bundle(show_bundle);
        print_json(opts, Json{{"bundle_id", bundle.bundle_id},
                              {"deployment_id", bundle.deployment_id},
                              {"entries", manifest_json(bundle)},
                              {"fingerprint", bundle_fingerprint(bundle)}});
    });

    // assess
    auto* assess_cmd = app.add_subcommand("assess", "run a full authorisation assessment");
    std::string assess_deployment, assess_bundle, assess_jur, assess_dom, assess_version;
    int validity_days = 365;
    assess_cmd->add_option("--deployment", assess_deployment, "deployment descriptor file")
        ->required();
    assess_cmd->add_option("--bundle", assess_bundle)->required();
    assess_cmd->add_option("--jurisdiction", assess_jur,
                           "defaults to the descriptor's jurisdiction");
    assess_cmd->add_option("--domain", assess_dom, "defaults to the descriptor's domain");
    assess_cmd->add_option("--policy-version", assess_version);
    assess_cmd->add_option("--validity-days", validity_days, "certificate validity");
    assess_cmd->callback([&] {
        Engine engine(EngineHome::open(require_home()));
        auto deployment = deployment_from_json(parse_canonical(read_file(assess_deployment)));
        std::string jur = assess_jur.empty() ? deployment.jurisdiction : assess_jur;
        std::string dom = assess_dom.empty() ? deployment.use_context.domain : assess_dom;
        auto result = engine.assess(
            deployment, assess_bundle, jur, dom,
            assess_version.empty() ? std::nullopt
                                   : std::optional<std::string_view>(assess_version),
            parse_clock(opts.clock_text), validity_days);

        Json out{{"decision", to_json(result.decision)},
                 {"package_hash", result.package_hash},
                 {"package_path", result.package_path.string()}};
        if (result.certificate) {
            out["certificate_id"] = result.certificate->certificate_id;
            out["certificate_path"] = result.certificate_path->string();
            out["log_index"] = *result.log_index;
        }
        print_json(opts, out);
        if (result.decision.outcome == Outcome::Denied) exit_code = kExitDenied;
    });

    // cert
    auto* cert_cmd = app.add_subcommand("cert", "verify, revoke and query certificates");
    cert_cmd->require_subcommand(1);

    auto* cert_verify = cert_cmd->add_subcommand("verify", "verify a certificate offline");
    std::string verify_file, verify_key, verify_key_file, verify_package, verify_log_dir;
    cert_verify->add_option("file", verify_file, "certificate file")->required();
    cert_verify->add_option("--key", verify_key, "issuer public key, 64 hex chars");
    cert_verify->add_option("--key-file", verify_key_file, "file holding the public key");
    cert_verify->add_option("--package", verify_package, "audit package file to bind-check");
    cert_verify->add_option("--log", verify_log_dir, "log directory snapshot for status checks");
    cert_verify->callback([&] {
        std::string pub = verify_key;
        if (pub.empty() && !verify_key_file.empty()) pub = trimmed(read_file(verify_key_file));
        if (pub.empty() && !opts.home.empty()) {
            pub = EngineHome::open(opts.home).issuer_public_hex();
        }
        if (pub.empty()) {
            throw Error(Errc::InvalidKey, "need --key, --key-file or --home for the issuer key");
        }
        Certificate cert = certificate_from_json(parse_canonical(read_file(verify_file)));

        std::optional<AuditPackage> pkg;
        if (!verify_package.empty()) {
            pkg = audit_package_from_json(parse_canonical(read_file(verify_package)));
        }
        std::optional<TransparencyLog> log;
        if (!verify_log_dir.empty()) {
            log = TransparencyLog::open_read_only(verify_log_dir);
        }
        auto report = verify_certificate(cert, pub, pkg ? &*pkg : nullptr,
                                         log ? &*log : nullptr, parse_clock(opts.clock_text));
        print_json(opts, to_json(report));
        if (!report.valid) exit_code = kExitDenied;
    });

    auto* cert_revoke = cert_cmd->add_subcommand("revoke", "sign and log a revocation event");
    std::string revoke_id, revoke_action = "REVOKE", revoke_reason;
    cert_revoke->add_option("--certificate", revoke_id)->required();
    cert_revoke->add_option("--action", revoke_action)
        ->check(CLI::IsMember({"REVOKE", "SUSPEND", "REINSTATE"}));
    cert_revoke->add_option("--reason", revoke_reason, "MaterialIncident | EvidenceInvalid | ScopeChange | PolicyUpdate")
        ->required();
    cert_revoke->callback([&] {
        Engine engine(EngineHome::open(require_home()));
        auto action = revocation_action_from_string(revoke_action);
        auto reason = revocation_reason_from_string(revoke_reason);
        if (!reason) {
            throw Error(Errc::SchemaError, "unknown revocation reason: " + revoke_reason);
        }
        auto [record, sth] =
            engine.revoke(revoke_id, *action, *reason, parse_clock(opts.clock_text));
        print_json(opts, Json{{"record", to_json(record)}, {"sth", to_json(sth)}});
    });

    auto* cert_status = cert_cmd->add_subcommand("status", "certificate status from log replay");
    std::string status_id;
    cert_status->add_option("--certificate", status_id)->required();
    cert_status->callback([&] {
        Engine engine(EngineHome::open(require_home()));
        print_json(opts,
                   Json{{"certificate_id", status_id},
                        {"status", to_string(engine.certificate_status(
                                       status_id, parse_clock(opts.clock_text)))}});
    });

    // log
    auto* log_cmd = app.add_subcommand("log", "transparency log queries");
    log_cmd->require_subcommand(1);

    auto* log_sth = log_cmd->add_subcommand("sth", "print the current signed tree head");
    log_sth->callback([&] {
        Engine engine(EngineHome::open(require_home()));
        auto sth = engine.log().latest_sth();
        print_json(opts, to_json(sth ? *sth : engine.log().head(parse_clock(opts.clock_text))));
    });

    auto* log_incl = log_cmd->add_subcommand("prove-inclusion", "inclusion proof for a leaf");
    std::uint64_t incl_index = 0, incl_size = 0;
    log_incl->add_option("--index", incl_index)->required();
    log_incl->add_option("--size", incl_size)->required();
    log_incl->callback([&] {
        Engine engine(EngineHome::open(require_home()));
        print_json(opts, to_json(engine.log().prove_inclusion(incl_index, incl_size)));
    });

    auto* log_cons = log_cmd->add_subcommand("prove-consistency", "consistency proof");
    std::uint64_t cons_old = 0, cons_new = 0;
    log_cons->add_option("--old", cons_old)->required();
    log_cons->add_option("--new", cons_new)->required();
    log_cons->callback([&] {
        Engine engine(EngineHome::open(require_home()));
        print_json(opts, to_json(engine.log().prove_consistency(cons_old, cons_new)));
    });

    // serve
    auto* serve_cmd = app.add_subcommand("serve", "read-only status service");
    std::string bind = "127.0.0.1:8080";
    serve_cmd->add_option("--bind", bind, "host:port");
    serve_cmd->callback([&] {
        auto home = EngineHome::open(require_home());
        auto colon = bind.rfind(':');
        if (colon == std::string::npos) {
            throw Error(Errc::SyntaxError, "--bind must be host:port");
        }
        std::string host = bind.substr(0, colon);
        int port = std::stoi(bind.substr(colon + 1));
        std::optional<std::int64_t> fixed_clock;
        if (!opts.clock_text.empty()) fixed_clock = parse_clock(opts.clock_text);
        StatusService service(home.root(), fixed_clock);
        std::cerr << "serving read-only status on " << host << ":" << port << "\n";
        if (!service.listen(host, port)) {
            throw Error(Errc::StorageFailure, "cannot bind " + bind);
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << canonicalize(Json{{"error", e.what()}}) << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << canonicalize(Json{{"error", e.what()}}) << "\n";
        return kExitError;
    }
    return exit_code;
}
