#include "deployauth/certification.hpp"

#include "deployauth/crypto.hpp"
#include "deployauth/errors.hpp"

namespace deployauth {

namespace {

std::string hash_of(const Json& j) {
    return crypto::sha256_hex(canonicalize(j));
}

Json manifest_list_json(const std::vector<ArtefactRef>& manifest) {
    Json entries = Json::array();
    for (const auto& ref : manifest) entries.push_back(to_json(ref));
    return entries;
}

} // namespace

AuditPackage assemble_audit_package(const Policy& policy, const DeploymentDescriptor& deployment,
                                    const EvidenceBundle& bundle, const Decision& decision) {
    std::string policy_fp = policy_fingerprint(policy);
    if (decision.policy_fingerprint != policy_fp) {
        throw Error(Errc::HashMismatch,
                    "decision was made under policy " + decision.policy_fingerprint +
                        ", not " + policy_fp);
    }
    AuditPackage pkg;
    pkg.policy_fingerprint = policy_fp;
    pkg.policy_version = policy.version;
    pkg.deployment = deployment;
    pkg.bundle_manifest = bundle.entries;
    pkg.bundle_fingerprint = bundle_fingerprint(bundle);
    pkg.score_vector = decision.score_vector;
    pkg.decision = decision;

    pkg.component_hashes["policy"] = policy_fp;
    pkg.component_hashes["deployment"] = hash_of(to_json(deployment));
    pkg.component_hashes["manifest"] = crypto::sha256_hex(canonicalize(manifest_list_json(pkg.bundle_manifest)));
    pkg.component_hashes["decision"] = hash_of(to_json(decision));
    if (pkg.component_hashes["manifest"] != pkg.bundle_fingerprint) {
        throw Error(Errc::HashMismatch, "bundle fingerprint disagrees with manifest");
    }

    // Deterministic id: same inputs and clock, same package.
    Json id_material{
        {"policy", pkg.policy_fingerprint},
        {"deployment", pkg.component_hashes["deployment"]},
        {"manifest", pkg.bundle_fingerprint},
        {"decision", pkg.component_hashes["decision"]},
        {"evaluated_at", decision.evaluated_at},
    };
    pkg.package_id = "pkg-" + crypto::sha256_hex(canonicalize(id_material)).substr(0, 24);
    return pkg;
}

Json to_json(const AuditPackage& pkg) {
    Json j{
        {"package_id", pkg.package_id},
        {"policy_fingerprint", pkg.policy_fingerprint},
        {"policy_version", pkg.policy_version},
        {"deployment", to_json(pkg.deployment)},
        {"bundle_manifest", manifest_list_json(pkg.bundle_manifest)},
        {"bundle_fingerprint", pkg.bundle_fingerprint},
        {"decision", to_json(pkg.decision)},
        {"component_hashes", pkg.component_hashes},
    };
    if (pkg.score_vector) j["score_vector"] = to_json(*pkg.score_vector);
    return j;
}

AuditPackage audit_package_from_json(const Json& j) {
    for (const char* field : {"package_id", "policy_fingerprint", "policy_version", "deployment",
                              "bundle_manifest", "bundle_fingerprint", "decision",
                              "component_hashes"}) {
        if (!j.is_object() || !j.contains(field)) {
            throw Error(Errc::SchemaError,
                        std::string("audit package: missing field '") + field + "'");
        }
    }
    AuditPackage pkg;
    pkg.package_id = j.at("package_id").get<std::string>();
    pkg.policy_fingerprint = j.at("policy_fingerprint").get<std::string>();
    pkg.policy_version = j.at("policy_version").get<std::string>();
    pkg.deployment = deployment_from_json(j.at("deployment"));
    for (const auto& rj : j.at("bundle_manifest")) {
        pkg.bundle_manifest.push_back(artefact_ref_from_json(rj));
    }
    pkg.bundle_fingerprint = j.at("bundle_fingerprint").get<std::string>();
    if (j.contains("score_vector")) {
        pkg.score_vector = score_vector_from_json(j.at("score_vector"));
    }
    pkg.decision = decision_from_json(j.at("decision"));
    pkg.component_hashes =
        j.at("component_hashes").get<std::map<std::string, std::string>>();
    return pkg;
}

std::string audit_package_hash(const AuditPackage& pkg) {
    return crypto::sha256_hex(canonicalize(to_json(pkg)));
}

std::vector<VerificationCheck> verify_audit_package(const AuditPackage& pkg) {
    std::vector<VerificationCheck> checks;
    auto expect = [&](const std::string& name, const std::string& recomputed) {
        auto it = pkg.component_hashes.find(name);
        bool ok = it != pkg.component_hashes.end() && it->second == recomputed;
        checks.push_back({"component:" + name, ok,
                          ok ? "hash matches" : "recomputed " + recomputed});
    };
    expect("policy", pkg.policy_fingerprint);
    expect("deployment", hash_of(to_json(pkg.deployment)));
    std::string manifest_hash = crypto::sha256_hex(canonicalize(manifest_list_json(pkg.bundle_manifest)));
    expect("manifest", manifest_hash);
    expect("decision", hash_of(to_json(pkg.decision)));
    checks.push_back({"bundle_fingerprint", pkg.bundle_fingerprint == manifest_hash,
                      pkg.bundle_fingerprint == manifest_hash
                          ? "fingerprint matches manifest"
                          : "fingerprint does not match manifest"});
    checks.push_back({"decision_policy", pkg.decision.policy_fingerprint == pkg.policy_fingerprint,
                      "decision bound to recorded policy"});
    return checks;
}

Json to_json(const Certificate& cert) {
    Json j = parse_canonical(certificate_signing_bytes(cert));
    j["signature"] = cert.signature;
    return j;
}

std::string certificate_signing_bytes(const Certificate& cert) {
    Json conditions = Json::array();
    for (const auto& c : cert.conditions) conditions.push_back(to_json(c));
    Json j{
        {"certificate_id", cert.certificate_id},
        {"deployment_id", cert.deployment_id},
        {"scope_statement", cert.scope_statement},
        {"policy_id", cert.policy_id},
        {"policy_version", cert.policy_version},
        {"outcome", to_string(cert.outcome)},
        {"conditions", conditions},
        {"audit_package_hash", cert.audit_package_hash},
        {"issued_at", cert.issued_at},
        {"expires_at", cert.expires_at},
        {"issuer_key_id", cert.issuer_key_id},
    };
    return canonicalize(j);
}

Certificate certificate_from_json(const Json& j) {
    for (const char* field :
         {"certificate_id", "deployment_id", "scope_statement", "policy_id", "policy_version",
          "outcome", "conditions", "audit_package_hash", "issued_at", "expires_at",
          "issuer_key_id", "signature"}) {
        if (!j.is_object() || !j.contains(field)) {
            throw Error(Errc::SchemaError,
                        std::string("certificate: missing field '") + field + "'");
        }
    }
    Certificate cert;
    cert.certificate_id = j.at("certificate_id").get<std::string>();
    cert.deployment_id = j.at("deployment_id").get<std::string>();
    cert.scope_statement = j.at("scope_statement").get<std::string>();
    cert.policy_id = j.at("policy_id").get<std::string>();
    cert.policy_version = j.at("policy_version").get<std::string>();
    auto outcome = outcome_from_string(j.at("outcome").get<std::string>());
    if (!outcome) {
        throw Error(Errc::SchemaError, "unknown outcome: " + j.at("outcome").get<std::string>());
    }
    cert.outcome = *outcome;
    for (const auto& cj : j.at("conditions")) {
        cert.conditions.push_back(condition_from_json(cj));
    }
    cert.audit_package_hash = j.at("audit_package_hash").get<std::string>();
    cert.issued_at = j.at("issued_at").get<std::int64_t>();
    cert.expires_at = j.at("expires_at").get<std::int64_t>();
    if (cert.issued_at >= cert.expires_at) {
        throw Error(Errc::InvariantError, "certificate must expire after issuance");
    }
    cert.issuer_key_id = j.at("issuer_key_id").get<std::string>();
    cert.signature = j.at("signature").get<std::string>();
    return cert;
}

Certificate issue_certificate(const AuditPackage& pkg, const Policy& policy,
                              std::string_view signing_seed_hex, int validity_days,
                              std::int64_t clock) {
    if (pkg.decision.outcome == Outcome::Denied) {
        throw Error(Errc::DeniedDeployment, "a DENIED decision cannot be certified");
    }
    if (validity_days < 1) {
        throw Error(Errc::InvariantError, "validity_days must be >= 1");
    }
    auto keys = crypto::keypair_from_seed_hex(signing_seed_hex);

    Certificate cert;
    cert.deployment_id = pkg.deployment.deployment_id;
    cert.scope_statement = pkg.deployment.scope_statement;
    cert.policy_id = policy.policy_id;
    cert.policy_version = pkg.policy_version;
    cert.outcome = pkg.decision.outcome;
    cert.conditions = pkg.decision.conditions;
    cert.audit_package_hash = audit_package_hash(pkg);
    cert.issued_at = clock;
    cert.expires_at = clock + static_cast<std::int64_t>(validity_days) * 86400;
    cert.issuer_key_id = crypto::key_id(keys.public_hex);

    Json id_material{{"package", cert.audit_package_hash}, {"issued_at", cert.issued_at}};
    cert.certificate_id = "cert-" + crypto::sha256_hex(canonicalize(id_material)).substr(0, 24);

    cert.signature = crypto::sign_hex(certificate_signing_bytes(cert), signing_seed_hex);
    return cert;
}

const char* to_string(RevocationAction a) {
    switch (a) {
        case RevocationAction::Revoke: return "REVOKE";
        case RevocationAction::Suspend: return "SUSPEND";
        case RevocationAction::Reinstate: return "REINSTATE";
    }
    return "?";
}

std::optional<RevocationAction> revocation_action_from_string(std::string_view name) {
    for (RevocationAction a :
         {RevocationAction::Revoke, RevocationAction::Suspend, RevocationAction::Reinstate}) {
        if (name == to_string(a)) return a;
    }
    return std::nullopt;
}

const char* to_string(RevocationReason r) {
    switch (r) {
        case RevocationReason::MaterialIncident: return "MaterialIncident";
        case RevocationReason::EvidenceInvalid: return "EvidenceInvalid";
        case RevocationReason::ScopeChange: return "ScopeChange";
        case RevocationReason::PolicyUpdate: return "PolicyUpdate";
    }
    return "?";
}

std::optional<RevocationReason> revocation_reason_from_string(std::string_view name) {
    for (RevocationReason r :
         {RevocationReason::MaterialIncident, RevocationReason::EvidenceInvalid,
          RevocationReason::ScopeChange, RevocationReason::PolicyUpdate}) {
        if (name == to_string(r)) return r;
    }
    return std::nullopt;
}

std::string revocation_signing_bytes(const RevocationRecord& rec) {
    Json j{
        {"certificate_id", rec.certificate_id},
        {"action", to_string(rec.action)},
        {"reason", to_string(rec.reason)},
        {"timestamp", rec.timestamp},
        {"issuer_key_id", rec.issuer_key_id},
    };
    return canonicalize(j);
}

Json to_json(const RevocationRecord& rec) {
    Json j = parse_canonical(revocation_signing_bytes(rec));
    j["signature"] = rec.signature;
    return j;
}

RevocationRecord revocation_record_from_json(const Json& j) {
    for (const char* field :
         {"certificate_id", "action", "reason", "timestamp", "issuer_key_id", "signature"}) {
        if (!j.is_object() || !j.contains(field)) {
            throw Error(Errc::SchemaError,
                        std::string("revocation record: missing field '") + field + "'");
        }
    }
    RevocationRecord rec;
    rec.certificate_id = j.at("certificate_id").get<std::string>();
    auto action = revocation_action_from_string(j.at("action").get<std::string>());
    if (!action) {
        throw Error(Errc::SchemaError, "unknown action: " + j.at("action").get<std::string>());
    }
    rec.action = *action;
    auto reason = revocation_reason_from_string(j.at("reason").get<std::string>());
    if (!reason) {
        throw Error(Errc::SchemaError, "unknown reason: " + j.at("reason").get<std::string>());
    }
    rec.reason = *reason;
    rec.timestamp = j.at("timestamp").get<std::int64_t>();
    rec.issuer_key_id = j.at("issuer_key_id").get<std::string>();
    rec.signature = j.at("signature").get<std::string>();
    return rec;
}

RevocationRecord revoke_certificate(std::string_view certificate_id, RevocationAction action,
                                    RevocationReason reason, std::string_view signing_seed_hex,
                                    std::int64_t clock) {
    auto keys = crypto::keypair_from_seed_hex(signing_seed_hex);
    RevocationRecord rec;
    rec.certificate_id = std::string(certificate_id);
    rec.action = action;
    rec.reason = reason;
    rec.timestamp = clock;
    rec.issuer_key_id = crypto::key_id(keys.public_hex);
    rec.signature = crypto::sign_hex(revocation_signing_bytes(rec), signing_seed_hex);
    return rec;
}

Json to_json(const VerificationReport& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks) {
        checks.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    return Json{{"valid", r.valid}, {"checks", checks}};
}

VerificationReport verify_certificate(const Certificate& cert, std::string_view issuer_public_hex,
                                      const AuditPackage* pkg, const LogQuery* log,
                                      std::int64_t clock) {
    VerificationReport report;

    bool sig_ok =
        crypto::verify_signature(certificate_signing_bytes(cert), cert.signature, issuer_public_hex);
    report.checks.push_back(
        {"signature", sig_ok, sig_ok ? "Ed25519 signature verifies" : "signature does not verify"});

    bool unexpired = clock < cert.expires_at;
    report.checks.push_back({"expiry", unexpired,
                             unexpired ? "certificate is unexpired"
                                       : "expired at " + std::to_string(cert.expires_at)});

    if (pkg != nullptr) {
        std::string recomputed = audit_package_hash(*pkg);
        bool match = recomputed == cert.audit_package_hash;
        report.checks.push_back({"audit_package_hash", match,
                                 match ? "package hash matches"
                                       : "package hashes to " + recomputed});
    }

    if (log != nullptr) {
        bool included = log->issuance_included(cert.certificate_id);
        report.checks.push_back({"log_inclusion", included,
                                 included ? "issuance present with verifying inclusion proof"
                                          : "issuance not found in log"});
        std::string status = log->status_name(cert.certificate_id, clock);
        bool active = status == "ACTIVE";
        report.checks.push_back({"status", active, "log status is " + status});
    }

    report.valid = true;
    for (const auto& c : report.checks) report.valid = report.valid && c.passed;
    return report;
}

} // namespace deployauth
