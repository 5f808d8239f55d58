#include "deployauth/engine.hpp"

#include "deployauth/crypto.hpp"
#include "deployauth/errors.hpp"

namespace deployauth {

namespace fs = std::filesystem;

Engine::Engine(EngineHome home)
    : home_(std::move(home)), store_(home_.objects()),
      log_(home_.log_dir(), home_.issuer_seed_hex()) {
    for (const auto& entry : fs::directory_iterator(home_.policies())) {
        if (!entry.is_regular_file()) continue;
        registry_.add(parse_policy(read_file(entry.path())));
    }
}

Policy Engine::add_policy(std::string_view bytes) {
    WriteLock lock(home_);
    Policy policy = parse_policy(bytes);
    registry_.add(policy);
    write_file(home_.policies() / policy_fingerprint(policy), serialize_policy(policy));
    return policy;
}

ArtefactRef Engine::put_artefact(std::string_view bytes, ArtefactKind kind,
                                 std::int64_t timestamp, std::string label) {
    WriteLock lock(home_);
    return store_.put(bytes, kind, timestamp, std::move(label));
}

void Engine::create_bundle(std::string_view bundle_id, std::string_view deployment_id) {
    WriteLock lock(home_);
    if (bundle_id.empty()) {
        throw Error(Errc::InvariantError, "bundle id must be non-empty");
    }
    if (fs::exists(home_.bundles() / bundle_id)) {
        throw Error(Errc::DuplicateEntry, "bundle already exists: " + std::string(bundle_id));
    }
    EvidenceBundle bundle{std::string(bundle_id), std::string(deployment_id), {}};
    save_bundle(bundle);
}

EvidenceBundle Engine::load_bundle(std::string_view bundle_id) const {
    fs::path manifest_path = home_.bundles() / bundle_id;
    std::string manifest = read_file(manifest_path);

    EvidenceBundle bundle;
    bundle.bundle_id = std::string(bundle_id);
    Json info = parse_canonical(read_file(home_.bundles() / (std::string(bundle_id) + ".info")));
    bundle.deployment_id = info.value("deployment_id", "");
    for (const auto& rj : parse_canonical(manifest)) {
        bundle.entries.push_back(artefact_ref_from_json(rj));
    }
    // The manifest file must be bit-exact: its own hash is the fingerprint.
    if (crypto::sha256_hex(manifest) != bundle_fingerprint(bundle)) {
        throw Error(Errc::HashMismatch,
                    "bundle manifest file was altered: " + manifest_path.string());
    }
    return bundle;
}

void Engine::save_bundle(const EvidenceBundle& bundle) {
    write_file(home_.bundles() / bundle.bundle_id, manifest_bytes(bundle));
    write_file(home_.bundles() / (bundle.bundle_id + ".info"),
               canonicalize(Json{{"bundle_id", bundle.bundle_id},
                                 {"deployment_id", bundle.deployment_id}}));
}

EvidenceBundle Engine::append_to_bundle(std::string_view bundle_id, const ArtefactRef& ref) {
    WriteLock lock(home_);
    EvidenceBundle bundle = load_bundle(bundle_id);
    EvidenceBundle next = deployauth::append_to_bundle(bundle, ref, store_);
    save_bundle(next);
    return next;
}

AssessmentResult Engine::assess(const DeploymentDescriptor& deployment,
                                std::string_view bundle_id, std::string_view jurisdiction,
                                std::string_view domain,
                                std::optional<std::string_view> policy_version,
                                std::int64_t clock, int validity_days) {
    WriteLock lock(home_);

    auto findings = validate_deployment(deployment);
    if (!findings.empty()) {
        std::string detail;
        for (const auto& f : findings) {
            if (!detail.empty()) detail += "; ";
            detail += f.field + ": " + f.rule;
        }
        throw Error(Errc::InvariantError, "invalid deployment descriptor: " + detail);
    }

    const Policy& policy = registry_.resolve(jurisdiction, domain, policy_version);
    EvidenceBundle bundle = load_bundle(bundle_id);
    if (bundle.deployment_id != deployment.deployment_id) {
        throw Error(Errc::InvariantError,
                    "bundle " + bundle.bundle_id + " belongs to deployment " +
                        bundle.deployment_id + ", not " + deployment.deployment_id);
    }

    AssessmentResult result;
    result.decision = authorize(deployment, bundle, policy, store_, clock);
    result.package = assemble_audit_package(policy, deployment, bundle, result.decision);
    result.package_hash = audit_package_hash(result.package);
    result.package_path = home_.packages() / result.package_hash;
    write_file(result.package_path, canonicalize(to_json(result.package)));

    if (result.decision.outcome != Outcome::Denied) {
        Certificate cert = issue_certificate(result.package, policy, home_.issuer_seed_hex(),
                                             validity_days, clock);
        std::string cert_bytes = canonicalize(to_json(cert));
        result.certificate_path = home_.certs() / crypto::sha256_hex(cert_bytes);
        write_file(*result.certificate_path, cert_bytes);

        auto [index, sth] =
            log_.append(LogEntry{EntryType::Issuance, canonicalize(to_json(cert))}, clock);
        result.log_index = index;
        result.sth = sth;
        result.certificate = std::move(cert);
    }
    return result;
}

std::pair<RevocationRecord, SignedTreeHead> Engine::revoke(std::string_view certificate_id,
                                                           RevocationAction action,
                                                           RevocationReason reason,
                                                           std::int64_t clock) {
    WriteLock lock(home_);
    RevocationRecord record =
        revoke_certificate(certificate_id, action, reason, home_.issuer_seed_hex(), clock);
    std::string record_bytes = canonicalize(to_json(record));
    write_file(home_.certs() / crypto::sha256_hex(record_bytes), record_bytes);
    auto [index, sth] =
        log_.append(LogEntry{EntryType::RevocationEvent, record_bytes}, clock);
    (void)index;
    return {record, sth};
}

CertificateStatus Engine::certificate_status(std::string_view certificate_id,
                                             std::int64_t clock) const {
    return log_.status(certificate_id, clock);
}

Certificate Engine::find_certificate(std::string_view certificate_id) const {
    for (const auto& entry : fs::directory_iterator(home_.certs())) {
        if (!entry.is_regular_file()) continue;
        Json j;
        try {
            j = parse_canonical(read_file(entry.path()));
        } catch (const Error&) {
            continue;
        }
        if (!j.is_object() || j.value("certificate_id", "") != certificate_id ||
            !j.contains("outcome")) {
            continue; // revocation records share the directory
        }
        return certificate_from_json(j);
    }
    throw Error(Errc::NotFound, "no certificate " + std::string(certificate_id));
}

} // namespace deployauth
