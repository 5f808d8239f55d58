#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "deployauth/certification.hpp"
#include "deployauth/home.hpp"
#include "deployauth/translog.hpp"

namespace deployauth {

struct AssessmentResult {
    Decision decision;
    AuditPackage package;
    std::string package_hash;
    std::filesystem::path package_path;
    std::optional<Certificate> certificate;
    std::optional<std::filesystem::path> certificate_path;
    std::optional<std::uint64_t> log_index;
    std::optional<SignedTreeHead> sth;
};

// Drives the full pipeline over one engine home: ingest evidence, resolve
// policies, authorize, assemble audit packages, issue certificates, append
// log events. Mutating operations hold the home's write lock.
class Engine {
public:
    explicit Engine(EngineHome home);

    const EngineHome& home() const { return home_; }
    ObjectStore& store() { return store_; }
    const PolicyRegistry& registry() const { return registry_; }
    TransparencyLog& log() { return log_; }

    // Parses, canonicalizes and persists a policy document under its
    // fingerprint. Returns the parsed policy.
    Policy add_policy(std::string_view bytes);

    ArtefactRef put_artefact(std::string_view bytes, ArtefactKind kind, std::int64_t timestamp,
                             std::string label);

    void create_bundle(std::string_view bundle_id, std::string_view deployment_id);
    // Errors: NotFound (no such bundle), HashMismatch (manifest file was
    // altered on disk).
    EvidenceBundle load_bundle(std::string_view bundle_id) const;
    EvidenceBundle append_to_bundle(std::string_view bundle_id, const ArtefactRef& ref);

    // authorize -> assemble package -> (when approved) issue certificate and
    // append the issuance to the log. Everything lands under the home before
    // returning.
    AssessmentResult assess(const DeploymentDescriptor& deployment, std::string_view bundle_id,
                            std::string_view jurisdiction, std::string_view domain,
                            std::optional<std::string_view> policy_version, std::int64_t clock,
                            int validity_days);

    // Signs a revocation record and appends it to the log.
    std::pair<RevocationRecord, SignedTreeHead> revoke(std::string_view certificate_id,
                                                       RevocationAction action,
                                                       RevocationReason reason,
                                                       std::int64_t clock);

    CertificateStatus certificate_status(std::string_view certificate_id, std::int64_t clock) const;

    // Scans certs/ for a certificate with this id. Errors: NotFound.
    Certificate find_certificate(std::string_view certificate_id) const;

private:
    void save_bundle(const EvidenceBundle& bundle);

    EngineHome home_;
    ObjectStore store_;
    PolicyRegistry registry_;
    TransparencyLog log_;
};

} // namespace deployauth
