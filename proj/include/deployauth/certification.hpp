#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "deployauth/core.hpp"
#include "deployauth/decision.hpp"
#include "deployauth/evidence.hpp"
#include "deployauth/policy.hpp"

namespace deployauth {

// The complete hashed record behind one authorisation: what was decided,
// under which policy, over which evidence. Any third party can recompute the
// component hashes from the package contents alone.
struct AuditPackage {
    std::string package_id;
    std::string policy_fingerprint;
    std::string policy_version;
    DeploymentDescriptor deployment;
    std::vector<ArtefactRef> bundle_manifest;
    std::string bundle_fingerprint;
    std::optional<ScoreVector> score_vector; // absent when denied before scoring
    Decision decision;
    std::map<std::string, std::string> component_hashes; // policy/deployment/manifest/decision
    bool operator==(const AuditPackage&) const = default;
};

// Errors: HashMismatch when the decision's recorded policy fingerprint is not
// this policy's, or the bundle fingerprint disagrees with the manifest.
AuditPackage assemble_audit_package(const Policy& policy, const DeploymentDescriptor& deployment,
                                    const EvidenceBundle& bundle, const Decision& decision);

Json to_json(const AuditPackage& pkg);
AuditPackage audit_package_from_json(const Json& j);

// SHA-256 hex over the package's canonical encoding.
std::string audit_package_hash(const AuditPackage& pkg);

struct VerificationCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Recomputes every component hash from the package contents; one check per
// component plus the manifest/bundle_fingerprint agreement.
std::vector<VerificationCheck> verify_audit_package(const AuditPackage& pkg);

// A machine-readable license to operate, bound to its audit package by hash
// and signed over the canonical encoding of everything except the signature
// field (omitted entirely while signing).
struct Certificate {
    std::string certificate_id;
    std::string deployment_id;
    std::string scope_statement;
    std::string policy_id;
    std::string policy_version;
    Outcome outcome = Outcome::Approved;
    std::vector<Condition> conditions;
    std::string audit_package_hash;
    std::int64_t issued_at = 0;
    std::int64_t expires_at = 0;
    std::string issuer_key_id;
    std::string signature; // 128 hex chars (64-byte Ed25519)
    bool operator==(const Certificate&) const = default;
};

Json to_json(const Certificate& cert);
Certificate certificate_from_json(const Json& j);
std::string certificate_signing_bytes(const Certificate& cert); // canonical, signature omitted

// Errors: DeniedDeployment (refuses to certify DENIED), InvalidKey.
Certificate issue_certificate(const AuditPackage& pkg, const Policy& policy,
                              std::string_view signing_seed_hex, int validity_days,
                              std::int64_t clock);

enum class RevocationAction { Revoke, Suspend, Reinstate };
enum class RevocationReason { MaterialIncident, EvidenceInvalid, ScopeChange, PolicyUpdate };

const char* to_string(RevocationAction a);
std::optional<RevocationAction> revocation_action_from_string(std::string_view name);
const char* to_string(RevocationReason r);
std::optional<RevocationReason> revocation_reason_from_string(std::string_view name);

struct RevocationRecord {
    std::string certificate_id;
    RevocationAction action = RevocationAction::Revoke;
    RevocationReason reason = RevocationReason::MaterialIncident;
    std::int64_t timestamp = 0;
    std::string issuer_key_id;
    std::string signature;
    bool operator==(const RevocationRecord&) const = default;
};

Json to_json(const RevocationRecord& rec);
RevocationRecord revocation_record_from_json(const Json& j);
std::string revocation_signing_bytes(const RevocationRecord& rec);

// Errors: InvalidKey. The record takes effect only once appended to the
// transparency log.
RevocationRecord revoke_certificate(std::string_view certificate_id, RevocationAction action,
                                    RevocationReason reason, std::string_view signing_seed_hex,
                                    std::int64_t clock);

// Read-only view of a transparency log, used by certificate verification so
// the verifier does not depend on the log implementation.
class LogQuery {
public:
    virtual ~LogQuery() = default;
    // True iff an issuance for this certificate is present and its inclusion
    // proof verifies against the current tree head.
    virtual bool issuance_included(std::string_view certificate_id) const = 0;
    // ACTIVE / SUSPENDED / REVOKED / EXPIRED / UNKNOWN
    virtual std::string status_name(std::string_view certificate_id, std::int64_t clock) const = 0;
};

struct VerificationReport {
    bool valid = false;
    std::vector<VerificationCheck> checks;
};

Json to_json(const VerificationReport& r);

// Independent checks over public material: signature, expiry, audit-package
// binding (when a package is supplied), log inclusion and status (when a log
// view is supplied). Failures are report entries, never exceptions.
VerificationReport verify_certificate(const Certificate& cert, std::string_view issuer_public_hex,
                                      const AuditPackage* pkg, const LogQuery* log,
                                      std::int64_t clock);

} // namespace deployauth
