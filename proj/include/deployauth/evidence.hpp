#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "deployauth/artefact.hpp"
#include "deployauth/policy.hpp"

namespace deployauth {

// Content-addressed object store: objects/<hh>/<remaining-62-hex>. Writes are
// idempotent (same bytes, same hash, one object); every read re-hashes the
// stored bytes and fails closed on mismatch.
class ObjectStore {
public:
    explicit ObjectStore(std::filesystem::path root);

    // Errors: EmptyArtefact, StorageFailure.
    ArtefactRef put(std::string_view bytes, ArtefactKind kind, std::int64_t timestamp,
                    std::string label);

    // Errors: NotFound, IntegrityViolation (stored bytes no longer match).
    std::string get(std::string_view content_hash) const;

    bool contains(std::string_view content_hash) const;
    std::size_t object_count() const;
    std::filesystem::path object_path(std::string_view content_hash) const;
    const std::filesystem::path& root() const { return root_; }

private:
    std::filesystem::path root_;
};

// Append-only ordered artefact list for one deployment. Entries only grow;
// insertion order is fingerprint-relevant.
struct EvidenceBundle {
    std::string bundle_id;
    std::string deployment_id;
    std::vector<ArtefactRef> entries;
    bool operator==(const EvidenceBundle&) const = default;
};

// Errors: UnknownArtefact (object not in store), DuplicateEntry (content hash
// already present in the bundle).
EvidenceBundle append_to_bundle(const EvidenceBundle& bundle, const ArtefactRef& ref,
                                const ObjectStore& store);

// Canonical encoding of the ordered entry list; the on-disk manifest file
// holds exactly these bytes so external tools can re-hash it.
Json manifest_json(const EvidenceBundle& bundle);
std::string manifest_bytes(const EvidenceBundle& bundle);

// SHA-256 hex over the canonical entry list; changes iff any entry or the
// order changes.
std::string bundle_fingerprint(const EvidenceBundle& bundle);

struct RequirementResult {
    EvidenceRequirement requirement;
    int found_count = 0;
    int fresh_count = 0;
    bool satisfied = false;
};

struct SufficiencyReport {
    bool satisfied = false;
    std::vector<RequirementResult> per_requirement;
    MissingEvidenceAction action_on_failure = MissingEvidenceAction::Deny;
};

Json to_json(const SufficiencyReport& r);

// Pre-scoring gate: verifies every bundle entry's integrity, then counts
// artefacts per requirement. An artefact is fresh iff the requirement has no
// max_age_days or (now - timestamp) <= max_age_days.
// Errors: IntegrityViolation (propagated; sufficiency is undefined over
// tampered evidence).
SufficiencyReport check_sufficiency(const EvidenceBundle& bundle, const Policy& policy,
                                    const ObjectStore& store, std::int64_t now);

} // namespace deployauth
