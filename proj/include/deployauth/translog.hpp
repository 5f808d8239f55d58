#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "deployauth/certification.hpp"
#include "deployauth/merkle.hpp"

namespace deployauth {

enum class EntryType { Issuance, RevocationEvent };

const char* to_string(EntryType t);
std::optional<EntryType> entry_type_from_string(std::string_view name);

// One log leaf: the canonical bytes of a Certificate or RevocationRecord,
// wrapped with its type. leaf hash is SHA-256(0x00 || payload).
struct LogEntry {
    EntryType entry_type = EntryType::Issuance;
    std::string payload; // canonical bytes of the wrapped object
    bool operator==(const LogEntry&) const = default;
};

Json to_json(const LogEntry& e);
LogEntry log_entry_from_json(const Json& j);
std::string leaf_hash_hex(const LogEntry& e);

// Signed commitment to a log prefix.
struct SignedTreeHead {
    std::uint64_t tree_size = 0;
    std::string root_hash; // hex
    std::int64_t timestamp = 0;
    std::string signature; // over canonical {root_hash, timestamp, tree_size}
    bool operator==(const SignedTreeHead&) const = default;
};

Json to_json(const SignedTreeHead& sth);
SignedTreeHead sth_from_json(const Json& j);
std::string sth_signing_bytes(const SignedTreeHead& sth);
bool verify_sth(const SignedTreeHead& sth, std::string_view issuer_public_hex);

struct InclusionProof {
    std::uint64_t leaf_index = 0;
    std::uint64_t tree_size = 0;
    std::vector<std::string> audit_path; // hex hashes, leaf to root
};

struct ConsistencyProof {
    std::uint64_t old_size = 0;
    std::uint64_t new_size = 0;
    std::vector<std::string> path; // hex hashes
};

Json to_json(const InclusionProof& p);
InclusionProof inclusion_proof_from_json(const Json& j);
Json to_json(const ConsistencyProof& p);
ConsistencyProof consistency_proof_from_json(const Json& j);

bool verify_inclusion(const InclusionProof& proof, std::string_view leaf_hash_hex,
                      const SignedTreeHead& sth);
bool verify_consistency(const ConsistencyProof& proof, const SignedTreeHead& old_sth,
                        const SignedTreeHead& new_sth);

enum class CertificateStatus { Active, Suspended, Revoked, Expired, Unknown };
const char* to_string(CertificateStatus s);

// Append-only Merkle log of issuance and revocation events. Single writer;
// any number of readers over committed prefixes. When constructed with a
// directory the log persists each entry as a length-prefixed canonical record
// plus the latest STH, and replays (and integrity-checks) them on open.
class TransparencyLog : public LogQuery {
public:
    // In-memory log.
    explicit TransparencyLog(std::string signing_seed_hex);
    // Persistent log. Errors: StorageFailure, IntegrityViolation (stored
    // records or STH no longer match on replay).
    TransparencyLog(std::filesystem::path dir, std::string signing_seed_hex);

    // Keyless view for verifiers and the status service: proofs, status and
    // the persisted STH work; append and head signing do not.
    static TransparencyLog open_read_only(std::filesystem::path dir);

    bool can_sign() const { return keys_.has_value(); }

    // Appends the entry, persists it, and issues a fresh STH.
    // Errors: InvalidKey on a read-only log.
    std::pair<std::uint64_t, SignedTreeHead> append(const LogEntry& entry, std::int64_t clock);

    std::uint64_t tree_size() const { return leaves_.size(); }
    // Signs the current root. Errors: InvalidKey on a read-only log.
    SignedTreeHead head(std::int64_t clock) const;
    std::optional<SignedTreeHead> latest_sth() const { return latest_sth_; }
    const LogEntry& entry_at(std::uint64_t index) const;

    // Errors: IndexOutOfRange / SizeOutOfRange.
    InclusionProof prove_inclusion(std::uint64_t leaf_index, std::uint64_t tree_size) const;
    ConsistencyProof prove_consistency(std::uint64_t old_size, std::uint64_t new_size) const;

    // Replays this certificate's entries in leaf order; REVOKED is terminal.
    CertificateStatus status(std::string_view certificate_id, std::int64_t clock) const;

    // LogQuery
    bool issuance_included(std::string_view certificate_id) const override;
    std::string status_name(std::string_view certificate_id, std::int64_t clock) const override;

    std::string public_key_hex() const; // Errors: InvalidKey on a read-only log

private:
    TransparencyLog() = default;
    void persist(const LogEntry& entry, const SignedTreeHead& sth);
    void load();

    std::optional<std::filesystem::path> dir_;
    std::optional<crypto::KeyPair> keys_;
    std::vector<LogEntry> entries_;
    std::vector<merkle::Hash32> leaves_;
    std::optional<SignedTreeHead> latest_sth_;
};

} // namespace deployauth
