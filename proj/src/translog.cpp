#include "deployauth/translog.hpp"

#include <fstream>

#include "deployauth/errors.hpp"

namespace deployauth {

namespace fs = std::filesystem;

const char* to_string(EntryType t) {
    switch (t) {
        case EntryType::Issuance: return "ISSUANCE";
        case EntryType::RevocationEvent: return "REVOCATION_EVENT";
    }
    return "?";
}

std::optional<EntryType> entry_type_from_string(std::string_view name) {
    if (name == "ISSUANCE") return EntryType::Issuance;
    if (name == "REVOCATION_EVENT") return EntryType::RevocationEvent;
    return std::nullopt;
}

Json to_json(const LogEntry& e) {
    return Json{{"entry_type", to_string(e.entry_type)},
                {"payload", parse_canonical(e.payload)}};
}

LogEntry log_entry_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("entry_type") || !j.contains("payload")) {
        throw Error(Errc::SchemaError, "log entry needs entry_type/payload");
    }
    auto type = entry_type_from_string(j.at("entry_type").get<std::string>());
    if (!type) {
        throw Error(Errc::SchemaError,
                    "unknown entry type: " + j.at("entry_type").get<std::string>());
    }
    return LogEntry{*type, canonicalize(j.at("payload"))};
}

std::string leaf_hash_hex(const LogEntry& e) {
    return crypto::to_hex(merkle::leaf_hash(e.payload));
}

std::string sth_signing_bytes(const SignedTreeHead& sth) {
    return canonicalize(Json{{"tree_size", sth.tree_size},
                             {"root_hash", sth.root_hash},
                             {"timestamp", sth.timestamp}});
}

Json to_json(const SignedTreeHead& sth) {
    Json j = parse_canonical(sth_signing_bytes(sth));
    j["signature"] = sth.signature;
    return j;
}

SignedTreeHead sth_from_json(const Json& j) {
    for (const char* field : {"tree_size", "root_hash", "timestamp", "signature"}) {
        if (!j.is_object() || !j.contains(field)) {
            throw Error(Errc::SchemaError, std::string("sth: missing field '") + field + "'");
        }
    }
    SignedTreeHead sth;
    sth.tree_size = j.at("tree_size").get<std::uint64_t>();
    sth.root_hash = j.at("root_hash").get<std::string>();
    sth.timestamp = j.at("timestamp").get<std::int64_t>();
    sth.signature = j.at("signature").get<std::string>();
    return sth;
}

bool verify_sth(const SignedTreeHead& sth, std::string_view issuer_public_hex) {
    return crypto::verify_signature(sth_signing_bytes(sth), sth.signature, issuer_public_hex);
}

Json to_json(const InclusionProof& p) {
    return Json{{"leaf_index", p.leaf_index},
                {"tree_size", p.tree_size},
                {"audit_path", p.audit_path}};
}

InclusionProof inclusion_proof_from_json(const Json& j) {
    for (const char* field : {"leaf_index", "tree_size", "audit_path"}) {
        if (!j.is_object() || !j.contains(field)) {
            throw Error(Errc::SchemaError,
                        std::string("inclusion proof: missing field '") + field + "'");
        }
    }
    InclusionProof p;
    p.leaf_index = j.at("leaf_index").get<std::uint64_t>();
    p.tree_size = j.at("tree_size").get<std::uint64_t>();
    p.audit_path = j.at("audit_path").get<std::vector<std::string>>();
    return p;
}

Json to_json(const ConsistencyProof& p) {
    return Json{{"old_size", p.old_size}, {"new_size", p.new_size}, {"path", p.path}};
}

ConsistencyProof consistency_proof_from_json(const Json& j) {
    for (const char* field : {"old_size", "new_size", "path"}) {
        if (!j.is_object() || !j.contains(field)) {
            throw Error(Errc::SchemaError,
                        std::string("consistency proof: missing field '") + field + "'");
        }
    }
    ConsistencyProof p;
    p.old_size = j.at("old_size").get<std::uint64_t>();
    p.new_size = j.at("new_size").get<std::uint64_t>();
    p.path = j.at("path").get<std::vector<std::string>>();
    return p;
}

namespace {

merkle::Hash32 hash_from_hex(std::string_view hex) {
    auto bytes = crypto::from_hex(hex);
    if (bytes.size() != 32) {
        throw Error(Errc::InvalidKey, "hash must be 32 bytes");
    }
    merkle::Hash32 h{};
    std::copy(bytes.begin(), bytes.end(), h.begin());
    return h;
}

std::vector<merkle::Hash32> hashes_from_hex(const std::vector<std::string>& hex_list) {
    std::vector<merkle::Hash32> out;
    out.reserve(hex_list.size());
    for (const auto& h : hex_list) out.push_back(hash_from_hex(h));
    return out;
}

std::vector<std::string> hashes_to_hex(const std::vector<merkle::Hash32>& hashes) {
    std::vector<std::string> out;
    out.reserve(hashes.size());
    for (const auto& h : hashes) out.push_back(crypto::to_hex(h));
    return out;
}

} // namespace

bool verify_inclusion(const InclusionProof& proof, std::string_view leaf_hex,
                      const SignedTreeHead& sth) {
    if (proof.tree_size != sth.tree_size) return false;
    merkle::Hash32 leaf;
    merkle::Hash32 root;
    std::vector<merkle::Hash32> path;
    try {
        leaf = hash_from_hex(leaf_hex);
        root = hash_from_hex(sth.root_hash);
        path = hashes_from_hex(proof.audit_path);
    } catch (const Error&) {
        return false;
    }
    return merkle::verify_inclusion(proof.leaf_index, proof.tree_size, leaf, path, root);
}

bool verify_consistency(const ConsistencyProof& proof, const SignedTreeHead& old_sth,
                        const SignedTreeHead& new_sth) {
    if (proof.old_size != old_sth.tree_size || proof.new_size != new_sth.tree_size) return false;
    merkle::Hash32 old_root;
    merkle::Hash32 new_root;
    std::vector<merkle::Hash32> path;
    try {
        old_root = hash_from_hex(old_sth.root_hash);
        new_root = hash_from_hex(new_sth.root_hash);
        path = hashes_from_hex(proof.path);
    } catch (const Error&) {
        return false;
    }
    return merkle::verify_consistency(proof.old_size, proof.new_size, path, old_root, new_root);
}

const char* to_string(CertificateStatus s) {
    switch (s) {
        case CertificateStatus::Active: return "ACTIVE";
        case CertificateStatus::Suspended: return "SUSPENDED";
        case CertificateStatus::Revoked: return "REVOKED";
        case CertificateStatus::Expired: return "EXPIRED";
        case CertificateStatus::Unknown: return "UNKNOWN";
    }
    return "?";
}

TransparencyLog::TransparencyLog(std::string signing_seed_hex) {
    keys_ = crypto::keypair_from_seed_hex(signing_seed_hex);
}

TransparencyLog::TransparencyLog(fs::path dir, std::string signing_seed_hex) {
    keys_ = crypto::keypair_from_seed_hex(signing_seed_hex);
    dir_ = std::move(dir);
    std::error_code ec;
    fs::create_directories(*dir_, ec);
    if (ec) {
        throw Error(Errc::StorageFailure, "cannot create log directory " + dir_->string());
    }
    load();
}

TransparencyLog TransparencyLog::open_read_only(fs::path dir) {
    TransparencyLog log;
    log.dir_ = std::move(dir);
    log.load();
    return log;
}

std::string TransparencyLog::public_key_hex() const {
    if (!keys_) {
        throw Error(Errc::InvalidKey, "log opened without a key");
    }
    return keys_->public_hex;
}

SignedTreeHead TransparencyLog::head(std::int64_t clock) const {
    if (!keys_) {
        throw Error(Errc::InvalidKey, "cannot sign a tree head without a key");
    }
    SignedTreeHead sth;
    sth.tree_size = leaves_.size();
    sth.root_hash = crypto::to_hex(merkle::root(leaves_));
    sth.timestamp = clock;
    sth.signature = crypto::sign_hex(sth_signing_bytes(sth), keys_->seed_hex);
    return sth;
}

std::pair<std::uint64_t, SignedTreeHead> TransparencyLog::append(const LogEntry& entry,
                                                                 std::int64_t clock) {
    // Validates the payload is canonical before committing.
    std::string canonical_payload = canonicalize(parse_canonical(entry.payload));
    if (canonical_payload != entry.payload) {
        throw Error(Errc::InvariantError, "log entry payload must be canonical bytes");
    }
    std::uint64_t index = leaves_.size();
    entries_.push_back(entry);
    leaves_.push_back(merkle::leaf_hash(entry.payload));
    SignedTreeHead sth = head(clock);
    latest_sth_ = sth;
    if (dir_) persist(entry, sth);
    return {index, sth};
}

const LogEntry& TransparencyLog::entry_at(std::uint64_t index) const {
    if (index >= entries_.size()) {
        throw Error(Errc::IndexOutOfRange, std::to_string(index));
    }
    return entries_[index];
}

InclusionProof TransparencyLog::prove_inclusion(std::uint64_t leaf_index,
                                                std::uint64_t tree_size) const {
    if (tree_size > leaves_.size()) {
        throw Error(Errc::IndexOutOfRange,
                    "tree size " + std::to_string(tree_size) + " exceeds log size");
    }
    InclusionProof proof;
    proof.leaf_index = leaf_index;
    proof.tree_size = tree_size;
    proof.audit_path = hashes_to_hex(merkle::inclusion_path(leaves_, leaf_index, tree_size));
    return proof;
}

ConsistencyProof TransparencyLog::prove_consistency(std::uint64_t old_size,
                                                    std::uint64_t new_size) const {
    if (new_size > leaves_.size()) {
        throw Error(Errc::SizeOutOfRange,
                    "tree size " + std::to_string(new_size) + " exceeds log size");
    }
    ConsistencyProof proof;
    proof.old_size = old_size;
    proof.new_size = new_size;
    proof.path = hashes_to_hex(merkle::consistency_path(leaves_, old_size, new_size));
    return proof;
}

CertificateStatus TransparencyLog::status(std::string_view certificate_id,
                                          std::int64_t clock) const {
    CertificateStatus state = CertificateStatus::Unknown;
    std::optional<std::int64_t> expires_at;
    for (const auto& entry : entries_) {
        Json payload = parse_canonical(entry.payload);
        if (entry.entry_type == EntryType::Issuance) {
            if (payload.value("certificate_id", "") != certificate_id) continue;
            if (state != CertificateStatus::Revoked) state = CertificateStatus::Active;
            expires_at = payload.value("expires_at", std::int64_t{0});
        } else {
            if (payload.value("certificate_id", "") != certificate_id) continue;
            if (state == CertificateStatus::Revoked) continue; // terminal
            auto action = payload.value("action", "");
            if (action == "REVOKE") {
                state = CertificateStatus::Revoked;
            } else if (action == "SUSPEND") {
                state = CertificateStatus::Suspended;
            } else if (action == "REINSTATE") {
                state = CertificateStatus::Active;
            }
        }
    }
    if ((state == CertificateStatus::Active || state == CertificateStatus::Suspended) &&
        expires_at && clock >= *expires_at) {
        return CertificateStatus::Expired;
    }
    return state;
}

bool TransparencyLog::issuance_included(std::string_view certificate_id) const {
    for (std::uint64_t i = 0; i < entries_.size(); ++i) {
        const auto& entry = entries_[i];
        if (entry.entry_type != EntryType::Issuance) continue;
        Json payload = parse_canonical(entry.payload);
        if (payload.value("certificate_id", "") != certificate_id) continue;
        if (!latest_sth_) return false;
        auto proof = prove_inclusion(i, leaves_.size());
        return verify_inclusion(proof, leaf_hash_hex(entry), *latest_sth_);
    }
    return false;
}

std::string TransparencyLog::status_name(std::string_view certificate_id,
                                         std::int64_t clock) const {
    return to_string(status(certificate_id, clock));
}

namespace {

void write_u32_be(std::ofstream& out, std::uint32_t n) {
    char buf[4] = {static_cast<char>((n >> 24) & 0xff), static_cast<char>((n >> 16) & 0xff),
                   static_cast<char>((n >> 8) & 0xff), static_cast<char>(n & 0xff)};
    out.write(buf, 4);
}

} // namespace

void TransparencyLog::persist(const LogEntry& entry, const SignedTreeHead& sth) {
    std::string record = canonicalize(to_json(entry));
    {
        std::ofstream out(*dir_ / "records", std::ios::binary | std::ios::app);
        if (!out) {
            throw Error(Errc::StorageFailure, "cannot append to log records");
        }
        write_u32_be(out, static_cast<std::uint32_t>(record.size()));
        out.write(record.data(), static_cast<std::streamsize>(record.size()));
        if (!out) {
            throw Error(Errc::StorageFailure, "short write to log records");
        }
    }
    std::ofstream sth_out(*dir_ / "sth", std::ios::binary | std::ios::trunc);
    if (!sth_out) {
        throw Error(Errc::StorageFailure, "cannot write sth file");
    }
    std::string sth_bytes = canonicalize(to_json(sth));
    sth_out.write(sth_bytes.data(), static_cast<std::streamsize>(sth_bytes.size()));
}

void TransparencyLog::load() {
    fs::path records = *dir_ / "records";
    if (fs::exists(records)) {
        std::ifstream in(records, std::ios::binary);
        if (!in) {
            throw Error(Errc::StorageFailure, "cannot read log records");
        }
        while (true) {
            char len_buf[4];
            in.read(len_buf, 4);
            if (in.gcount() == 0) break;
            if (in.gcount() != 4) {
                throw Error(Errc::IntegrityViolation, "truncated log record length");
            }
            std::uint32_t len = (static_cast<std::uint32_t>(static_cast<unsigned char>(len_buf[0])) << 24) |
                                (static_cast<std::uint32_t>(static_cast<unsigned char>(len_buf[1])) << 16) |
                                (static_cast<std::uint32_t>(static_cast<unsigned char>(len_buf[2])) << 8) |
                                static_cast<std::uint32_t>(static_cast<unsigned char>(len_buf[3]));
            std::string record(len, '\0');
            in.read(record.data(), len);
            if (static_cast<std::uint32_t>(in.gcount()) != len) {
                throw Error(Errc::IntegrityViolation, "truncated log record");
            }
            LogEntry entry = log_entry_from_json(parse_canonical(record));
            entries_.push_back(entry);
            leaves_.push_back(merkle::leaf_hash(entry.payload));
        }
    }
    fs::path sth_path = *dir_ / "sth";
    if (fs::exists(sth_path)) {
        std::ifstream in(sth_path, std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        SignedTreeHead sth = sth_from_json(parse_canonical(bytes));
        if (sth.tree_size != leaves_.size() ||
            sth.root_hash != crypto::to_hex(merkle::root(leaves_))) {
            throw Error(Errc::IntegrityViolation,
                        "stored tree head does not match replayed records");
        }
        latest_sth_ = sth;
    } else if (!entries_.empty()) {
        throw Error(Errc::IntegrityViolation, "log has records but no tree head");
    }
}

} // namespace deployauth
