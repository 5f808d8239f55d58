#include "deployauth/evidence.hpp"

#include <fstream>
#include <system_error>

#include "deployauth/crypto.hpp"
#include "deployauth/errors.hpp"

namespace deployauth {

namespace fs = std::filesystem;

ObjectStore::ObjectStore(fs::path root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) {
        throw Error(Errc::StorageFailure, "cannot create object store at " + root_.string());
    }
}

fs::path ObjectStore::object_path(std::string_view content_hash) const {
    return root_ / std::string(content_hash.substr(0, 2)) / std::string(content_hash.substr(2));
}

ArtefactRef ObjectStore::put(std::string_view bytes, ArtefactKind kind, std::int64_t timestamp,
                             std::string label) {
    if (bytes.empty()) {
        throw Error(Errc::EmptyArtefact, "artefacts must be non-empty");
    }
    std::string hash = crypto::sha256_hex(bytes);
    fs::path path = object_path(hash);

    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) {
        throw Error(Errc::StorageFailure, "cannot create shard directory for " + hash);
    }
    if (!fs::exists(path)) {
        // tmp + rename keeps concurrent identical writes safe: both produce
        // the same final bytes under the same name.
        fs::path tmp = path;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) {
                throw Error(Errc::StorageFailure, "cannot open " + tmp.string());
            }
            out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
            if (!out) {
                throw Error(Errc::StorageFailure, "short write to " + tmp.string());
            }
        }
        fs::rename(tmp, path, ec);
        if (ec) {
            throw Error(Errc::StorageFailure, "cannot commit object " + hash);
        }
    }
    return ArtefactRef{hash, kind, timestamp, static_cast<std::int64_t>(bytes.size()),
                       std::move(label)};
}

std::string ObjectStore::get(std::string_view content_hash) const {
    if (!crypto::is_hex_digest(content_hash)) {
        throw Error(Errc::NotFound, "content hash must be 64 lowercase hex chars");
    }
    fs::path path = object_path(content_hash);
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::NotFound, std::string(content_hash));
    }
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (crypto::sha256_hex(bytes) != content_hash) {
        throw Error(Errc::IntegrityViolation,
                    "stored bytes no longer match " + std::string(content_hash));
    }
    return bytes;
}

bool ObjectStore::contains(std::string_view content_hash) const {
    return crypto::is_hex_digest(content_hash) && fs::exists(object_path(content_hash));
}

std::size_t ObjectStore::object_count() const {
    std::size_t n = 0;
    std::error_code ec;
    for (auto it = fs::recursive_directory_iterator(root_, ec);
         it != fs::recursive_directory_iterator(); ++it) {
        if (it->is_regular_file()) ++n;
    }
    return n;
}

EvidenceBundle append_to_bundle(const EvidenceBundle& bundle, const ArtefactRef& ref,
                                const ObjectStore& store) {
    if (!store.contains(ref.content_hash)) {
        throw Error(Errc::UnknownArtefact, ref.content_hash);
    }
    for (const auto& existing : bundle.entries) {
        if (existing.content_hash == ref.content_hash) {
            throw Error(Errc::DuplicateEntry, ref.content_hash);
        }
    }
    EvidenceBundle next = bundle;
    next.entries.push_back(ref);
    return next;
}

Json manifest_json(const EvidenceBundle& bundle) {
    Json entries = Json::array();
    for (const auto& ref : bundle.entries) {
        entries.push_back(to_json(ref));
    }
    return entries;
}

std::string manifest_bytes(const EvidenceBundle& bundle) {
    return canonicalize(manifest_json(bundle));
}

std::string bundle_fingerprint(const EvidenceBundle& bundle) {
    return crypto::sha256_hex(manifest_bytes(bundle));
}

Json to_json(const SufficiencyReport& r) {
    Json per = Json::array();
    for (const auto& item : r.per_requirement) {
        Json rj{{"kind", to_string(item.requirement.kind)},
                {"min_count", item.requirement.min_count},
                {"found_count", item.found_count},
                {"fresh_count", item.fresh_count},
                {"satisfied", item.satisfied}};
        if (item.requirement.max_age_days) rj["max_age_days"] = *item.requirement.max_age_days;
        per.push_back(rj);
    }
    return Json{{"satisfied", r.satisfied},
                {"per_requirement", per},
                {"action_on_failure", to_string(r.action_on_failure)}};
}

SufficiencyReport check_sufficiency(const EvidenceBundle& bundle, const Policy& policy,
                                    const ObjectStore& store, std::int64_t now) {
    // Integrity first: sufficiency is undefined over tampered evidence.
    for (const auto& ref : bundle.entries) {
        (void)store.get(ref.content_hash);
    }

    SufficiencyReport report;
    report.action_on_failure = policy.missing_evidence_action;
    report.satisfied = true;
    for (const auto& req : policy.evidence_requirements) {
        RequirementResult result;
        result.requirement = req;
        for (const auto& ref : bundle.entries) {
            if (ref.kind != req.kind) continue;
            ++result.found_count;
            bool fresh = !req.max_age_days ||
                         (now - ref.timestamp) <= static_cast<std::int64_t>(*req.max_age_days) * 86400;
            if (fresh) ++result.fresh_count;
        }
        result.satisfied = result.fresh_count >= req.min_count;
        report.satisfied = report.satisfied && result.satisfied;
        report.per_requirement.push_back(result);
    }
    return report;
}

} // namespace deployauth
