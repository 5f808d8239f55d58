#include "deployauth/artefact.hpp"

#include "deployauth/crypto.hpp"
#include "deployauth/errors.hpp"

namespace deployauth {

const char* to_string(ArtefactKind k) {
    switch (k) {
        case ArtefactKind::ModelCard: return "ModelCard";
        case ArtefactKind::SystemCard: return "SystemCard";
        case ArtefactKind::DataLineage: return "DataLineage";
        case ArtefactKind::RedTeamReport: return "RedTeamReport";
        case ArtefactKind::SecurityAttestation: return "SecurityAttestation";
        case ArtefactKind::MonitoringPlan: return "MonitoringPlan";
        case ArtefactKind::LegalDeclaration: return "LegalDeclaration";
        case ArtefactKind::TestReport: return "TestReport";
        case ArtefactKind::LogAttestation: return "LogAttestation";
        case ArtefactKind::IncidentReport: return "IncidentReport";
    }
    return "?";
}

std::optional<ArtefactKind> artefact_kind_from_string(std::string_view name) {
    for (ArtefactKind k : kAllArtefactKinds) {
        if (name == to_string(k)) return k;
    }
    return std::nullopt;
}

Json to_json(const ArtefactRef& ref) {
    return Json{
        {"content_hash", ref.content_hash},
        {"kind", to_string(ref.kind)},
        {"timestamp", ref.timestamp},
        {"size_bytes", ref.size_bytes},
        {"label", ref.label},
    };
}

ArtefactRef artefact_ref_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("content_hash") || !j.contains("kind") ||
        !j.contains("timestamp") || !j.contains("size_bytes") || !j.contains("label")) {
        throw Error(Errc::SchemaError,
                    "artefact ref needs content_hash/kind/timestamp/size_bytes/label");
    }
    ArtefactRef ref;
    ref.content_hash = j.at("content_hash").get<std::string>();
    if (!crypto::is_hex_digest(ref.content_hash)) {
        throw Error(Errc::SchemaError, "content_hash must be 64 lowercase hex chars");
    }
    auto kind = artefact_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) {
        throw Error(Errc::SchemaError, "unknown artefact kind: " + j.at("kind").get<std::string>());
    }
    ref.kind = *kind;
    ref.timestamp = j.at("timestamp").get<std::int64_t>();
    ref.size_bytes = j.at("size_bytes").get<std::int64_t>();
    if (ref.size_bytes < 0) {
        throw Error(Errc::SchemaError, "size_bytes must be non-negative");
    }
    ref.label = j.at("label").get<std::string>();
    return ref;
}

} // namespace deployauth
