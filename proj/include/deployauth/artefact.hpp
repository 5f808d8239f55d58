#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "deployauth/canonical.hpp"

namespace deployauth {

// Closed enumeration of evidence artefact categories; unknown kinds are
// rejected at ingestion.
enum class ArtefactKind {
    ModelCard,
    SystemCard,
    DataLineage,
    RedTeamReport,
    SecurityAttestation,
    MonitoringPlan,
    LegalDeclaration,
    TestReport,
    LogAttestation,
    IncidentReport,
};

inline constexpr ArtefactKind kAllArtefactKinds[] = {
    ArtefactKind::ModelCard,       ArtefactKind::SystemCard,
    ArtefactKind::DataLineage,     ArtefactKind::RedTeamReport,
    ArtefactKind::SecurityAttestation, ArtefactKind::MonitoringPlan,
    ArtefactKind::LegalDeclaration, ArtefactKind::TestReport,
    ArtefactKind::LogAttestation,  ArtefactKind::IncidentReport,
};

const char* to_string(ArtefactKind k);
std::optional<ArtefactKind> artefact_kind_from_string(std::string_view name);

struct ArtefactRef {
    std::string content_hash; // SHA-256, 64 lowercase hex chars
    ArtefactKind kind = ArtefactKind::ModelCard;
    std::int64_t timestamp = 0; // UTC seconds since epoch
    std::int64_t size_bytes = 0;
    std::string label;
    bool operator==(const ArtefactRef&) const = default;
};

Json to_json(const ArtefactRef& ref);
ArtefactRef artefact_ref_from_json(const Json& j);

} // namespace deployauth
