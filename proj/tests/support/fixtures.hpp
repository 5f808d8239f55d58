#pragma once

// Shared fixture plumbing: loads the repository fixture corpus and stands up
// fully-populated engine homes for pipeline tests.

#include <cstdint>
#include <filesystem>
#include <string>

#include "deployauth/engine.hpp"
#include "temp_dir.hpp"

#ifndef DEPLOYAUTH_FIXTURE_DIR
#error "DEPLOYAUTH_FIXTURE_DIR must be defined by the build"
#endif

namespace testsupport {

inline constexpr std::int64_t kPutClock = 1767225600;    // 2026-01-01T00:00:00Z
inline constexpr std::int64_t kAssessClock = 1767312000; // 2026-01-02T00:00:00Z
inline constexpr const char* kTestSeed =
    "9f86d081884c7d659a2feaa0c55ad015a3bf4f1b2b0b822cd15d6c15b0f00a08";

inline std::filesystem::path fixture_dir() { return DEPLOYAUTH_FIXTURE_DIR; }

inline std::string fixture(const std::string& relative) {
    return deployauth::read_file(fixture_dir() / relative);
}

inline deployauth::DeploymentDescriptor fixture_deployment(const std::string& name) {
    return deployauth::deployment_from_json(
        deployauth::parse_canonical(fixture("deployments/" + name)));
}

// Engine home with all fixture policies registered and the standard evidence
// bundle ("bundle-triage-001") ingested for the triage deployment.
inline deployauth::Engine make_fixture_engine(const TempDir& dir,
                                              bool include_monitoring_plan = true) {
    auto home = deployauth::EngineHome::init(dir.path() / "home", std::string(kTestSeed));
    deployauth::Engine engine(home);
    for (const auto* policy : {"policies/eu_healthcare_1_0.json", "policies/us_critinfra_1_0.json",
                               "policies/eu_admin_weighted_1_0.json"}) {
        engine.add_policy(fixture(policy));
    }
    engine.create_bundle("bundle-triage-001", "dep-triage-001");
    auto add = [&](const std::string& file, deployauth::ArtefactKind kind) {
        auto ref = engine.put_artefact(fixture("evidence/" + file), kind, kPutClock, file);
        engine.append_to_bundle("bundle-triage-001", ref);
    };
    add("model_card.json", deployauth::ArtefactKind::ModelCard);
    add("data_lineage.json", deployauth::ArtefactKind::DataLineage);
    if (include_monitoring_plan) {
        add("monitoring_plan.json", deployauth::ArtefactKind::MonitoringPlan);
    }
    add("red_team_report.json", deployauth::ArtefactKind::RedTeamReport);
    add("security_attestation.json", deployauth::ArtefactKind::SecurityAttestation);
    add("test_report.json", deployauth::ArtefactKind::TestReport);
    return engine;
}

} // namespace testsupport
