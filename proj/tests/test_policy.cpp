#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "deployauth/errors.hpp"
#include "deployauth/policy.hpp"
#include "support/fixtures.hpp"

using namespace deployauth;
using testsupport::fixture;

TEST_CASE("EU healthcare fixture parses with the expected gate") {
    Policy p = parse_policy(fixture("policies/eu_healthcare_1_0.json"));
    CHECK(p.policy_id == "eu-aia-high-risk-healthcare");
    CHECK(p.jurisdiction == "EU");
    CHECK(p.domain == "healthcare");
    for (Dimension d : kAllDimensions) CHECK(p.thresholds.at(d) == 7500);

    auto* rule = std::get_if<MinGateRule>(&p.rule);
    REQUIRE(rule != nullptr);
    CHECK(rule->ci_gating);

    REQUIRE(p.evidence_requirements.size() == 4);
    CHECK(p.evidence_requirements[0].kind == ArtefactKind::ModelCard);
    CHECK(p.evidence_requirements[3].kind == ArtefactKind::RedTeamReport);
    CHECK(p.evidence_requirements[3].max_age_days == 180);
    CHECK(p.missing_evidence_action == MissingEvidenceAction::Deny);
    CHECK(p.oversight_floor == OversightMode::Review);
    CHECK(p.band(Dimension::Auditability) == 500);
    CHECK(p.band(Dimension::Risk) == 0);
}

TEST_CASE("lexicographic fixture: Control and Auditability form stage one") {
    Policy p = parse_policy(fixture("policies/us_critinfra_1_0.json"));
    auto* rule = std::get_if<LexicographicRule>(&p.rule);
    REQUIRE(rule != nullptr);
    REQUIRE(rule->stages.size() == 1);
    const auto& stage = rule->stages[0];
    CHECK(stage.dimensions ==
          std::vector<Dimension>{Dimension::Control, Dimension::Auditability});
    CHECK(stage.thresholds.at(Dimension::Control) == 9000);
    CHECK(stage.thresholds.at(Dimension::Auditability) == 9000);
    CHECK(stage.ci_gating);
    CHECK(p.missing_evidence_action == MissingEvidenceAction::Escalate);
}

TEST_CASE("weighted weights must sum to exactly 10000") {
    Json doc = parse_canonical(fixture("policies/eu_admin_weighted_1_0.json"));
    doc["rule"]["weights"]["Risk"] = 1000; // sum becomes 9000
    try {
        (void)parse_policy(canonicalize(doc));
        FAIL("expected InvariantError");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InvariantError);
    }
}

TEST_CASE("unknown fields are rejected, policies being legal instruments") {
    Json doc = parse_canonical(fixture("policies/eu_healthcare_1_0.json"));
    doc["comments"] = "internal note";
    try {
        (void)parse_policy(canonicalize(doc));
        FAIL("expected SchemaError");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::SchemaError);
        CHECK(std::string(e.what()).find("comments") != std::string::npos);
    }
}

TEST_CASE("missing fields and malformed documents") {
    Json doc = parse_canonical(fixture("policies/eu_healthcare_1_0.json"));
    doc.erase("thresholds");
    CHECK_THROWS_AS((void)parse_policy(canonicalize(doc)), Error);
    try {
        (void)parse_policy("{not json");
        FAIL("expected SyntaxError");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::SyntaxError);
    }
}

TEST_CASE("a dimension may appear in at most one lexicographic stage") {
    Json doc = parse_canonical(fixture("policies/us_critinfra_1_0.json"));
    Json second = doc["rule"]["stages"][0];
    doc["rule"]["stages"].push_back(second);
    CHECK_THROWS_AS((void)parse_policy(canonicalize(doc)), Error);
}

TEST_CASE("serialize then parse is the identity") {
    for (const char* name :
         {"policies/eu_healthcare_1_0.json", "policies/us_critinfra_1_0.json",
          "policies/eu_admin_weighted_1_0.json"}) {
        CAPTURE(name);
        Policy p = parse_policy(fixture(name));
        Policy again = parse_policy(serialize_policy(p));
        CHECK(again == p);
        CHECK(policy_fingerprint(again) == policy_fingerprint(p));
    }
}

// Golden value computed over the canonical bytes with an external SHA-256
// tool before the build.
TEST_CASE("fingerprint golden value and sensitivity") {
    Policy p = parse_policy(fixture("policies/eu_healthcare_1_0.json"));
    CHECK(policy_fingerprint(p) ==
          "1e4c137fa1ff5296f19af02a513be9acea3d7399dafef014c0de5faa440063c9");

    Policy tweaked = p;
    tweaked.thresholds.set(Dimension::Risk, 7501);
    CHECK(policy_fingerprint(tweaked) != policy_fingerprint(p));
}

TEST_CASE("version comparison is dotted-integer, not lexicographic") {
    CHECK(compare_versions("1.0", "1.1") < 0);
    CHECK(compare_versions("1.10", "1.9") > 0);
    CHECK(compare_versions("2", "1.9.9") > 0);
    CHECK(compare_versions("1.0", "1.0.0") == 0);
    CHECK_THROWS_AS((void)compare_versions("1.x", "1.0"), Error);
}

TEST_CASE("registry resolves the highest version by default") {
    PolicyRegistry registry;
    registry.add(parse_policy(fixture("policies/eu_healthcare_1_0.json")));
    registry.add(parse_policy(fixture("policies/eu_healthcare_1_1.json")));

    const Policy& latest = registry.resolve("EU", "healthcare");
    CHECK(latest.version == "1.1");
    const Policy& pinned = registry.resolve("EU", "healthcare", "1.0");
    CHECK(pinned.version == "1.0");
    CHECK(pinned.jurisdiction == "EU");
    CHECK(pinned.domain == "healthcare");
}

TEST_CASE("missing policies and ambiguous versions") {
    PolicyRegistry registry;
    registry.add(parse_policy(fixture("policies/eu_healthcare_1_0.json")));
    try {
        (void)registry.resolve("US", "logistics");
        FAIL("expected PolicyNotFound");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::PolicyNotFound);
    }

    // identical re-add is a no-op
    registry.add(parse_policy(fixture("policies/eu_healthcare_1_0.json")));
    CHECK(registry.size() == 1);

    // same (jurisdiction, domain, version), different content
    Json doc = parse_canonical(fixture("policies/eu_healthcare_1_0.json"));
    doc["thresholds"]["Risk"] = 8000;
    try {
        registry.add(parse_policy(canonicalize(doc)));
        FAIL("expected AmbiguousVersion");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::AmbiguousVersion);
    }
}

TEST_CASE("one deployment, two jurisdictions, two distinct policies") {
    PolicyRegistry registry;
    registry.add(parse_policy(fixture("policies/eu_healthcare_1_0.json")));
    registry.add(parse_policy(fixture("policies/us_critinfra_1_0.json")));

    const Policy& eu = registry.resolve("EU", "healthcare");
    const Policy& us = registry.resolve("US", "critical-infrastructure");
    CHECK(policy_fingerprint(eu) != policy_fingerprint(us));
    CHECK(std::holds_alternative<MinGateRule>(eu.rule));
    CHECK(std::holds_alternative<LexicographicRule>(us.rule));
}

TEST_CASE("threshold plus conditional band must stay within scale") {
    Json doc = parse_canonical(fixture("policies/eu_healthcare_1_0.json"));
    doc["conditional_band"]["Auditability"] = 3000; // 7500 + 3000 > 10000
    CHECK_THROWS_AS((void)parse_policy(canonicalize(doc)), Error);
}
