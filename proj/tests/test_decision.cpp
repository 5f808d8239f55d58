#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "deployauth/decision.hpp"
#include "deployauth/errors.hpp"
#include "support/fixtures.hpp"
#include "support/temp_dir.hpp"

using namespace deployauth;
using testsupport::TempDir;

namespace {

ScoreVector points(Score r, Score a, Score e, Score c, Score t) {
    std::map<Dimension, DimensionScore> entries{
        {Dimension::Risk, {r, r, r}},          {Dimension::Alignment, {a, a, a}},
        {Dimension::Externality, {e, e, e}},   {Dimension::Control, {c, c, c}},
        {Dimension::Auditability, {t, t, t}},
    };
    return make_score_vector(entries);
}

ThresholdVector uniform_tau(Score s) {
    std::map<Dimension, Score> t;
    for (Dimension d : kAllDimensions) t[d] = s;
    return ThresholdVector(t);
}

} // namespace

TEST_CASE("min gate: pass, single violation, CI lower bound rule") {
    auto scores = points(8000, 8500, 8800, 9200, 9000);
    CHECK(evaluate_min_gate(scores, uniform_tau(7500), false).passed);

    auto failing = points(8000, 8500, 8800, 9200, 7000);
    auto gate = evaluate_min_gate(failing, uniform_tau(7500), false);
    CHECK_FALSE(gate.passed);
    REQUIRE(gate.failing.size() == 1);
    CHECK(gate.failing[0].dimension == Dimension::Auditability);
    CHECK(gate.failing[0].required == 7500);
    CHECK(gate.failing[0].observed == 7000);

    // value passes, ci_lo misses: CI gating turns it into a failure
    std::map<Dimension, DimensionScore> entries{
        {Dimension::Risk, {8000, 7300, 8700}},        {Dimension::Alignment, {8500, 8400, 8600}},
        {Dimension::Externality, {8800, 8700, 8900}}, {Dimension::Control, {9200, 9100, 9300}},
        {Dimension::Auditability, {9000, 8900, 9100}},
    };
    auto wide = make_score_vector(entries);
    CHECK(evaluate_min_gate(wide, uniform_tau(7500), false).passed);
    auto ci_gate = evaluate_min_gate(wide, uniform_tau(7500), true);
    CHECK_FALSE(ci_gate.passed);
    REQUIRE(ci_gate.failing.size() == 1);
    CHECK(ci_gate.failing[0].dimension == Dimension::Risk);
    CHECK(ci_gate.failing[0].ci_gated);
    CHECK(ci_gate.failing[0].observed == 7300);
}

TEST_CASE("min gate boundary is inclusive") {
    CHECK(evaluate_min_gate(points(7500, 7500, 7500, 7500, 7500), uniform_tau(7500), false)
              .passed);
}

TEST_CASE("lexicographic: staged evaluation and dominance") {
    std::vector<LexStage> stages{{{Dimension::Control, Dimension::Auditability},
                                  {{Dimension::Control, 9000}, {Dimension::Auditability, 9000}},
                                  false}};
    auto base = uniform_tau(7500);

    CHECK(evaluate_lexicographic(points(8000, 8000, 8000, 9500, 9200), stages, base).passed);

    // stage-1 miss denies even with perfect later dimensions
    auto gate = evaluate_lexicographic(points(10000, 10000, 10000, 8500, 10000), stages, base);
    CHECK_FALSE(gate.passed);
    REQUIRE(gate.failing.size() == 1);
    CHECK(gate.failing[0].dimension == Dimension::Control);
    CHECK(gate.failing[0].stage == 0);

    // empty stage list reduces exactly to the min gate
    std::vector<LexStage> none;
    for (Score r : {7000, 7500, 8000}) {
        auto v = points(r, 8000, 8000, 8000, 8000);
        CHECK(evaluate_lexicographic(v, none, base).passed ==
              evaluate_min_gate(v, base, false).passed);
    }
}

TEST_CASE("lexicographic: remaining dimensions still face base thresholds") {
    std::vector<LexStage> stages{{{Dimension::Control, Dimension::Auditability},
                                  {{Dimension::Control, 9000}, {Dimension::Auditability, 9000}},
                                  false}};
    auto gate =
        evaluate_lexicographic(points(7000, 8000, 8000, 9500, 9500), stages, uniform_tau(7500));
    CHECK_FALSE(gate.passed);
    REQUIRE(gate.failing.size() == 1);
    CHECK(gate.failing[0].dimension == Dimension::Risk);
    CHECK(gate.failing[0].stage == 1); // the implicit final stage
}

TEST_CASE("lexicographic dominance holds under randomized other dimensions") {
    std::vector<LexStage> stages{{{Dimension::Control, Dimension::Auditability},
                                  {{Dimension::Control, 9000}, {Dimension::Auditability, 9000}},
                                  false}};
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<Score> any(0, 10000);
    for (int i = 0; i < 1000; ++i) {
        auto v = points(any(rng), any(rng), any(rng), 8999, any(rng));
        CHECK_FALSE(evaluate_lexicographic(v, stages, uniform_tau(0)).passed);
    }
}

TEST_CASE("weighted: aggregate, floors, exact boundary") {
    WeightedRule rule;
    for (Dimension d : kAllDimensions) rule.weights[d] = 2000;
    rule.cutoff = 6500;

    auto scores = points(6000, 6000, 6000, 6000, 10000); // aggregate 6800
    CHECK(evaluate_weighted(scores, rule).passed);

    WeightedRule floored = rule;
    floored.floors[Dimension::Control] = 7000;
    auto gate = evaluate_weighted(scores, floored);
    CHECK_FALSE(gate.passed);
    REQUIRE(gate.failing.size() == 1);
    CHECK(gate.failing[0].dimension == Dimension::Control);

    WeightedRule all_on_risk;
    all_on_risk.weights = {{Dimension::Risk, 10000},      {Dimension::Alignment, 0},
                           {Dimension::Externality, 0},   {Dimension::Control, 0},
                           {Dimension::Auditability, 0}};
    all_on_risk.cutoff = 7000;
    CHECK(evaluate_weighted(points(7000, 0, 0, 0, 0), all_on_risk).passed); // >= is inclusive
    CHECK_FALSE(evaluate_weighted(points(6999, 0, 0, 0, 0), all_on_risk).passed);
}

TEST_CASE("weighted with full weight on one dimension equals its min gate") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<Score> any(0, 10000);
    for (Dimension d : kAllDimensions) {
        WeightedRule rule;
        for (Dimension x : kAllDimensions) rule.weights[x] = x == d ? 10000 : 0;
        for (int i = 0; i < 200; ++i) {
            rule.cutoff = any(rng);
            auto v = points(any(rng), any(rng), any(rng), any(rng), any(rng));
            std::map<Dimension, Score> tau;
            for (Dimension x : kAllDimensions) tau[x] = x == d ? rule.cutoff : 0;
            CHECK(evaluate_weighted(v, rule).passed ==
                  evaluate_min_gate(v, ThresholdVector(tau), false).passed);
        }
    }
}

TEST_CASE("CI gating approves a subset of what plain gating approves") {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<Score> any(0, 10000);
    int ci_only_failures = 0;
    for (int i = 0; i < 2000; ++i) {
        std::map<Dimension, DimensionScore> entries;
        for (Dimension d : kAllDimensions) {
            Score v = any(rng);
            Score lo = static_cast<Score>(v - any(rng) % (v + 1));
            Score hi = static_cast<Score>(v + any(rng) % (10001 - v));
            entries[d] = {v, lo, hi};
        }
        auto vec = make_score_vector(entries);
        auto tau = uniform_tau(any(rng));
        bool with_ci = evaluate_min_gate(vec, tau, true).passed;
        bool without = evaluate_min_gate(vec, tau, false).passed;
        if (with_ci) CHECK(without);
        if (without && !with_ci) ++ci_only_failures;
    }
    CHECK(ci_only_failures > 0); // the witness the rule exists for
}

TEST_CASE("raising any threshold never flips denied into approved") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<Score> any(0, 10000);
    for (int i = 0; i < 500; ++i) {
        auto v = points(any(rng), any(rng), any(rng), any(rng), any(rng));
        std::map<Dimension, Score> tau;
        for (Dimension d : kAllDimensions) tau[d] = any(rng);
        bool before = evaluate_min_gate(v, ThresholdVector(tau), false).passed;
        Dimension bumped = kAllDimensions[any(rng) % 5];
        tau[bumped] = std::min<Score>(10000, tau[bumped] + any(rng) % 1000);
        bool after = evaluate_min_gate(v, ThresholdVector(tau), false).passed;
        if (!before) CHECK_FALSE(after);
    }
}

TEST_CASE("conditions instantiate only inside the marginal band") {
    Policy policy = parse_policy(testsupport::fixture("policies/eu_healthcare_1_0.json"));
    // Auditability band [7500, 8000), template EnhancedLogging(30d)

    auto marginal = points(8500, 8500, 8500, 8500, 7700);
    auto conditions = derive_conditions(marginal, policy);
    REQUIRE(conditions.size() == 1);
    CHECK(conditions[0].kind == ConditionKind::EnhancedLogging);
    CHECK(conditions[0].trigger == Dimension::Auditability);
    CHECK(conditions[0].parameters.at("interval_days") == 30);

    CHECK(derive_conditions(points(8500, 8500, 8500, 8500, 8000), policy).empty());
    CHECK(derive_conditions(points(9000, 9000, 9000, 9000, 9000), policy).empty());

    Policy no_band = policy;
    no_band.conditional_band.clear();
    CHECK(derive_conditions(points(8500, 8500, 8500, 8500, 7700), no_band).empty());
}

TEST_CASE("authorize: composed positive case") {
    TempDir dir;
    auto engine = testsupport::make_fixture_engine(dir);
    auto deployment = testsupport::fixture_deployment("triage_eu.json");
    auto bundle = engine.load_bundle("bundle-triage-001");
    const Policy& policy = engine.registry().resolve("EU", "healthcare");

    auto decision =
        authorize(deployment, bundle, policy, engine.store(), testsupport::kAssessClock);
    CHECK(decision.outcome == Outcome::Approved);
    CHECK(decision.conditions.empty());
    CHECK(decision.reasons.empty());
    REQUIRE(decision.score_vector.has_value());
    CHECK(decision.policy_fingerprint == policy_fingerprint(policy));
    CHECK(decision.evaluated_at == testsupport::kAssessClock);
}

TEST_CASE("authorize: missing evidence denies before scoring") {
    TempDir dir;
    auto engine = testsupport::make_fixture_engine(dir, /*include_monitoring_plan=*/false);
    auto deployment = testsupport::fixture_deployment("triage_eu.json");
    auto bundle = engine.load_bundle("bundle-triage-001");
    const Policy& policy = engine.registry().resolve("EU", "healthcare");

    auto decision =
        authorize(deployment, bundle, policy, engine.store(), testsupport::kAssessClock);
    CHECK(decision.outcome == Outcome::Denied);
    CHECK_FALSE(decision.score_vector.has_value()); // scores never computed
    REQUIRE_FALSE(decision.reasons.empty());
    CHECK(decision.reasons[0] == "evidence:MonitoringPlan");
}

TEST_CASE("authorize: escalation is denial plus a marker, never approval") {
    TempDir dir;
    auto engine = testsupport::make_fixture_engine(dir);
    auto deployment = testsupport::fixture_deployment("triage_us.json");
    auto bundle = engine.load_bundle("bundle-triage-001");

    Json doc = parse_canonical(testsupport::fixture("policies/us_critinfra_1_0.json"));
    doc["evidence_requirements"].push_back(
        Json{{"kind", "IncidentReport"}, {"min_count", 1}}); // absent from the bundle
    Policy policy = parse_policy(canonicalize(doc));

    auto decision =
        authorize(deployment, bundle, policy, engine.store(), testsupport::kAssessClock);
    CHECK(decision.outcome == Outcome::Denied);
    CHECK_FALSE(decision.score_vector.has_value());
    bool has_marker = false;
    for (const auto& r : decision.reasons) {
        if (r == "escalate:human-review") has_marker = true;
    }
    CHECK(has_marker);
}

TEST_CASE("authorize: oversight floor is checked after scoring") {
    TempDir dir;
    auto engine = testsupport::make_fixture_engine(dir);
    auto deployment = testsupport::fixture_deployment("triage_eu.json");
    deployment.human_oversight.mode = OversightMode::None; // below the review floor
    auto bundle = engine.load_bundle("bundle-triage-001");
    const Policy& policy = engine.registry().resolve("EU", "healthcare");

    auto decision =
        authorize(deployment, bundle, policy, engine.store(), testsupport::kAssessClock);
    CHECK(decision.outcome == Outcome::Denied);
    REQUIRE(decision.reasons.size() == 1);
    CHECK(decision.reasons[0] == "oversight:required=review,observed=none");
    CHECK(decision.score_vector.has_value());
}

TEST_CASE("authorize: policy for another context is a mismatch error") {
    TempDir dir;
    auto engine = testsupport::make_fixture_engine(dir);
    auto deployment = testsupport::fixture_deployment("triage_eu.json");
    auto bundle = engine.load_bundle("bundle-triage-001");
    const Policy& us_policy = engine.registry().resolve("US", "critical-infrastructure");

    try {
        (void)authorize(deployment, bundle, us_policy, engine.store(),
                        testsupport::kAssessClock);
        FAIL("expected PolicyMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::PolicyMismatch);
    }
}

TEST_CASE("authorize: marginal score yields conditions and the conditional outcome") {
    TempDir dir;
    auto engine = testsupport::make_fixture_engine(dir);
    auto deployment = testsupport::fixture_deployment("triage_eu.json");
    auto bundle = engine.load_bundle("bundle-triage-001");

    Json doc = parse_canonical(testsupport::fixture("policies/eu_healthcare_1_0.json"));
    // Put the fixture's Auditability score (9100, ci_lo 8900) inside the band
    // [8800, 9300) with a CI-clearing threshold.
    doc["thresholds"]["Auditability"] = 8800;
    doc["conditional_band"]["Auditability"] = 500;
    Policy policy = parse_policy(canonicalize(doc));

    auto decision =
        authorize(deployment, bundle, policy, engine.store(), testsupport::kAssessClock);
    CHECK(decision.outcome == Outcome::ApprovedWithConditions);
    REQUIRE(decision.conditions.size() == 1);
    CHECK(decision.conditions[0].kind == ConditionKind::EnhancedLogging);
    CHECK(decision.conditions[0].trigger == Dimension::Auditability);
}

TEST_CASE("decision serialization round trips with and without scores") {
    TempDir dir;
    auto engine = testsupport::make_fixture_engine(dir);
    auto deployment = testsupport::fixture_deployment("triage_eu.json");
    auto bundle = engine.load_bundle("bundle-triage-001");
    const Policy& policy = engine.registry().resolve("EU", "healthcare");

    auto approved =
        authorize(deployment, bundle, policy, engine.store(), testsupport::kAssessClock);
    CHECK(decision_from_json(to_json(approved)) == approved);

    Decision denied;
    denied.outcome = Outcome::Denied;
    denied.reasons = {"evidence:MonitoringPlan"};
    denied.policy_fingerprint = policy_fingerprint(policy);
    denied.evaluated_at = testsupport::kAssessClock;
    CHECK(decision_from_json(to_json(denied)) == denied);
    CHECK_FALSE(to_json(denied).contains("score_vector"));
}

TEST_CASE("check_condition: the three machine-verifiable kinds") {
    TempDir dir;
    auto engine = testsupport::make_fixture_engine(dir);
    auto deployment = testsupport::fixture_deployment("triage_eu.json");
    std::int64_t now = testsupport::kAssessClock;

    Condition logging{"c1", ConditionKind::EnhancedLogging, {{"interval_days", 30}},
                      Dimension::Auditability};

    EvidenceBundle no_logs{"b1", "dep-triage-001", {}};
    CHECK_FALSE(check_condition(logging, no_logs, deployment, now, now).satisfied);

    auto fresh_ref = engine.put_artefact(testsupport::fixture("evidence/log_attestation.json"),
                                         ArtefactKind::LogAttestation, now - 10 * 86400, "la");
    EvidenceBundle fresh = append_to_bundle(no_logs, fresh_ref, engine.store());
    CHECK(check_condition(logging, fresh, deployment, now, now).satisfied);

    auto stale_ref = engine.put_artefact("older attestation", ArtefactKind::LogAttestation,
                                         now - 45 * 86400, "old");
    EvidenceBundle stale = append_to_bundle(no_logs, stale_ref, engine.store());
    CHECK_FALSE(check_condition(logging, stale, deployment, now, now).satisfied);

    Condition veto{"c2", ConditionKind::MandatoryHumanVeto, {}, Dimension::Control};
    CHECK(check_condition(veto, no_logs, deployment, now, now).satisfied);
    auto weak = deployment;
    weak.human_oversight.mode = OversightMode::Review;
    CHECK_FALSE(check_condition(veto, no_logs, weak, now, now).satisfied);

    Condition reassess{"c3", ConditionKind::Reassessment, {{"deadline_days", 90}},
                       Dimension::Risk};
    std::int64_t issued = now;
    CHECK(check_condition(reassess, no_logs, deployment, issued, issued + 89 * 86400).satisfied);
    CHECK_FALSE(
        check_condition(reassess, no_logs, deployment, issued, issued + 91 * 86400).satisfied);
}
