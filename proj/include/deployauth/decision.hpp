#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "deployauth/conditions.hpp"
#include "deployauth/core.hpp"
#include "deployauth/evidence.hpp"
#include "deployauth/policy.hpp"
#include "deployauth/scoring.hpp"

namespace deployauth {

struct GateFailure {
    // Absent for the weighted rule's aggregate cutoff, which is not tied to a
    // single dimension.
    std::optional<Dimension> dimension;
    Score required = 0;
    Score observed = 0;
    bool ci_gated = false;
    std::optional<int> stage;
};

struct GateResult {
    bool passed = false;
    std::vector<GateFailure> failing; // passed == failing.empty()
};

// Component-wise gate: pass iff value(d) >= threshold(d) for every dimension,
// and additionally ci_lo(d) >= threshold(d) when ci_gating. All comparisons
// are inclusive.
GateResult evaluate_min_gate(const ScoreVector& scores, const ThresholdVector& thresholds,
                             bool ci_gating);

// Stages in order; the first stage with any violating dimension fails the
// whole gate and is reported with its index. Dimensions not in any stage are
// then min-gated against the base thresholds (CI-gated only when every
// explicit stage is).
GateResult evaluate_lexicographic(const ScoreVector& scores, const std::vector<LexStage>& stages,
                                  const ThresholdVector& base_thresholds);

// aggregate = sum(weight(d) * value(d)) / 10000 rounded half-up; pass iff
// aggregate >= cutoff and every dimension clears its floor (ci_lo under
// ci_gating).
GateResult evaluate_weighted(const ScoreVector& scores, const WeightedRule& rule);

GateResult evaluate_rule(const ScoreVector& scores, const Policy& policy);

// For each dimension whose value lands in [threshold, threshold + band),
// instantiates that dimension's condition templates. Zero band means never
// conditional.
std::vector<Condition> derive_conditions(const ScoreVector& scores, const Policy& policy);

enum class Outcome { Approved, ApprovedWithConditions, Denied };

const char* to_string(Outcome o);
std::optional<Outcome> outcome_from_string(std::string_view name);

struct Decision {
    Outcome outcome = Outcome::Denied;
    std::vector<Condition> conditions; // empty unless APPROVED_WITH_CONDITIONS
    std::vector<std::string> reasons;  // non-empty whenever DENIED
    std::string policy_fingerprint;
    // Absent when the pipeline stopped before scoring (sufficiency failure).
    std::optional<ScoreVector> score_vector;
    std::int64_t evaluated_at = 0;
    bool operator==(const Decision&) const = default;
};

Json to_json(const Decision& d);
Decision decision_from_json(const Json& j);

// The full authorisation pipeline, in normative order:
//   1. evidence sufficiency (failure denies or escalates without scoring)
//   2. score assembly from TestReport metrics
//   3. oversight floor check (none < review < veto < co-sign)
//   4. the policy's decision rule
//   5. condition derivation for marginal dimensions
// Evidence and scoring failures surface as DENIED with machine-readable
// reasons, never as silent approval.
// Errors: PolicyMismatch when the policy's (jurisdiction, domain) is not the
// deployment's.
Decision authorize(const DeploymentDescriptor& deployment, const EvidenceBundle& bundle,
                   const Policy& policy, const ObjectStore& store, std::int64_t now);

struct ConditionStatus {
    bool satisfied = false;
    std::string detail;
};

// EnhancedLogging: newest LogAttestation age <= interval_days.
// MandatoryHumanVeto: recorded oversight mode is veto or co-sign.
// Reassessment: now < issued_at + deadline_days.
ConditionStatus check_condition(const Condition& condition, const EvidenceBundle& bundle,
                                const DeploymentDescriptor& deployment, std::int64_t issued_at,
                                std::int64_t now);

} // namespace deployauth
