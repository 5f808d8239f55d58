#include "deployauth/decision.hpp"

#include <algorithm>

#include "deployauth/errors.hpp"

namespace deployauth {

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::Approved: return "APPROVED";
        case Outcome::ApprovedWithConditions: return "APPROVED_WITH_CONDITIONS";
        case Outcome::Denied: return "DENIED";
    }
    return "?";
}

std::optional<Outcome> outcome_from_string(std::string_view name) {
    for (Outcome o : {Outcome::Approved, Outcome::ApprovedWithConditions, Outcome::Denied}) {
        if (name == to_string(o)) return o;
    }
    return std::nullopt;
}

GateResult evaluate_min_gate(const ScoreVector& scores, const ThresholdVector& thresholds,
                             bool ci_gating) {
    GateResult result;
    for (Dimension d : kAllDimensions) {
        Score required = thresholds.at(d);
        Score observed = ci_gating ? scores.ci_lo(d) : scores.value(d);
        if (scores.value(d) < required || observed < required) {
            result.failing.push_back(
                {d, required, observed, ci_gating, std::nullopt});
        }
    }
    result.passed = result.failing.empty();
    return result;
}

GateResult evaluate_lexicographic(const ScoreVector& scores, const std::vector<LexStage>& stages,
                                  const ThresholdVector& base_thresholds) {
    GateResult result;
    std::array<bool, 5> staged{};
    bool all_stages_ci = !stages.empty();
    for (const auto& stage : stages) {
        all_stages_ci = all_stages_ci && stage.ci_gating;
    }

    for (std::size_t i = 0; i < stages.size(); ++i) {
        const auto& stage = stages[i];
        for (Dimension d : stage.dimensions) {
            staged[index_of(d)] = true;
            Score required = stage.thresholds.at(d);
            Score observed = stage.ci_gating ? scores.ci_lo(d) : scores.value(d);
            if (scores.value(d) < required || observed < required) {
                result.failing.push_back(
                    {d, required, observed, stage.ci_gating, static_cast<int>(i)});
            }
        }
        if (!result.failing.empty()) {
            // Earlier stages dominate: later dimensions never rescue a
            // failing stage, so evaluation stops here.
            result.passed = false;
            return result;
        }
    }

    for (Dimension d : kAllDimensions) {
        if (staged[index_of(d)]) continue;
        Score required = base_thresholds.at(d);
        Score observed = all_stages_ci ? scores.ci_lo(d) : scores.value(d);
        if (scores.value(d) < required || observed < required) {
            result.failing.push_back({d, required, observed, all_stages_ci,
                                      static_cast<int>(stages.size())});
        }
    }
    result.passed = result.failing.empty();
    return result;
}

GateResult evaluate_weighted(const ScoreVector& scores, const WeightedRule& rule) {
    GateResult result;
    std::int64_t weighted_sum = 0;
    for (Dimension d : kAllDimensions) {
        auto it = rule.weights.find(d);
        std::int64_t w = it == rule.weights.end() ? 0 : it->second;
        weighted_sum += w * scores.value(d);
    }
    Score aggregate = static_cast<Score>((2 * weighted_sum + kScoreMax) / (2 * kScoreMax));
    if (aggregate < rule.cutoff) {
        result.failing.push_back(
            {std::nullopt, rule.cutoff, aggregate, false, std::nullopt});
    }
    for (Dimension d : kAllDimensions) {
        auto it = rule.floors.find(d);
        if (it == rule.floors.end() || it->second <= 0) continue;
        Score required = it->second;
        Score observed = rule.ci_gating ? scores.ci_lo(d) : scores.value(d);
        if (scores.value(d) < required || observed < required) {
            result.failing.push_back({d, required, observed, rule.ci_gating, std::nullopt});
        }
    }
    result.passed = result.failing.empty();
    return result;
}

GateResult evaluate_rule(const ScoreVector& scores, const Policy& policy) {
    if (const auto* mg = std::get_if<MinGateRule>(&policy.rule)) {
        return evaluate_min_gate(scores, policy.thresholds, mg->ci_gating);
    }
    if (const auto* lex = std::get_if<LexicographicRule>(&policy.rule)) {
        return evaluate_lexicographic(scores, lex->stages, policy.thresholds);
    }
    return evaluate_weighted(scores, std::get<WeightedRule>(policy.rule));
}

std::vector<Condition> derive_conditions(const ScoreVector& scores, const Policy& policy) {
    std::vector<Condition> conditions;
    for (Dimension d : kAllDimensions) {
        Score band = policy.band(d);
        if (band <= 0) continue;
        Score threshold = policy.thresholds.at(d);
        Score value = scores.value(d);
        if (value < threshold || value >= threshold + band) continue;
        for (const auto& t : policy.condition_templates) {
            if (t.dimension != d) continue;
            conditions.push_back(Condition{t.condition_id, t.kind, t.parameters, d});
        }
    }
    return conditions;
}

Json to_json(const Decision& d) {
    Json conditions = Json::array();
    for (const auto& c : d.conditions) conditions.push_back(to_json(c));
    Json j{
        {"outcome", to_string(d.outcome)},
        {"conditions", conditions},
        {"reasons", d.reasons},
        {"policy_fingerprint", d.policy_fingerprint},
        {"evaluated_at", d.evaluated_at},
    };
    if (d.score_vector) j["score_vector"] = to_json(*d.score_vector);
    return j;
}

Decision decision_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("outcome") || !j.contains("conditions") ||
        !j.contains("reasons") || !j.contains("policy_fingerprint") ||
        !j.contains("evaluated_at")) {
        throw Error(Errc::SchemaError,
                    "decision needs outcome/conditions/reasons/policy_fingerprint/evaluated_at");
    }
    Decision d;
    auto outcome = outcome_from_string(j.at("outcome").get<std::string>());
    if (!outcome) {
        throw Error(Errc::SchemaError, "unknown outcome: " + j.at("outcome").get<std::string>());
    }
    d.outcome = *outcome;
    for (const auto& cj : j.at("conditions")) {
        d.conditions.push_back(condition_from_json(cj));
    }
    d.reasons = j.at("reasons").get<std::vector<std::string>>();
    d.policy_fingerprint = j.at("policy_fingerprint").get<std::string>();
    if (j.contains("score_vector")) {
        d.score_vector = score_vector_from_json(j.at("score_vector"));
    }
    d.evaluated_at = j.at("evaluated_at").get<std::int64_t>();
    return d;
}

namespace {

std::string reason_for(const GateFailure& f) {
    std::string out = "gate:";
    if (f.stage) out += "stage=" + std::to_string(*f.stage) + ":";
    out += f.dimension ? to_string(*f.dimension) : "aggregate";
    out += ":required=" + std::to_string(f.required) + ",observed=" + std::to_string(f.observed);
    if (f.ci_gated) out += ",ci";
    return out;
}

} // namespace

Decision authorize(const DeploymentDescriptor& deployment, const EvidenceBundle& bundle,
                   const Policy& policy, const ObjectStore& store, std::int64_t now) {
    if (policy.jurisdiction != deployment.jurisdiction ||
        policy.domain != deployment.use_context.domain) {
        throw Error(Errc::PolicyMismatch,
                    "policy is for " + policy.jurisdiction + "/" + policy.domain +
                        ", deployment is " + deployment.jurisdiction + "/" +
                        deployment.use_context.domain);
    }

    Decision decision;
    decision.policy_fingerprint = policy_fingerprint(policy);
    decision.evaluated_at = now;

    // 1. Evidence sufficiency, before any scoring.
    SufficiencyReport sufficiency;
    try {
        sufficiency = check_sufficiency(bundle, policy, store, now);
    } catch (const Error& e) {
        decision.outcome = Outcome::Denied;
        decision.reasons.push_back(std::string("evidence:integrity:") + e.what());
        return decision;
    }
    if (!sufficiency.satisfied) {
        decision.outcome = Outcome::Denied;
        for (const auto& r : sufficiency.per_requirement) {
            if (!r.satisfied) {
                decision.reasons.push_back(std::string("evidence:") +
                                           to_string(r.requirement.kind));
            }
        }
        if (sufficiency.action_on_failure == MissingEvidenceAction::Escalate) {
            decision.reasons.push_back("escalate:human-review");
        }
        return decision;
    }

    // 2. Scores from declared metrics.
    ScoreVector scores;
    try {
        scores = assemble_score_vector(bundle, store);
    } catch (const Error& e) {
        decision.outcome = Outcome::Denied;
        decision.reasons.push_back(std::string("scoring:") + e.what());
        return decision;
    }
    decision.score_vector = scores;

    // 3. Oversight floor.
    if (policy.oversight_floor &&
        static_cast<int>(deployment.human_oversight.mode) < static_cast<int>(*policy.oversight_floor)) {
        decision.outcome = Outcome::Denied;
        decision.reasons.push_back(std::string("oversight:required=") +
                                   to_string(*policy.oversight_floor) +
                                   ",observed=" + to_string(deployment.human_oversight.mode));
        return decision;
    }

    // 4. The policy's decision rule.
    GateResult gate = evaluate_rule(scores, policy);
    if (!gate.passed) {
        decision.outcome = Outcome::Denied;
        for (const auto& f : gate.failing) {
            decision.reasons.push_back(reason_for(f));
        }
        return decision;
    }

    // 5. Conditions for marginal dimensions.
    decision.conditions = derive_conditions(scores, policy);
    decision.outcome =
        decision.conditions.empty() ? Outcome::Approved : Outcome::ApprovedWithConditions;
    return decision;
}

ConditionStatus check_condition(const Condition& condition, const EvidenceBundle& bundle,
                                const DeploymentDescriptor& deployment, std::int64_t issued_at,
                                std::int64_t now) {
    switch (condition.kind) {
        case ConditionKind::EnhancedLogging: {
            std::int64_t interval_days = condition.parameters.at("interval_days");
            std::int64_t newest = -1;
            for (const auto& ref : bundle.entries) {
                if (ref.kind == ArtefactKind::LogAttestation) {
                    newest = std::max(newest, ref.timestamp);
                }
            }
            if (newest < 0) {
                return {false, "no LogAttestation in bundle"};
            }
            std::int64_t age = now - newest;
            if (age <= interval_days * 86400) {
                return {true, "newest LogAttestation is " + std::to_string(age / 86400) +
                                  " days old"};
            }
            return {false, "newest LogAttestation is " + std::to_string(age / 86400) +
                               " days old, limit " + std::to_string(interval_days)};
        }
        case ConditionKind::MandatoryHumanVeto: {
            auto mode = deployment.human_oversight.mode;
            if (mode == OversightMode::Veto || mode == OversightMode::CoSign) {
                return {true, std::string("oversight mode is ") + to_string(mode)};
            }
            return {false, std::string("oversight mode is ") + to_string(mode) +
                               ", veto or co-sign required"};
        }
        case ConditionKind::Reassessment: {
            std::int64_t deadline_days = condition.parameters.at("deadline_days");
            if (now < issued_at + deadline_days * 86400) {
                return {true, "reassessment window open"};
            }
            return {false, "reassessment overdue: deadline was " +
                               std::to_string(deadline_days) + " days after issuance"};
        }
    }
    return {false, "unknown condition kind"};
}

} // namespace deployauth
