#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "deployauth/artefact.hpp"
#include "deployauth/conditions.hpp"
#include "deployauth/core.hpp"

namespace deployauth {

// Per-dimension minimum scores set by a jurisdiction/domain policy. Gating is
// component-wise: pass iff score(d) >= threshold(d) for every dimension.
class ThresholdVector {
public:
    ThresholdVector() = default;
    explicit ThresholdVector(const std::map<Dimension, Score>& entries); // MissingDimension/RangeViolation

    Score at(Dimension d) const { return entries_[index_of(d)]; }
    void set(Dimension d, Score s) { entries_[index_of(d)] = s; }
    bool operator==(const ThresholdVector&) const = default;

private:
    std::array<Score, 5> entries_{};
};

struct MinGateRule {
    bool ci_gating = false;
    bool operator==(const MinGateRule&) const = default;
};

struct LexStage {
    std::vector<Dimension> dimensions;       // non-empty, no duplicates
    std::map<Dimension, Score> thresholds;   // one per stage dimension
    bool ci_gating = false;
    bool operator==(const LexStage&) const = default;
};

// Stages evaluated in order; the first stage with any violating dimension
// fails the whole gate. Dimensions not covered by a stage form an implicit
// final min-gate over the policy's base thresholds.
struct LexicographicRule {
    std::vector<LexStage> stages;
    bool operator==(const LexicographicRule&) const = default;
};

struct WeightedRule {
    std::map<Dimension, Score> weights; // hundredths, all five, sum exactly 10000
    Score cutoff = 0;
    std::map<Dimension, Score> floors;  // absent dimension = floor 0
    bool ci_gating = false;
    bool operator==(const WeightedRule&) const = default;
};

using DecisionRule = std::variant<MinGateRule, LexicographicRule, WeightedRule>;

struct EvidenceRequirement {
    ArtefactKind kind = ArtefactKind::ModelCard;
    int min_count = 1;
    std::optional<int> max_age_days; // absent = no freshness bound
    bool operator==(const EvidenceRequirement&) const = default;
};

enum class MissingEvidenceAction { Deny, Escalate };

const char* to_string(MissingEvidenceAction a);
std::optional<MissingEvidenceAction> missing_evidence_action_from_string(std::string_view name);

// One versioned policy for a (jurisdiction, domain): thresholds, decision
// rule, evidence obligations and condition templates. Policies are legal
// instruments; parsing is strict and unknown fields are rejected.
struct Policy {
    std::string policy_id;
    std::string version; // dotted integers, e.g. "1.1"
    std::string jurisdiction;
    std::string domain;
    ThresholdVector thresholds;
    DecisionRule rule;
    std::vector<EvidenceRequirement> evidence_requirements;
    MissingEvidenceAction missing_evidence_action = MissingEvidenceAction::Deny;
    std::vector<ConditionTemplate> condition_templates;
    std::map<Dimension, Score> conditional_band; // absent dimension = band 0
    std::optional<OversightMode> oversight_floor;

    Score band(Dimension d) const {
        auto it = conditional_band.find(d);
        return it == conditional_band.end() ? 0 : it->second;
    }
    bool operator==(const Policy&) const = default;
};

// Errors: SyntaxError (malformed document), SchemaError (missing/unknown
// fields), InvariantError (e.g. weights not summing to 10000).
Policy parse_policy(std::string_view bytes);

Json to_json(const Policy& p);
std::string serialize_policy(const Policy& p); // canonical bytes

// SHA-256 hex of the policy's canonical encoding; stable across
// reserialization.
std::string policy_fingerprint(const Policy& p);

// Dotted-integer version comparison: negative / zero / positive like strcmp.
// Throws Error(SchemaError) on non-numeric components.
int compare_versions(std::string_view a, std::string_view b);

// Holds parsed policies keyed by (jurisdiction, domain, version). Reads may
// be concurrent; writes are the caller's to serialize.
class PolicyRegistry {
public:
    // Error(AmbiguousVersion) when a different policy already claims the same
    // (jurisdiction, domain, version). Re-adding an identical policy is a no-op.
    void add(Policy p);

    // Exact version match when given, else the highest version for the pair.
    // Errors: PolicyNotFound.
    const Policy& resolve(std::string_view jurisdiction, std::string_view domain,
                          std::optional<std::string_view> version = std::nullopt) const;

    std::size_t size() const { return policies_.size(); }
    const std::vector<Policy>& all() const { return policies_; }

private:
    std::vector<Policy> policies_;
};

} // namespace deployauth
