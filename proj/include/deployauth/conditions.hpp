#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "deployauth/core.hpp"

namespace deployauth {

// Machine-verifiable condition kinds attached to marginal approvals.
enum class ConditionKind {
    EnhancedLogging,    // parameters: interval_days — newest LogAttestation must be this fresh
    MandatoryHumanVeto, // no parameters — oversight mode must be veto or co-sign
    Reassessment,       // parameters: deadline_days — full reassessment due within this window
};

const char* to_string(ConditionKind k);
std::optional<ConditionKind> condition_kind_from_string(std::string_view name);

// Authored in policy files; instantiated when the named dimension lands in
// its marginal band [threshold, threshold + band).
struct ConditionTemplate {
    std::string condition_id;
    ConditionKind kind = ConditionKind::EnhancedLogging;
    Dimension dimension = Dimension::Risk;
    std::map<std::string, std::int64_t> parameters;
    bool operator==(const ConditionTemplate&) const = default;
};

struct Condition {
    std::string condition_id;
    ConditionKind kind = ConditionKind::EnhancedLogging;
    std::map<std::string, std::int64_t> parameters;
    Dimension trigger = Dimension::Risk; // dimension whose marginal score attached it
    bool operator==(const Condition&) const = default;
};

Json to_json(const Condition& c);
Condition condition_from_json(const Json& j);

Json to_json(const ConditionTemplate& t);
ConditionTemplate condition_template_from_json(const Json& j);

} // namespace deployauth
