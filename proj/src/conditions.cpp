#include "deployauth/conditions.hpp"

#include "deployauth/errors.hpp"

namespace deployauth {

const char* to_string(ConditionKind k) {
    switch (k) {
        case ConditionKind::EnhancedLogging: return "EnhancedLogging";
        case ConditionKind::MandatoryHumanVeto: return "MandatoryHumanVeto";
        case ConditionKind::Reassessment: return "Reassessment";
    }
    return "?";
}

std::optional<ConditionKind> condition_kind_from_string(std::string_view name) {
    for (ConditionKind k : {ConditionKind::EnhancedLogging, ConditionKind::MandatoryHumanVeto,
                            ConditionKind::Reassessment}) {
        if (name == to_string(k)) return k;
    }
    return std::nullopt;
}

namespace {

std::map<std::string, std::int64_t> parameters_from_json(const Json& j, const char* context) {
    std::map<std::string, std::int64_t> params;
    if (!j.is_object()) {
        throw Error(Errc::SchemaError, std::string(context) + ": parameters must be an object");
    }
    for (const auto& [key, val] : j.items()) {
        if (!val.is_number_integer() && !val.is_number_unsigned()) {
            throw Error(Errc::SchemaError,
                        std::string(context) + ": parameter '" + key + "' must be an integer");
        }
        auto n = val.get<std::int64_t>();
        if (n <= 0) {
            throw Error(Errc::SchemaError,
                        std::string(context) + ": parameter '" + key + "' must be positive");
        }
        params[key] = n;
    }
    return params;
}

void check_required_parameters(ConditionKind kind,
                               const std::map<std::string, std::int64_t>& params,
                               const char* context) {
    switch (kind) {
        case ConditionKind::EnhancedLogging:
            if (!params.contains("interval_days")) {
                throw Error(Errc::SchemaError,
                            std::string(context) + ": EnhancedLogging needs interval_days");
            }
            break;
        case ConditionKind::Reassessment:
            if (!params.contains("deadline_days")) {
                throw Error(Errc::SchemaError,
                            std::string(context) + ": Reassessment needs deadline_days");
            }
            break;
        case ConditionKind::MandatoryHumanVeto:
            break;
    }
}

} // namespace

Json to_json(const Condition& c) {
    return Json{
        {"condition_id", c.condition_id},
        {"kind", to_string(c.kind)},
        {"parameters", c.parameters},
        {"trigger", to_string(c.trigger)},
    };
}

Condition condition_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("condition_id") || !j.contains("kind") ||
        !j.contains("parameters") || !j.contains("trigger")) {
        throw Error(Errc::SchemaError,
                    "condition needs condition_id/kind/parameters/trigger");
    }
    Condition c;
    c.condition_id = j.at("condition_id").get<std::string>();
    auto kind = condition_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) {
        throw Error(Errc::SchemaError, "unknown condition kind: " + j.at("kind").get<std::string>());
    }
    c.kind = *kind;
    c.parameters = parameters_from_json(j.at("parameters"), "condition");
    check_required_parameters(c.kind, c.parameters, "condition");
    auto trigger = dimension_from_string(j.at("trigger").get<std::string>());
    if (!trigger) {
        throw Error(Errc::SchemaError, "unknown dimension: " + j.at("trigger").get<std::string>());
    }
    c.trigger = *trigger;
    return c;
}

Json to_json(const ConditionTemplate& t) {
    return Json{
        {"condition_id", t.condition_id},
        {"kind", to_string(t.kind)},
        {"dimension", to_string(t.dimension)},
        {"parameters", t.parameters},
    };
}

ConditionTemplate condition_template_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("condition_id") || !j.contains("kind") ||
        !j.contains("dimension") || !j.contains("parameters")) {
        throw Error(Errc::SchemaError,
                    "condition template needs condition_id/kind/dimension/parameters");
    }
    for (const auto& [key, val] : j.items()) {
        (void)val;
        if (key != "condition_id" && key != "kind" && key != "dimension" && key != "parameters") {
            throw Error(Errc::SchemaError, "condition template: unknown field '" + key + "'");
        }
    }
    ConditionTemplate t;
    t.condition_id = j.at("condition_id").get<std::string>();
    auto kind = condition_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) {
        throw Error(Errc::SchemaError, "unknown condition kind: " + j.at("kind").get<std::string>());
    }
    t.kind = *kind;
    auto dim = dimension_from_string(j.at("dimension").get<std::string>());
    if (!dim) {
        throw Error(Errc::SchemaError, "unknown dimension: " + j.at("dimension").get<std::string>());
    }
    t.dimension = *dim;
    t.parameters = parameters_from_json(j.at("parameters"), "condition template");
    check_required_parameters(t.kind, t.parameters, "condition template");
    return t;
}

} // namespace deployauth
