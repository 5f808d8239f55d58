#include "deployauth/core.hpp"

#include "deployauth/errors.hpp"

namespace deployauth {

const char* to_string(Dimension d) {
    switch (d) {
        case Dimension::Risk: return "Risk";
        case Dimension::Alignment: return "Alignment";
        case Dimension::Externality: return "Externality";
        case Dimension::Control: return "Control";
        case Dimension::Auditability: return "Auditability";
    }
    return "?";
}

std::optional<Dimension> dimension_from_string(std::string_view name) {
    for (Dimension d : kAllDimensions) {
        if (name == to_string(d)) return d;
    }
    return std::nullopt;
}

const char* to_string(OversightMode m) {
    switch (m) {
        case OversightMode::None: return "none";
        case OversightMode::Review: return "review";
        case OversightMode::Veto: return "veto";
        case OversightMode::CoSign: return "co-sign";
    }
    return "?";
}

std::optional<OversightMode> oversight_mode_from_string(std::string_view name) {
    for (OversightMode m :
         {OversightMode::None, OversightMode::Review, OversightMode::Veto, OversightMode::CoSign}) {
        if (name == to_string(m)) return m;
    }
    return std::nullopt;
}

std::vector<ValidationFinding> validate_deployment(const DeploymentDescriptor& d) {
    std::vector<ValidationFinding> findings;
    if (d.deployment_id.empty()) {
        findings.push_back({"deployment_id", "required"});
    }
    if (d.jurisdiction.empty()) {
        findings.push_back({"jurisdiction", "required"});
    }
    if (d.use_context.domain.empty()) {
        findings.push_back({"use_context.domain", "required"});
    }
    if (d.model_ref.id.empty()) {
        findings.push_back({"model_ref.id", "required"});
    }
    return findings;
}

std::vector<ValidationFinding> validate_deployment(const DeploymentDescriptor& d,
                                                   const std::set<std::string>& existing_ids) {
    auto findings = validate_deployment(d);
    if (existing_ids.contains(d.deployment_id)) {
        findings.push_back({"deployment_id", "not unique"});
    }
    return findings;
}

void validate_dimension_score(Dimension d, const DimensionScore& s) {
    if (s.ci_lo < 0 || s.ci_hi > kScoreMax || s.ci_lo > s.value || s.value > s.ci_hi) {
        throw Error(Errc::RangeViolation,
                    std::string(to_string(d)) + ": need 0 <= ci_lo <= value <= ci_hi <= 10000, got (" +
                        std::to_string(s.value) + ", [" + std::to_string(s.ci_lo) + ", " +
                        std::to_string(s.ci_hi) + "])");
    }
}

ScoreVector make_score_vector(const std::map<Dimension, DimensionScore>& entries) {
    ScoreVector v;
    for (Dimension d : kAllDimensions) {
        auto it = entries.find(d);
        if (it == entries.end()) {
            throw Error(Errc::MissingDimension, to_string(d));
        }
        validate_dimension_score(d, it->second);
        v.entries_[index_of(d)] = it->second;
    }
    return v;
}

Json to_json(const ScoreVector& v) {
    Json j = Json::object();
    for (Dimension d : kAllDimensions) {
        const auto& s = v.at(d);
        j[to_string(d)] = Json{{"value", s.value}, {"ci_lo", s.ci_lo}, {"ci_hi", s.ci_hi}};
    }
    return j;
}

ScoreVector score_vector_from_json(const Json& j) {
    if (!j.is_object()) {
        throw Error(Errc::SchemaError, "score vector must be an object");
    }
    std::map<Dimension, DimensionScore> entries;
    for (const auto& [key, val] : j.items()) {
        auto d = dimension_from_string(key);
        if (!d) {
            throw Error(Errc::SchemaError, "unknown dimension: " + key);
        }
        if (!val.is_object() || !val.contains("value") || !val.contains("ci_lo") ||
            !val.contains("ci_hi")) {
            throw Error(Errc::SchemaError, "dimension score needs value/ci_lo/ci_hi: " + key);
        }
        entries[*d] = DimensionScore{val.at("value").get<Score>(), val.at("ci_lo").get<Score>(),
                                     val.at("ci_hi").get<Score>()};
    }
    return make_score_vector(entries);
}

Json to_json(const DeploymentDescriptor& d) {
    return Json{
        {"deployment_id", d.deployment_id},
        {"model_ref", Json{{"id", d.model_ref.id}, {"version", d.model_ref.version}}},
        {"data_refs", d.data_refs},
        {"action_space",
         Json{{"description", d.action_space.description}, {"tags", d.action_space.tags}}},
        {"human_oversight", Json{{"mode", to_string(d.human_oversight.mode)},
                                 {"description", d.human_oversight.description}}},
        {"control_mechanisms", Json{{"override", d.control_mechanisms.override_enabled},
                                    {"shutdown", d.control_mechanisms.shutdown},
                                    {"sandboxed", d.control_mechanisms.sandboxed},
                                    {"description", d.control_mechanisms.description}}},
        {"use_context",
         Json{{"domain", d.use_context.domain}, {"purpose", d.use_context.purpose}}},
        {"jurisdiction", d.jurisdiction},
        {"scope_statement", d.scope_statement},
    };
}

namespace {

const Json& require_field(const Json& j, const char* key, const char* context) {
    auto it = j.find(key);
    if (it == j.end()) {
        throw Error(Errc::SchemaError, std::string(context) + ": missing field '" + key + "'");
    }
    return *it;
}

} // namespace

DeploymentDescriptor deployment_from_json(const Json& j) {
    if (!j.is_object()) {
        throw Error(Errc::SchemaError, "deployment descriptor must be an object");
    }
    DeploymentDescriptor d;
    d.deployment_id = require_field(j, "deployment_id", "deployment").get<std::string>();

    const auto& model = require_field(j, "model_ref", "deployment");
    d.model_ref.id = require_field(model, "id", "model_ref").get<std::string>();
    d.model_ref.version = require_field(model, "version", "model_ref").get<std::string>();

    d.data_refs = require_field(j, "data_refs", "deployment").get<std::vector<std::string>>();

    const auto& action = require_field(j, "action_space", "deployment");
    d.action_space.description =
        require_field(action, "description", "action_space").get<std::string>();
    d.action_space.tags = require_field(action, "tags", "action_space").get<std::vector<std::string>>();

    const auto& oversight = require_field(j, "human_oversight", "deployment");
    auto mode_name = require_field(oversight, "mode", "human_oversight").get<std::string>();
    auto mode = oversight_mode_from_string(mode_name);
    if (!mode) {
        throw Error(Errc::SchemaError, "unknown oversight mode: " + mode_name);
    }
    d.human_oversight.mode = *mode;
    d.human_oversight.description =
        require_field(oversight, "description", "human_oversight").get<std::string>();

    const auto& control = require_field(j, "control_mechanisms", "deployment");
    d.control_mechanisms.override_enabled =
        require_field(control, "override", "control_mechanisms").get<bool>();
    d.control_mechanisms.shutdown =
        require_field(control, "shutdown", "control_mechanisms").get<bool>();
    d.control_mechanisms.sandboxed =
        require_field(control, "sandboxed", "control_mechanisms").get<bool>();
    d.control_mechanisms.description =
        require_field(control, "description", "control_mechanisms").get<std::string>();

    const auto& context = require_field(j, "use_context", "deployment");
    d.use_context.domain = require_field(context, "domain", "use_context").get<std::string>();
    d.use_context.purpose = require_field(context, "purpose", "use_context").get<std::string>();

    d.jurisdiction = require_field(j, "jurisdiction", "deployment").get<std::string>();
    d.scope_statement = require_field(j, "scope_statement", "deployment").get<std::string>();
    return d;
}

} // namespace deployauth
