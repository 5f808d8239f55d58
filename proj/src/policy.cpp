#include "deployauth/policy.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "deployauth/crypto.hpp"
#include "deployauth/errors.hpp"

namespace deployauth {

ThresholdVector::ThresholdVector(const std::map<Dimension, Score>& entries) {
    for (Dimension d : kAllDimensions) {
        auto it = entries.find(d);
        if (it == entries.end()) {
            throw Error(Errc::MissingDimension, to_string(d));
        }
        if (it->second < 0 || it->second > kScoreMax) {
            throw Error(Errc::RangeViolation,
                        std::string("threshold out of range for ") + to_string(d));
        }
        entries_[index_of(d)] = it->second;
    }
}

const char* to_string(MissingEvidenceAction a) {
    switch (a) {
        case MissingEvidenceAction::Deny: return "DENY";
        case MissingEvidenceAction::Escalate: return "ESCALATE";
    }
    return "?";
}

std::optional<MissingEvidenceAction> missing_evidence_action_from_string(std::string_view name) {
    if (name == "DENY") return MissingEvidenceAction::Deny;
    if (name == "ESCALATE") return MissingEvidenceAction::Escalate;
    return std::nullopt;
}

int compare_versions(std::string_view a, std::string_view b) {
    auto parse = [](std::string_view v) {
        std::vector<std::int64_t> parts;
        std::size_t pos = 0;
        while (pos <= v.size()) {
            std::size_t dot = v.find('.', pos);
            std::string_view part = v.substr(pos, dot == std::string_view::npos ? v.size() - pos
                                                                                : dot - pos);
            std::int64_t n = 0;
            auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), n);
            if (ec != std::errc() || ptr != part.data() + part.size() || part.empty() || n < 0) {
                throw Error(Errc::SchemaError,
                            "version must be dotted non-negative integers: " + std::string(v));
            }
            parts.push_back(n);
            if (dot == std::string_view::npos) break;
            pos = dot + 1;
        }
        return parts;
    };
    auto pa = parse(a);
    auto pb = parse(b);
    std::size_t n = std::max(pa.size(), pb.size());
    for (std::size_t i = 0; i < n; ++i) {
        std::int64_t x = i < pa.size() ? pa[i] : 0;
        std::int64_t y = i < pb.size() ? pb[i] : 0;
        if (x != y) return x < y ? -1 : 1;
    }
    return 0;
}

namespace {

std::map<Dimension, Score> dimension_scores_from_json(const Json& j, const char* context,
                                                      bool require_all) {
    if (!j.is_object()) {
        throw Error(Errc::SchemaError, std::string(context) + " must be an object");
    }
    std::map<Dimension, Score> out;
    for (const auto& [key, val] : j.items()) {
        auto d = dimension_from_string(key);
        if (!d) {
            throw Error(Errc::SchemaError, std::string(context) + ": unknown dimension '" + key + "'");
        }
        if (!val.is_number_integer() && !val.is_number_unsigned()) {
            throw Error(Errc::SchemaError, std::string(context) + ": scores must be integers");
        }
        auto s = val.get<std::int64_t>();
        if (s < 0 || s > kScoreMax) {
            throw Error(Errc::InvariantError,
                        std::string(context) + ": value out of range 0..10000 for " + key);
        }
        out[*d] = static_cast<Score>(s);
    }
    if (require_all && out.size() != kAllDimensions.size()) {
        throw Error(Errc::SchemaError, std::string(context) + " must cover all five dimensions");
    }
    return out;
}

Json dimension_scores_to_json(const std::map<Dimension, Score>& m) {
    Json j = Json::object();
    for (const auto& [d, s] : m) {
        j[to_string(d)] = s;
    }
    return j;
}

void reject_unknown_fields(const Json& j, const std::set<std::string>& allowed,
                           const char* context) {
    for (const auto& [key, val] : j.items()) {
        (void)val;
        if (!allowed.contains(key)) {
            throw Error(Errc::SchemaError, std::string(context) + ": unknown field '" + key + "'");
        }
    }
}

const Json& require_field(const Json& j, const char* key, const char* context) {
    auto it = j.find(key);
    if (it == j.end()) {
        throw Error(Errc::SchemaError, std::string(context) + ": missing field '" + key + "'");
    }
    return *it;
}

DecisionRule rule_from_json(const Json& j) {
    if (!j.is_object()) {
        throw Error(Errc::SchemaError, "rule must be an object");
    }
    auto type = require_field(j, "type", "rule").get<std::string>();
    if (type == "min_gate") {
        reject_unknown_fields(j, {"type", "ci_gating"}, "min_gate rule");
        MinGateRule r;
        r.ci_gating = require_field(j, "ci_gating", "min_gate rule").get<bool>();
        return r;
    }
    if (type == "lexicographic") {
        reject_unknown_fields(j, {"type", "stages"}, "lexicographic rule");
        LexicographicRule r;
        const auto& stages = require_field(j, "stages", "lexicographic rule");
        if (!stages.is_array()) {
            throw Error(Errc::SchemaError, "lexicographic stages must be a list");
        }
        std::set<Dimension> seen;
        for (const auto& sj : stages) {
            reject_unknown_fields(sj, {"dimensions", "thresholds", "ci_gating"}, "stage");
            LexStage stage;
            const auto& dims = require_field(sj, "dimensions", "stage");
            if (!dims.is_array() || dims.empty()) {
                throw Error(Errc::SchemaError, "stage dimensions must be a non-empty list");
            }
            for (const auto& dj : dims) {
                auto d = dimension_from_string(dj.get<std::string>());
                if (!d) {
                    throw Error(Errc::SchemaError,
                                "unknown dimension: " + dj.get<std::string>());
                }
                if (!seen.insert(*d).second) {
                    throw Error(Errc::InvariantError,
                                std::string("dimension appears in more than one stage: ") +
                                    to_string(*d));
                }
                stage.dimensions.push_back(*d);
            }
            stage.thresholds =
                dimension_scores_from_json(require_field(sj, "thresholds", "stage"),
                                           "stage thresholds", false);
            for (Dimension d : stage.dimensions) {
                if (!stage.thresholds.contains(d)) {
                    throw Error(Errc::SchemaError,
                                std::string("stage threshold missing for ") + to_string(d));
                }
            }
            if (stage.thresholds.size() != stage.dimensions.size()) {
                throw Error(Errc::SchemaError,
                            "stage thresholds must match the stage's dimensions");
            }
            stage.ci_gating = require_field(sj, "ci_gating", "stage").get<bool>();
            r.stages.push_back(std::move(stage));
        }
        return r;
    }
    if (type == "weighted") {
        reject_unknown_fields(j, {"type", "weights", "cutoff", "floors", "ci_gating"},
                              "weighted rule");
        WeightedRule r;
        r.weights = dimension_scores_from_json(require_field(j, "weights", "weighted rule"),
                                               "weights", true);
        std::int64_t sum = 0;
        for (const auto& [d, w] : r.weights) {
            (void)d;
            sum += w;
        }
        if (sum != kScoreMax) {
            throw Error(Errc::InvariantError,
                        "weights must sum to exactly 10000, got " + std::to_string(sum));
        }
        const auto& cutoff = require_field(j, "cutoff", "weighted rule");
        if (!cutoff.is_number_integer() && !cutoff.is_number_unsigned()) {
            throw Error(Errc::SchemaError, "cutoff must be an integer");
        }
        r.cutoff = cutoff.get<Score>();
        if (r.cutoff < 0 || r.cutoff > kScoreMax) {
            throw Error(Errc::InvariantError, "cutoff out of range 0..10000");
        }
        if (j.contains("floors")) {
            r.floors = dimension_scores_from_json(j.at("floors"), "floors", false);
        }
        r.ci_gating = require_field(j, "ci_gating", "weighted rule").get<bool>();
        return r;
    }
    throw Error(Errc::SchemaError, "unknown rule type: " + type);
}

Json rule_to_json(const DecisionRule& rule) {
    if (const auto* mg = std::get_if<MinGateRule>(&rule)) {
        return Json{{"type", "min_gate"}, {"ci_gating", mg->ci_gating}};
    }
    if (const auto* lex = std::get_if<LexicographicRule>(&rule)) {
        Json stages = Json::array();
        for (const auto& stage : lex->stages) {
            Json dims = Json::array();
            for (Dimension d : stage.dimensions) dims.push_back(to_string(d));
            stages.push_back(Json{{"dimensions", dims},
                                  {"thresholds", dimension_scores_to_json(stage.thresholds)},
                                  {"ci_gating", stage.ci_gating}});
        }
        return Json{{"type", "lexicographic"}, {"stages", stages}};
    }
    const auto& w = std::get<WeightedRule>(rule);
    return Json{{"type", "weighted"},
                {"weights", dimension_scores_to_json(w.weights)},
                {"cutoff", w.cutoff},
                {"floors", dimension_scores_to_json(w.floors)},
                {"ci_gating", w.ci_gating}};
}

} // namespace

Policy parse_policy(std::string_view bytes) {
    Json j = parse_canonical(bytes);
    if (!j.is_object()) {
        throw Error(Errc::SchemaError, "policy document must be an object");
    }
    reject_unknown_fields(j,
                          {"policy_id", "version", "jurisdiction", "domain", "thresholds", "rule",
                           "evidence_requirements", "missing_evidence_action",
                           "condition_templates", "conditional_band", "oversight_floor"},
                          "policy");

    Policy p;
    p.policy_id = require_field(j, "policy_id", "policy").get<std::string>();
    p.version = require_field(j, "version", "policy").get<std::string>();
    compare_versions(p.version, p.version); // validates the format
    p.jurisdiction = require_field(j, "jurisdiction", "policy").get<std::string>();
    p.domain = require_field(j, "domain", "policy").get<std::string>();
    if (p.policy_id.empty() || p.jurisdiction.empty() || p.domain.empty()) {
        throw Error(Errc::SchemaError, "policy_id, jurisdiction and domain must be non-empty");
    }
    p.thresholds = ThresholdVector(
        dimension_scores_from_json(require_field(j, "thresholds", "policy"), "thresholds", true));
    p.rule = rule_from_json(require_field(j, "rule", "policy"));

    const auto& reqs = require_field(j, "evidence_requirements", "policy");
    if (!reqs.is_array()) {
        throw Error(Errc::SchemaError, "evidence_requirements must be a list");
    }
    for (const auto& rj : reqs) {
        reject_unknown_fields(rj, {"kind", "min_count", "max_age_days"}, "evidence requirement");
        EvidenceRequirement req;
        auto kind_name = require_field(rj, "kind", "evidence requirement").get<std::string>();
        auto kind = artefact_kind_from_string(kind_name);
        if (!kind) {
            throw Error(Errc::SchemaError, "unknown artefact kind: " + kind_name);
        }
        req.kind = *kind;
        req.min_count = require_field(rj, "min_count", "evidence requirement").get<int>();
        if (req.min_count < 1) {
            throw Error(Errc::InvariantError, "min_count must be >= 1");
        }
        if (rj.contains("max_age_days")) {
            int days = rj.at("max_age_days").get<int>();
            if (days < 1) {
                throw Error(Errc::InvariantError, "max_age_days must be >= 1");
            }
            req.max_age_days = days;
        }
        p.evidence_requirements.push_back(req);
    }

    p.missing_evidence_action = [&] {
        auto name = require_field(j, "missing_evidence_action", "policy").get<std::string>();
        auto a = missing_evidence_action_from_string(name);
        if (!a) {
            throw Error(Errc::SchemaError, "missing_evidence_action must be DENY or ESCALATE");
        }
        return *a;
    }();

    const auto& templates = require_field(j, "condition_templates", "policy");
    if (!templates.is_array()) {
        throw Error(Errc::SchemaError, "condition_templates must be a list");
    }
    for (const auto& tj : templates) {
        p.condition_templates.push_back(condition_template_from_json(tj));
    }

    p.conditional_band = dimension_scores_from_json(
        require_field(j, "conditional_band", "policy"), "conditional_band", false);
    for (Dimension d : kAllDimensions) {
        if (p.thresholds.at(d) + p.band(d) > kScoreMax) {
            throw Error(Errc::InvariantError,
                        std::string("threshold + conditional band exceeds 10000 for ") +
                            to_string(d));
        }
    }

    if (j.contains("oversight_floor")) {
        auto name = j.at("oversight_floor").get<std::string>();
        auto mode = oversight_mode_from_string(name);
        if (!mode) {
            throw Error(Errc::SchemaError, "unknown oversight mode: " + name);
        }
        p.oversight_floor = *mode;
    }
    return p;
}

Json to_json(const Policy& p) {
    std::map<Dimension, Score> thresholds;
    for (Dimension d : kAllDimensions) thresholds[d] = p.thresholds.at(d);

    Json reqs = Json::array();
    for (const auto& r : p.evidence_requirements) {
        Json rj{{"kind", to_string(r.kind)}, {"min_count", r.min_count}};
        if (r.max_age_days) rj["max_age_days"] = *r.max_age_days;
        reqs.push_back(rj);
    }
    Json templates = Json::array();
    for (const auto& t : p.condition_templates) templates.push_back(to_json(t));

    Json j{
        {"policy_id", p.policy_id},
        {"version", p.version},
        {"jurisdiction", p.jurisdiction},
        {"domain", p.domain},
        {"thresholds", dimension_scores_to_json(thresholds)},
        {"rule", rule_to_json(p.rule)},
        {"evidence_requirements", reqs},
        {"missing_evidence_action", to_string(p.missing_evidence_action)},
        {"condition_templates", templates},
        {"conditional_band", dimension_scores_to_json(p.conditional_band)},
    };
    if (p.oversight_floor) j["oversight_floor"] = to_string(*p.oversight_floor);
    return j;
}

std::string serialize_policy(const Policy& p) {
    return canonicalize(to_json(p));
}

std::string policy_fingerprint(const Policy& p) {
    return crypto::sha256_hex(serialize_policy(p));
}

void PolicyRegistry::add(Policy p) {
    for (const auto& existing : policies_) {
        if (existing.jurisdiction == p.jurisdiction && existing.domain == p.domain &&
            compare_versions(existing.version, p.version) == 0) {
            if (policy_fingerprint(existing) == policy_fingerprint(p)) {
                return; // identical re-add
            }
            throw Error(Errc::AmbiguousVersion,
                        p.jurisdiction + "/" + p.domain + " version " + p.version +
                            " claimed by two different policies");
        }
    }
    policies_.push_back(std::move(p));
}

const Policy& PolicyRegistry::resolve(std::string_view jurisdiction, std::string_view domain,
                                      std::optional<std::string_view> version) const {
    const Policy* best = nullptr;
    for (const auto& p : policies_) {
        if (p.jurisdiction != jurisdiction || p.domain != domain) continue;
        if (version) {
            if (compare_versions(p.version, *version) == 0) return p;
            continue;
        }
        if (best == nullptr || compare_versions(p.version, best->version) > 0) {
            best = &p;
        }
    }
    if (best == nullptr) {
        throw Error(Errc::PolicyNotFound,
                    std::string(jurisdiction) + "/" + std::string(domain) +
                        (version ? " version " + std::string(*version) : ""));
    }
    return *best;
}

} // namespace deployauth
