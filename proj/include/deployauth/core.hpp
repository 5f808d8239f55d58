#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "deployauth/canonical.hpp"

namespace deployauth {

// Fixed-point score in hundredths: 0..10000 spans 0.00..100.00. Integers
// keep canonical encodings and hashes bit-exact; floats never enter hashed
// material.
using Score = std::int32_t;
inline constexpr Score kScoreMax = 10000;

enum class Dimension {
    Risk,
    Alignment,
    Externality,
    Control,
    Auditability,
};

inline constexpr std::array<Dimension, 5> kAllDimensions = {
    Dimension::Risk,      Dimension::Alignment, Dimension::Externality,
    Dimension::Control,   Dimension::Auditability,
};

const char* to_string(Dimension d);
std::optional<Dimension> dimension_from_string(std::string_view name);
inline std::size_t index_of(Dimension d) { return static_cast<std::size_t>(d); }

// Human-oversight configurations ordered by strength; policies may demand a
// minimum mode.
enum class OversightMode { None, Review, Veto, CoSign };

const char* to_string(OversightMode m);
std::optional<OversightMode> oversight_mode_from_string(std::string_view name);

struct ModelRef {
    std::string id;
    std::string version;
    bool operator==(const ModelRef&) const = default;
};

struct ActionSpace {
    std::string description;
    std::vector<std::string> tags;
    bool operator==(const ActionSpace&) const = default;
};

struct HumanOversight {
    OversightMode mode = OversightMode::None;
    std::string description;
    bool operator==(const HumanOversight&) const = default;
};

struct ControlMechanisms {
    bool override_enabled = false;
    bool shutdown = false;
    bool sandboxed = false;
    std::string description;
    bool operator==(const ControlMechanisms&) const = default;
};

struct UseContext {
    std::string domain;
    std::string purpose;
    bool operator==(const UseContext&) const = default;
};

// A described deployment: the unit of authorisation. Always evaluated
// relative to a jurisdiction and a domain; permissibility is contextual,
// never model-intrinsic.
struct DeploymentDescriptor {
    std::string deployment_id;
    ModelRef model_ref;
    std::vector<std::string> data_refs;
    ActionSpace action_space;
    HumanOversight human_oversight;
    ControlMechanisms control_mechanisms;
    UseContext use_context;
    std::string jurisdiction;
    std::string scope_statement;
    bool operator==(const DeploymentDescriptor&) const = default;
};

struct ValidationFinding {
    std::string field;
    std::string rule;
    bool operator==(const ValidationFinding&) const = default;
};

// Empty result iff all descriptor invariants hold. Findings are returned,
// never thrown: callers decide what a violation costs.
std::vector<ValidationFinding> validate_deployment(const DeploymentDescriptor& d);
// Additionally checks deployment_id uniqueness against ids already in a store.
std::vector<ValidationFinding> validate_deployment(const DeploymentDescriptor& d,
                                                   const std::set<std::string>& existing_ids);

struct DimensionScore {
    Score value = 0;
    Score ci_lo = 0;
    Score ci_hi = 0;
    bool operator==(const DimensionScore&) const = default;
};

// One DimensionScore per dimension, all five present. Invariant per entry:
// 0 <= ci_lo <= value <= ci_hi <= 10000, enforced at construction.
class ScoreVector {
public:
    ScoreVector() = default;

    const DimensionScore& at(Dimension d) const { return entries_[index_of(d)]; }
    Score value(Dimension d) const { return entries_[index_of(d)].value; }
    Score ci_lo(Dimension d) const { return entries_[index_of(d)].ci_lo; }
    Score ci_hi(Dimension d) const { return entries_[index_of(d)].ci_hi; }

    bool operator==(const ScoreVector&) const = default;

    friend ScoreVector make_score_vector(const std::map<Dimension, DimensionScore>& entries);

private:
    std::array<DimensionScore, 5> entries_{};
};

// Errors: MissingDimension if a dimension is absent, RangeViolation if the
// interval ordering is broken.
ScoreVector make_score_vector(const std::map<Dimension, DimensionScore>& entries);

// Throws Error(RangeViolation) when the interval ordering is broken.
void validate_dimension_score(Dimension d, const DimensionScore& s);

Json to_json(const ScoreVector& v);
ScoreVector score_vector_from_json(const Json& j);

Json to_json(const DeploymentDescriptor& d);
DeploymentDescriptor deployment_from_json(const Json& j);

} // namespace deployauth
