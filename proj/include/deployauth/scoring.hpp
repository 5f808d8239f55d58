#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "deployauth/core.hpp"
#include "deployauth/evidence.hpp"

namespace deployauth {

// One declared metric, parsed from a TestReport artefact. The engine never
// measures systems itself; it aggregates what the evidence declares, with
// provenance back to the artefact hash.
struct MetricReport {
    Dimension dimension = Dimension::Risk;
    std::string metric_name;
    Score value = 0;
    Score ci_lo = 0;
    Score ci_hi = 0;
    std::int64_t weight = 0;     // positive fixed-point hundredths
    std::string source_artefact; // content hash of the TestReport
    bool operator==(const MetricReport&) const = default;
};

// Parses every TestReport artefact in the bundle. Payload format: an object
// with a "metrics" list of {dimension, metric_name, value, ci_lo, ci_hi,
// weight}.
// Errors: MalformedTestReport (names the offending artefact hash),
// IntegrityViolation (propagated).
std::vector<MetricReport> extract_metric_reports(const EvidenceBundle& bundle,
                                                 const ObjectStore& store);

// Weighted mean of values and of both interval endpoints, rounded half-up to
// integer hundredths. Errors: NoMetrics on empty input.
DimensionScore score_dimension(std::span<const MetricReport> reports);

// Scores all five dimensions from the bundle's metric reports. A dimension
// with no metrics fails the whole assembly: silence is not evidence.
// Errors: UnscorableDimension (names the missing dimensions), plus anything
// extract_metric_reports raises.
ScoreVector assemble_score_vector(const EvidenceBundle& bundle, const ObjectStore& store);

} // namespace deployauth
