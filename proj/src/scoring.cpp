#include "deployauth/scoring.hpp"

#include "deployauth/errors.hpp"

namespace deployauth {

std::vector<MetricReport> extract_metric_reports(const EvidenceBundle& bundle,
                                                 const ObjectStore& store) {
    std::vector<MetricReport> reports;
    for (const auto& ref : bundle.entries) {
        if (ref.kind != ArtefactKind::TestReport) continue;
        std::string bytes = store.get(ref.content_hash);

        Json doc;
        try {
            doc = parse_canonical(bytes);
        } catch (const Error& e) {
            throw Error(Errc::MalformedTestReport, ref.content_hash + ": " + e.what());
        }
        if (!doc.is_object() || !doc.contains("metrics") || !doc.at("metrics").is_array()) {
            throw Error(Errc::MalformedTestReport, ref.content_hash + ": needs a 'metrics' list");
        }
        for (const auto& mj : doc.at("metrics")) {
            auto bad = [&](const std::string& why) {
                return Error(Errc::MalformedTestReport, ref.content_hash + ": " + why);
            };
            if (!mj.is_object() || !mj.contains("dimension") || !mj.contains("metric_name") ||
                !mj.contains("value") || !mj.contains("ci_lo") || !mj.contains("ci_hi") ||
                !mj.contains("weight")) {
                throw bad("metric needs dimension/metric_name/value/ci_lo/ci_hi/weight");
            }
            MetricReport r;
            auto d = dimension_from_string(mj.at("dimension").get<std::string>());
            if (!d) {
                throw bad("unknown dimension: " + mj.at("dimension").get<std::string>());
            }
            r.dimension = *d;
            r.metric_name = mj.at("metric_name").get<std::string>();
            r.value = mj.at("value").get<Score>();
            r.ci_lo = mj.at("ci_lo").get<Score>();
            r.ci_hi = mj.at("ci_hi").get<Score>();
            r.weight = mj.at("weight").get<std::int64_t>();
            if (r.ci_lo < 0 || r.ci_hi > kScoreMax || r.ci_lo > r.value || r.value > r.ci_hi) {
                throw bad("metric '" + r.metric_name +
                          "' breaks 0 <= ci_lo <= value <= ci_hi <= 10000");
            }
            if (r.weight <= 0) {
                throw bad("metric '" + r.metric_name + "' weight must be positive");
            }
            r.source_artefact = ref.content_hash;
            reports.push_back(std::move(r));
        }
    }
    return reports;
}

namespace {

// round(num/den) with ties away from zero; inputs are non-negative here.
Score rounded_weighted_mean(std::int64_t num, std::int64_t den) {
    return static_cast<Score>((2 * num + den) / (2 * den));
}

} // namespace

DimensionScore score_dimension(std::span<const MetricReport> reports) {
    if (reports.empty()) {
        throw Error(Errc::NoMetrics, "no metric reports for dimension");
    }
    std::int64_t num_value = 0;
    std::int64_t num_lo = 0;
    std::int64_t num_hi = 0;
    std::int64_t den = 0;
    for (const auto& r : reports) {
        num_value += r.weight * r.value;
        num_lo += r.weight * r.ci_lo;
        num_hi += r.weight * r.ci_hi;
        den += r.weight;
    }
    DimensionScore s;
    s.value = rounded_weighted_mean(num_value, den);
    s.ci_lo = rounded_weighted_mean(num_lo, den);
    s.ci_hi = rounded_weighted_mean(num_hi, den);
    return s;
}

ScoreVector assemble_score_vector(const EvidenceBundle& bundle, const ObjectStore& store) {
    auto reports = extract_metric_reports(bundle, store);
    std::map<Dimension, std::vector<MetricReport>> by_dimension;
    for (auto& r : reports) {
        by_dimension[r.dimension].push_back(std::move(r));
    }

    std::string missing;
    for (Dimension d : kAllDimensions) {
        if (!by_dimension.contains(d)) {
            if (!missing.empty()) missing += ", ";
            missing += to_string(d);
        }
    }
    if (!missing.empty()) {
        throw Error(Errc::UnscorableDimension, missing);
    }

    std::map<Dimension, DimensionScore> entries;
    for (Dimension d : kAllDimensions) {
        entries[d] = score_dimension(by_dimension.at(d));
    }
    return make_score_vector(entries);
}

} // namespace deployauth
