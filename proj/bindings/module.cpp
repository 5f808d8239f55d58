#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "deployauth/engine.hpp"
#include "deployauth/errors.hpp"

namespace py = pybind11;
using namespace deployauth;

namespace {

// Bindings exchange JSON text at the boundary; the canonical encoding is the
// engine's native interchange format, so Python callers use plain dicts via
// json.dumps/loads.
Json parse_arg(const std::string& text) { return parse_canonical(text); }

ArtefactKind kind_arg(const std::string& name) {
    auto kind = artefact_kind_from_string(name);
    if (!kind) throw Error(Errc::SchemaError, "unknown artefact kind: " + name);
    return *kind;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "deployment authorisation engine core";

    py::register_exception<Error>(m, "EngineError");

    m.def("canonicalize", [](const std::string& text) { return canonicalize(parse_arg(text)); },
          py::arg("json_text"), "Canonical encoding of a JSON value (no floats, no nulls).");
    m.def("sha256_hex", [](const py::bytes& data) { return crypto::sha256_hex(std::string(data)); },
          py::arg("data"));
    m.def("policy_fingerprint",
          [](const std::string& text) { return policy_fingerprint(parse_policy(text)); },
          py::arg("policy_text"));

    m.def(
        "evaluate_min_gate",
        [](const std::string& scores_json, const std::string& thresholds_json, bool ci_gating) {
            ScoreVector scores = score_vector_from_json(parse_arg(scores_json));
            std::map<Dimension, Score> t;
            for (const auto& [key, val] : parse_arg(thresholds_json).items()) {
                auto d = dimension_from_string(key);
                if (!d) throw Error(Errc::SchemaError, "unknown dimension: " + key);
                t[*d] = val.get<Score>();
            }
            auto gate = evaluate_min_gate(scores, ThresholdVector(t), ci_gating);
            py::dict out;
            out["passed"] = gate.passed;
            py::list failing;
            for (const auto& f : gate.failing) {
                py::dict fd;
                fd["dimension"] = f.dimension ? to_string(*f.dimension) : "aggregate";
                fd["required"] = f.required;
                fd["observed"] = f.observed;
                fd["ci_gated"] = f.ci_gated;
                failing.append(fd);
            }
            out["failing"] = failing;
            return out;
        },
        py::arg("scores_json"), py::arg("thresholds_json"), py::arg("ci_gating") = false);

    m.def("merkle_root_hex", [](const std::vector<py::bytes>& payloads) {
        std::vector<merkle::Hash32> leaves;
        for (const auto& p : payloads) leaves.push_back(merkle::leaf_hash(std::string(p)));
        return crypto::to_hex(merkle::root(leaves));
    });

    py::class_<EngineHome>(m, "EngineHome")
        .def_static("init",
                    [](const std::filesystem::path& root, std::optional<std::string> seed) {
                        return EngineHome::init(root, std::move(seed));
                    },
                    py::arg("root"), py::arg("key_seed_hex") = std::nullopt)
        .def_static("open", &EngineHome::open, py::arg("root"))
        .def_property_readonly("root",
                               [](const EngineHome& h) { return h.root().string(); })
        .def("issuer_public_hex", &EngineHome::issuer_public_hex);

    py::class_<Engine>(m, "Engine")
        .def(py::init([](const std::filesystem::path& root) {
                 return std::make_unique<Engine>(EngineHome::open(root));
             }),
             py::arg("home_root"))
        .def("add_policy",
             [](Engine& e, const std::string& text) {
                 Policy p = e.add_policy(text);
                 return policy_fingerprint(p);
             })
        .def("put_artefact",
             [](Engine& e, const py::bytes& data, const std::string& kind, std::int64_t timestamp,
                const std::string& label, const std::string& bundle_id) {
                 auto ref = e.put_artefact(std::string(data), kind_arg(kind), timestamp, label);
                 if (!bundle_id.empty()) e.append_to_bundle(bundle_id, ref);
                 return ref.content_hash;
             },
             py::arg("data"), py::arg("kind"), py::arg("timestamp"), py::arg("label") = "",
             py::arg("bundle_id") = "")
        .def("create_bundle", &Engine::create_bundle, py::arg("bundle_id"),
             py::arg("deployment_id"))
        .def("bundle_fingerprint",
             [](Engine& e, const std::string& bundle_id) {
                 return bundle_fingerprint(e.load_bundle(bundle_id));
             })
        .def("assess",
             [](Engine& e, const std::string& deployment_json, const std::string& bundle_id,
                std::int64_t clock, int validity_days) {
                 auto deployment = deployment_from_json(parse_arg(deployment_json));
                 auto result = e.assess(deployment, bundle_id, deployment.jurisdiction,
                                        deployment.use_context.domain, std::nullopt, clock,
                                        validity_days);
                 Json out{{"decision", to_json(result.decision)},
                          {"package_hash", result.package_hash}};
                 if (result.certificate) {
                     out["certificate_id"] = result.certificate->certificate_id;
                     out["log_index"] = *result.log_index;
                 }
                 return canonicalize(out);
             },
             py::arg("deployment_json"), py::arg("bundle_id"), py::arg("clock"),
             py::arg("validity_days") = 365)
        .def("revoke",
             [](Engine& e, const std::string& certificate_id, const std::string& action,
                const std::string& reason, std::int64_t clock) {
                 auto a = revocation_action_from_string(action);
                 auto r = revocation_reason_from_string(reason);
                 if (!a || !r) throw Error(Errc::SchemaError, "unknown action or reason");
                 auto [record, sth] = e.revoke(certificate_id, *a, *r, clock);
                 return canonicalize(Json{{"record", to_json(record)}, {"sth", to_json(sth)}});
             },
             py::arg("certificate_id"), py::arg("action"), py::arg("reason"), py::arg("clock"))
        .def("certificate_status",
             [](const Engine& e, const std::string& certificate_id, std::int64_t clock) {
                 return std::string(to_string(e.certificate_status(certificate_id, clock)));
             },
             py::arg("certificate_id"), py::arg("clock"))
        .def("log_size", [](Engine& e) { return e.log().tree_size(); });

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}
