#include "deployauth/errors.hpp"

namespace deployauth {

const char* to_string(Errc code) {
    switch (code) {
        case Errc::MissingDimension: return "MissingDimension";
        case Errc::RangeViolation: return "RangeViolation";
        case Errc::SyntaxError: return "SyntaxError";
        case Errc::SchemaError: return "SchemaError";
        case Errc::InvariantError: return "InvariantError";
        case Errc::PolicyNotFound: return "PolicyNotFound";
        case Errc::AmbiguousVersion: return "AmbiguousVersion";
        case Errc::StorageFailure: return "StorageFailure";
        case Errc::EmptyArtefact: return "EmptyArtefact";
        case Errc::NotFound: return "NotFound";
        case Errc::IntegrityViolation: return "IntegrityViolation";
        case Errc::UnknownArtefact: return "UnknownArtefact";
        case Errc::DuplicateEntry: return "DuplicateEntry";
        case Errc::MalformedTestReport: return "MalformedTestReport";
        case Errc::NoMetrics: return "NoMetrics";
        case Errc::UnscorableDimension: return "UnscorableDimension";
        case Errc::PolicyMismatch: return "PolicyMismatch";
        case Errc::UnencodableValue: return "UnencodableValue";
        case Errc::HashMismatch: return "HashMismatch";
        case Errc::DeniedDeployment: return "DeniedDeployment";
        case Errc::InvalidKey: return "InvalidKey";
        case Errc::IndexOutOfRange: return "IndexOutOfRange";
        case Errc::SizeOutOfRange: return "SizeOutOfRange";
    }
    return "UnknownError";
}

} // namespace deployauth
