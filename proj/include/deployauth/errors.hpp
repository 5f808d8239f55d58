#pragma once

#include <stdexcept>
#include <string>

namespace deployauth {

// Machine-readable error codes. Every throwing operation in the engine maps
// its failure to exactly one of these so callers (CLI, service, bindings)
// can report without string matching.
enum class Errc {
    MissingDimension,
    RangeViolation,
    SyntaxError,
    SchemaError,
    InvariantError,
    PolicyNotFound,
    AmbiguousVersion,
    StorageFailure,
    EmptyArtefact,
    NotFound,
    IntegrityViolation,
    UnknownArtefact,
    DuplicateEntry,
    MalformedTestReport,
    NoMetrics,
    UnscorableDimension,
    PolicyMismatch,
    UnencodableValue,
    HashMismatch,
    DeniedDeployment,
    InvalidKey,
    IndexOutOfRange,
    SizeOutOfRange,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace deployauth
