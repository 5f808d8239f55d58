#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

namespace deployauth {

using Json = nlohmann::json;

// Canonical encoding: UTF-8 JSON with object keys sorted by codepoint, no
// insignificant whitespace, integers in shortest decimal form, minimal string
// escaping. The encodable subset is maps with string keys, lists, strings,
// integers and booleans. Floats and nulls are rejected so that every encoded
// value hashes identically across implementations.
std::string canonicalize(const Json& value); // Error(UnencodableValue)

// Parses JSON text and validates it against the encodable subset.
// Error(SyntaxError) on malformed input, Error(UnencodableValue) on values
// outside the subset.
Json parse_canonical(std::string_view bytes);

// Returns false (with an explanation in *why when given) instead of throwing.
bool is_encodable(const Json& value, std::string* why = nullptr);

} // namespace deployauth
