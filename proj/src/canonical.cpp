#include "deployauth/canonical.hpp"

#include "deployauth/errors.hpp"

namespace deployauth {

namespace {

bool check_encodable(const Json& v, std::string& why) {
    switch (v.type()) {
        case Json::value_t::boolean:
        case Json::value_t::number_integer:
        case Json::value_t::number_unsigned:
        case Json::value_t::string:
            return true;
        case Json::value_t::number_float:
            why = "floating-point numbers are not encodable";
            return false;
        case Json::value_t::null:
            why = "null is not encodable";
            return false;
        case Json::value_t::binary:
        case Json::value_t::discarded:
            why = "value type is not encodable";
            return false;
        case Json::value_t::array:
            for (const auto& item : v) {
                if (!check_encodable(item, why)) return false;
            }
            return true;
        case Json::value_t::object:
            for (const auto& [key, item] : v.items()) {
                (void)key; // keys are strings by construction in JSON
                if (!check_encodable(item, why)) return false;
            }
            return true;
    }
    why = "value type is not encodable";
    return false;
}

} // namespace

bool is_encodable(const Json& value, std::string* why) {
    std::string reason;
    bool ok = check_encodable(value, reason);
    if (!ok && why != nullptr) *why = reason;
    return ok;
}

std::string canonicalize(const Json& value) {
    std::string why;
    if (!check_encodable(value, why)) {
        throw Error(Errc::UnencodableValue, why);
    }
    // nlohmann::json keeps object keys in std::map order, which for UTF-8
    // strings equals codepoint order; dump(-1) emits compact output with
    // minimal escaping and shortest-form integers.
    try {
        return value.dump(-1, ' ', false, Json::error_handler_t::strict);
    } catch (const Json::type_error& e) {
        throw Error(Errc::UnencodableValue, e.what()); // invalid UTF-8 in a string
    }
}

Json parse_canonical(std::string_view bytes) {
    Json parsed;
    try {
        parsed = Json::parse(bytes);
    } catch (const Json::parse_error& e) {
        throw Error(Errc::SyntaxError, e.what());
    }
    std::string why;
    if (!check_encodable(parsed, why)) {
        throw Error(Errc::UnencodableValue, why);
    }
    return parsed;
}

} // namespace deployauth
