#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "deployauth/canonical.hpp"
#include "deployauth/errors.hpp"
#include "support/ref_canonical.hpp"

using namespace deployauth;

TEST_CASE("key order is byte order regardless of input order") {
    Json a = parse_canonical(R"({"b":2,"a":1})");
    Json b = parse_canonical(R"({"a":1,"b":2})");
    CHECK(canonicalize(a) == canonicalize(b));
    CHECK(canonicalize(a) == R"({"a":1,"b":2})");
}

TEST_CASE("no insignificant whitespace, shortest integers, minimal escaping") {
    Json v = parse_canonical("{\n  \"x\": [1, -0, 42],\n  \"s\": \"a\\u0041\"\n}");
    CHECK(canonicalize(v) == R"({"s":"aA","x":[1,0,42]})");
}

TEST_CASE("floats are rejected wherever they hide") {
    CHECK_THROWS_WITH_AS((void)parse_canonical("1.5"), doctest::Contains("floating-point"),
                         Error);
    CHECK_THROWS_AS((void)parse_canonical(R"({"a":[1,2,3.0]})"), Error);
    CHECK_THROWS_AS((void)parse_canonical("1e3"), Error);
    Json j;
    j["x"] = 0.5;
    CHECK_THROWS_AS((void)canonicalize(j), Error);
    try {
        (void)canonicalize(j);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::UnencodableValue);
    }
}

TEST_CASE("null is outside the encodable subset") {
    CHECK_THROWS_AS((void)parse_canonical("null"), Error);
    Json j;
    j["x"] = nullptr;
    CHECK_THROWS_AS((void)canonicalize(j), Error);
}

TEST_CASE("malformed input is a syntax error") {
    try {
        (void)parse_canonical("{nope");
        FAIL("expected SyntaxError");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::SyntaxError);
    }
}

TEST_CASE("control characters and unicode") {
    Json v = Json::object();
    v["k"] = std::string("tab\there\nand\x01ctl");
    CHECK(canonicalize(v) == "{\"k\":\"tab\\there\\nand\\u0001ctl\"}");
    Json u = Json::object();
    u["caf\xc3\xa9"] = "sn\xc3\xb6";
    CHECK(canonicalize(u) == "{\"caf\xc3\xa9\":\"sn\xc3\xb6\"}");
}

TEST_CASE("hand-built cases agree with the independent encoder") {
    const char* cases[] = {
        "{}",
        "[]",
        "true",
        "false",
        "0",
        "-7",
        "18446744073709551615",
        "-9223372036854775808",
        R"("")",
        R"("plain")",
        R"("esc \" \\ \n")",
        R"([1,[2,[3,[]]],{"deep":{"deeper":[true,false]}}])",
        R"({"":0})",
        R"({"a":{"c":1,"b":2},"A":[],"aa":"x"})",
        R"({"z":"é","y":"é"})",
    };
    for (const char* text : cases) {
        CAPTURE(text);
        Json v = parse_canonical(text);
        CHECK(canonicalize(v) == testsupport::ref_canonicalize(v));
    }
}

namespace {

Json random_value(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 4);
    std::uniform_int_distribution<std::int64_t> ints(-1000000, 1000000);
    std::uniform_int_distribution<int> len(0, 4);
    std::uniform_int_distribution<int> chars(0, 0x7f);
    auto random_string = [&] {
        std::string s;
        int n = len(rng) + len(rng);
        for (int i = 0; i < n; ++i) {
            int c = chars(rng);
            s.push_back(static_cast<char>(c));
        }
        return s;
    };
    switch (pick(rng)) {
        case 0: return Json(ints(rng));
        case 1: return Json(rng() % 2 == 0);
        case 2: return Json(random_string());
        case 3: {
            Json arr = Json::array();
            int n = len(rng);
            for (int i = 0; i < n; ++i) arr.push_back(random_value(rng, depth - 1));
            return arr;
        }
        default: {
            Json obj = Json::object();
            int n = len(rng);
            for (int i = 0; i < n; ++i) obj[random_string()] = random_value(rng, depth - 1);
            return obj;
        }
    }
}

} // namespace

TEST_CASE("canonicalize . parse . canonicalize is canonicalize (1000 random values)") {
    std::mt19937_64 rng(20260101);
    for (int i = 0; i < 1000; ++i) {
        Json v = random_value(rng, 3);
        std::string once = canonicalize(v);
        std::string twice = canonicalize(parse_canonical(once));
        CHECK(once == twice);
        CHECK(once == testsupport::ref_canonicalize(v));
    }
}
