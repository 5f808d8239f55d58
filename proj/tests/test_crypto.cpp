#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "deployauth/crypto.hpp"
#include "deployauth/errors.hpp"

using namespace deployauth;

// Digests pinned from an external SHA-256 implementation before the build.
TEST_CASE("sha256 known answers") {
    CHECK(crypto::sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(crypto::sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("hex round trip and validation") {
    auto bytes = crypto::from_hex("00ff10ab");
    CHECK(bytes == std::vector<std::uint8_t>{0x00, 0xff, 0x10, 0xab});
    CHECK(crypto::to_hex(bytes.data(), bytes.size()) == "00ff10ab");
    CHECK_THROWS_AS((void)crypto::from_hex("abc"), Error);
    CHECK_THROWS_AS((void)crypto::from_hex("zz"), Error);
    CHECK(crypto::is_hex_digest(crypto::sha256_hex("x")));
    CHECK_FALSE(crypto::is_hex_digest("short"));
    CHECK_FALSE(crypto::is_hex_digest(std::string(64, 'G')));
}

TEST_CASE("ed25519 sign and verify") {
    auto keys = crypto::keypair_from_seed_hex(
        "0000000000000000000000000000000000000000000000000000000000000001");
    std::string message = "license to operate";
    std::string sig = crypto::sign_hex(message, keys.seed_hex);
    CHECK(sig.size() == 128);
    CHECK(crypto::verify_signature(message, sig, keys.public_hex));
    CHECK_FALSE(crypto::verify_signature("license to operatf", sig, keys.public_hex));

    // deterministic: same seed, same signature
    CHECK(crypto::sign_hex(message, keys.seed_hex) == sig);

    // any single flipped signature byte must fail
    std::string bad = sig;
    bad[17] = bad[17] == 'a' ? 'b' : 'a';
    CHECK_FALSE(crypto::verify_signature(message, bad, keys.public_hex));

    auto other = crypto::keypair_from_seed_hex(
        "0000000000000000000000000000000000000000000000000000000000000002");
    CHECK_FALSE(crypto::verify_signature(message, sig, other.public_hex));
}

TEST_CASE("key material validation") {
    CHECK_THROWS_AS((void)crypto::keypair_from_seed_hex("deadbeef"), Error);
    auto pair = crypto::generate_keypair();
    CHECK(pair.seed_hex.size() == 64);
    CHECK(pair.public_hex.size() == 64);
    CHECK(crypto::key_id(pair.public_hex).size() == 16);
}
