#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace deployauth::crypto {

using Hash32 = std::array<std::uint8_t, 32>;

// Idempotent libsodium initialisation; called by every entry point below.
void ensure_init();

Hash32 sha256(std::string_view bytes);
std::string sha256_hex(std::string_view bytes);

std::string to_hex(const std::uint8_t* data, std::size_t len);
std::string to_hex(const Hash32& h);
// Throws Error(InvalidKey) on odd length or non-hex characters.
std::vector<std::uint8_t> from_hex(std::string_view hex);

bool is_hex_digest(std::string_view s); // 64 lowercase hex chars

// Ed25519 over 32-byte seeds. Key files carry the seed (private) and the
// public key as 64 lowercase hex characters each; signatures are 128 hex
// characters (64 bytes).
struct KeyPair {
    std::string seed_hex;   // 64 hex chars, private
    std::string public_hex; // 64 hex chars
};

KeyPair generate_keypair();
KeyPair keypair_from_seed_hex(std::string_view seed_hex); // Error(InvalidKey)

std::string sign_hex(std::string_view message, std::string_view seed_hex);
bool verify_signature(std::string_view message, std::string_view signature_hex,
                      std::string_view public_hex);

// Stable short identifier for an issuer key: first 16 hex chars of
// SHA-256 over the raw public key bytes.
std::string key_id(std::string_view public_hex);

} // namespace deployauth::crypto
