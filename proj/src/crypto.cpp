#include "deployauth/crypto.hpp"

#include <sodium.h>

#include <cctype>
#include <mutex>

#include "deployauth/errors.hpp"

namespace deployauth::crypto {

void ensure_init() {
    static std::once_flag flag;
    std::call_once(flag, [] {
        if (sodium_init() < 0) {
            throw Error(Errc::StorageFailure, "libsodium initialisation failed");
        }
    });
}

Hash32 sha256(std::string_view bytes) {
    ensure_init();
    Hash32 out{};
    crypto_hash_sha256(out.data(), reinterpret_cast<const unsigned char*>(bytes.data()),
                       bytes.size());
    return out;
}

std::string sha256_hex(std::string_view bytes) {
    return to_hex(sha256(bytes));
}

std::string to_hex(const std::uint8_t* data, std::size_t len) {
    static const char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (std::size_t i = 0; i < len; ++i) {
        out.push_back(digits[data[i] >> 4]);
        out.push_back(digits[data[i] & 0x0f]);
    }
    return out;
}

std::string to_hex(const Hash32& h) {
    return to_hex(h.data(), h.size());
}

namespace {

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
}

} // namespace

std::vector<std::uint8_t> from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) {
        throw Error(Errc::InvalidKey, "hex string has odd length");
    }
    std::vector<std::uint8_t> out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_nibble(hex[i]);
        int lo = hex_nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) {
            throw Error(Errc::InvalidKey, "non-hex character in hex string");
        }
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

bool is_hex_digest(std::string_view s) {
    if (s.size() != 64) return false;
    for (char c : s) {
        if (hex_nibble(c) < 0) return false;
    }
    return true;
}

KeyPair generate_keypair() {
    ensure_init();
    std::array<std::uint8_t, crypto_sign_SEEDBYTES> seed{};
    randombytes_buf(seed.data(), seed.size());
    return keypair_from_seed_hex(to_hex(seed.data(), seed.size()));
}

KeyPair keypair_from_seed_hex(std::string_view seed_hex) {
    ensure_init();
    auto seed = from_hex(seed_hex);
    if (seed.size() != crypto_sign_SEEDBYTES) {
        throw Error(Errc::InvalidKey, "seed must be 32 bytes (64 hex chars)");
    }
    std::array<std::uint8_t, crypto_sign_PUBLICKEYBYTES> pk{};
    std::array<std::uint8_t, crypto_sign_SECRETKEYBYTES> sk{};
    crypto_sign_seed_keypair(pk.data(), sk.data(), seed.data());
    return KeyPair{to_hex(seed.data(), seed.size()), to_hex(pk.data(), pk.size())};
}

std::string sign_hex(std::string_view message, std::string_view seed_hex) {
    ensure_init();
    auto seed = from_hex(seed_hex);
    if (seed.size() != crypto_sign_SEEDBYTES) {
        throw Error(Errc::InvalidKey, "seed must be 32 bytes (64 hex chars)");
    }
    std::array<std::uint8_t, crypto_sign_PUBLICKEYBYTES> pk{};
    std::array<std::uint8_t, crypto_sign_SECRETKEYBYTES> sk{};
    crypto_sign_seed_keypair(pk.data(), sk.data(), seed.data());
    std::array<std::uint8_t, crypto_sign_BYTES> sig{};
    crypto_sign_detached(sig.data(), nullptr,
                         reinterpret_cast<const unsigned char*>(message.data()), message.size(),
                         sk.data());
    return to_hex(sig.data(), sig.size());
}

bool verify_signature(std::string_view message, std::string_view signature_hex,
                      std::string_view public_hex) {
    ensure_init();
    std::vector<std::uint8_t> sig;
    std::vector<std::uint8_t> pk;
    try {
        sig = from_hex(signature_hex);
        pk = from_hex(public_hex);
    } catch (const Error&) {
        return false;
    }
    if (sig.size() != crypto_sign_BYTES || pk.size() != crypto_sign_PUBLICKEYBYTES) {
        return false;
    }
    return crypto_sign_verify_detached(sig.data(),
                                       reinterpret_cast<const unsigned char*>(message.data()),
                                       message.size(), pk.data()) == 0;
}

std::string key_id(std::string_view public_hex) {
    auto pk = from_hex(public_hex);
    if (pk.size() != crypto_sign_PUBLICKEYBYTES) {
        throw Error(Errc::InvalidKey, "public key must be 32 bytes (64 hex chars)");
    }
    auto digest =
        sha256(std::string_view(reinterpret_cast<const char*>(pk.data()), pk.size()));
    return to_hex(digest).substr(0, 16);
}

} // namespace deployauth::crypto
