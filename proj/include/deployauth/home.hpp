#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace deployauth {

// On-disk engine state rooted at one directory:
//   objects/   content-addressed artefacts (objects/<hh>/<62 hex>)
//   bundles/   evidence bundle manifests (+ .info sidecars)
//   policies/  canonical policy documents named by fingerprint
//   packages/  audit packages named by their own hash
//   certs/     certificates and revocation records named by their own hash
//   log/       transparency log records + signed tree head
//   keys/      issuer key pair (issuer.key seed, issuer.pub)
class EngineHome {
public:
    // Creates the directory layout and an issuer key pair. A fixed seed (64
    // hex chars) makes the whole engine deterministic for testing.
    // Errors: StorageFailure, InvalidKey.
    static EngineHome init(const std::filesystem::path& root,
                           std::optional<std::string> key_seed_hex = std::nullopt);

    // Opens an existing home. Errors: NotFound when the layout is missing.
    static EngineHome open(const std::filesystem::path& root);

    const std::filesystem::path& root() const { return root_; }
    std::filesystem::path objects() const { return root_ / "objects"; }
    std::filesystem::path bundles() const { return root_ / "bundles"; }
    std::filesystem::path policies() const { return root_ / "policies"; }
    std::filesystem::path packages() const { return root_ / "packages"; }
    std::filesystem::path certs() const { return root_ / "certs"; }
    std::filesystem::path log_dir() const { return root_ / "log"; }
    std::filesystem::path keys() const { return root_ / "keys"; }

    std::string issuer_seed_hex() const;   // Errors: NotFound, InvalidKey
    std::string issuer_public_hex() const; // Errors: NotFound, InvalidKey

private:
    explicit EngineHome(std::filesystem::path root) : root_(std::move(root)) {}
    std::filesystem::path root_;
};

// Exclusive advisory lock over a home's write paths, held for the duration
// of a mutating CLI command. Readers never take it.
class WriteLock {
public:
    explicit WriteLock(const EngineHome& home); // Errors: StorageFailure
    ~WriteLock();
    WriteLock(const WriteLock&) = delete;
    WriteLock& operator=(const WriteLock&) = delete;

private:
    int fd_ = -1;
};

std::string read_file(const std::filesystem::path& path);          // Errors: NotFound
void write_file(const std::filesystem::path& path, std::string_view bytes); // StorageFailure

} // namespace deployauth
