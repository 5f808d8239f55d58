#include "deployauth/home.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <fstream>

#include "deployauth/crypto.hpp"
#include "deployauth/errors.hpp"

namespace deployauth {

namespace fs = std::filesystem;

EngineHome EngineHome::init(const fs::path& root, std::optional<std::string> key_seed_hex) {
    EngineHome home(root);
    std::error_code ec;
    for (const auto& dir : {home.objects(), home.bundles(), home.policies(), home.packages(),
                            home.certs(), home.log_dir(), home.keys()}) {
        fs::create_directories(dir, ec);
        if (ec) {
            throw Error(Errc::StorageFailure, "cannot create " + dir.string());
        }
    }

    fs::path key_file = home.keys() / "issuer.key";
    if (!fs::exists(key_file)) {
        crypto::KeyPair keys = key_seed_hex ? crypto::keypair_from_seed_hex(*key_seed_hex)
                                            : crypto::generate_keypair();
        write_file(key_file, keys.seed_hex);
        write_file(home.keys() / "issuer.pub", keys.public_hex);
    }
    return home;
}

EngineHome EngineHome::open(const fs::path& root) {
    EngineHome home(root);
    if (!fs::is_directory(home.objects()) || !fs::is_directory(home.keys())) {
        throw Error(Errc::NotFound, "no engine home at " + root.string() + " (run init first)");
    }
    return home;
}

std::string EngineHome::issuer_seed_hex() const {
    std::string seed = read_file(keys() / "issuer.key");
    if (seed.size() != 64) {
        throw Error(Errc::InvalidKey, "issuer.key must hold 64 hex chars");
    }
    return seed;
}

std::string EngineHome::issuer_public_hex() const {
    std::string pub = read_file(keys() / "issuer.pub");
    if (pub.size() != 64) {
        throw Error(Errc::InvalidKey, "issuer.pub must hold 64 hex chars");
    }
    return pub;
}

WriteLock::WriteLock(const EngineHome& home) {
    fs::path lock_path = home.root() / ".lock";
    fd_ = ::open(lock_path.c_str(), O_CREAT | O_RDWR, 0644);
    if (fd_ < 0) {
        throw Error(Errc::StorageFailure, "cannot open lock file " + lock_path.string());
    }
    if (::flock(fd_, LOCK_EX) != 0) {
        ::close(fd_);
        throw Error(Errc::StorageFailure, "cannot acquire write lock");
    }
}

WriteLock::~WriteLock() {
    if (fd_ >= 0) {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::NotFound, path.string());
    }
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const fs::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(Errc::StorageFailure, "cannot open " + path.string());
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error(Errc::StorageFailure, "short write to " + path.string());
    }
}

} // namespace deployauth
