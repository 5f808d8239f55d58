#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "deployauth/errors.hpp"
#include "deployauth/translog.hpp"
#include "support/fixtures.hpp"
#include "support/ref_merkle.hpp"
#include "support/temp_dir.hpp"

using namespace deployauth;
using testsupport::TempDir;

namespace {

const char* kSeed = testsupport::kTestSeed;

LogEntry entry_n(int n) {
    Json payload{{"certificate_id", "cert-" + std::to_string(n)}, {"n", n}};
    return LogEntry{EntryType::Issuance, canonicalize(payload)};
}

std::vector<merkle::Hash32> leaves_for(int n) {
    std::vector<merkle::Hash32> leaves;
    for (int i = 0; i < n; ++i) leaves.push_back(merkle::leaf_hash(entry_n(i).payload));
    return leaves;
}

} // namespace

TEST_CASE("empty tree root is the hash of the empty string") {
    // pinned from an external SHA-256 tool
    CHECK(crypto::to_hex(merkle::root({})) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("single-leaf tree: root equals the domain-separated leaf hash") {
    TransparencyLog log(kSeed);
    LogEntry e{EntryType::Issuance, R"({"entry_type":"ISSUANCE","n":1})"};
    // 0x00-prefixed leaf digest pinned from an external SHA-256 tool
    CHECK(leaf_hash_hex(e) == "3165d5fefc8ca4ed0e4e1d7aef498098ac7776d8e508fb38c8957cea69f3fff0");

    auto [index, sth] = log.append(e, 1000);
    CHECK(index == 0);
    CHECK(sth.tree_size == 1);
    CHECK(sth.root_hash == leaf_hash_hex(e));
    CHECK(verify_sth(sth, log.public_key_hex()));
}

TEST_CASE("interior nodes use the 0x01 prefix") {
    auto l0 = merkle::leaf_hash("alpha");
    auto l1 = merkle::leaf_hash("beta");
    // values pinned from an external SHA-256 tool
    CHECK(crypto::to_hex(l0) == "2a158d8afd48e3f88cb4195dfdb2a9e4817d95fa57fd34440d93f9aae5c4f82b");
    CHECK(crypto::to_hex(merkle::node_hash(l0, l1)) ==
          "983cb57c04cddd52634edab38a7bef85708a974f114bbd9aa9ec5d4ce6656b4b");
}

TEST_CASE("incremental root equals batch recomputation and the bottom-up oracle") {
    TransparencyLog log(kSeed);
    for (int n = 1; n <= 128; ++n) {
        log.append(entry_n(n - 1), 1000 + n);
        auto leaves = leaves_for(n);
        auto sth = log.latest_sth();
        REQUIRE(sth.has_value());
        CHECK(sth->tree_size == static_cast<std::uint64_t>(n));
        CHECK(sth->root_hash == crypto::to_hex(merkle::root(leaves)));
        CHECK(sth->root_hash == crypto::to_hex(testsupport::ref_root(leaves)));
    }
}

TEST_CASE("inclusion proofs verify exhaustively up to size 64") {
    auto leaves = leaves_for(64);
    for (std::uint64_t size = 1; size <= 64; ++size) {
        auto root = merkle::root(std::span(leaves).subspan(0, size));
        for (std::uint64_t index = 0; index < size; ++index) {
            auto path = merkle::inclusion_path(leaves, index, size);
            CHECK(merkle::verify_inclusion(index, size, leaves[index], path, root));

            // independent reconstruction by structural recursion
            bool ok = false;
            auto ref = testsupport::ref_root_from_inclusion(index, size, path, leaves[index], &ok);
            CHECK(ok);
            CHECK(ref == root);
        }
    }
}

TEST_CASE("single-leaf inclusion proof is empty; root is the leaf") {
    auto leaves = leaves_for(1);
    auto path = merkle::inclusion_path(leaves, 0, 1);
    CHECK(path.empty());
    CHECK(merkle::verify_inclusion(0, 1, leaves[0], path, leaves[0]));
}

TEST_CASE("inclusion proof is index, size and path sensitive") {
    auto leaves = leaves_for(16);
    auto root = merkle::root(leaves);
    auto path = merkle::inclusion_path(leaves, 5, 16);
    CHECK(merkle::verify_inclusion(5, 16, leaves[5], path, root));

    auto bad_path = path;
    bad_path[0][0] ^= 0x01;
    CHECK_FALSE(merkle::verify_inclusion(5, 16, leaves[5], bad_path, root));
    CHECK_FALSE(merkle::verify_inclusion(6, 16, leaves[5], path, root));
    CHECK_FALSE(merkle::verify_inclusion(5, 15, leaves[5], path, root));
    CHECK_FALSE(merkle::verify_inclusion(5, 16, leaves[6], path, root));

    CHECK_THROWS_AS((void)merkle::inclusion_path(leaves, 16, 16), Error);
    try {
        (void)merkle::inclusion_path(leaves, 16, 16);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::IndexOutOfRange);
    }
}

TEST_CASE("proof sizes respect the logarithmic bound") {
    auto leaves = leaves_for(64);
    for (std::uint64_t size = 1; size <= 64; ++size) {
        std::size_t bound = 1;
        while ((1ull << bound) < size) ++bound; // ceil(log2) + 1 headroom
        for (std::uint64_t index = 0; index < size; ++index) {
            CHECK(merkle::inclusion_path(leaves, index, size).size() <= bound + 1);
        }
    }
}

TEST_CASE("consistency proofs verify exhaustively up to size 32") {
    auto leaves = leaves_for(32);
    for (std::uint64_t new_size = 1; new_size <= 32; ++new_size) {
        auto new_root = merkle::root(std::span(leaves).subspan(0, new_size));
        for (std::uint64_t old_size = 1; old_size <= new_size; ++old_size) {
            auto old_root = merkle::root(std::span(leaves).subspan(0, old_size));
            auto path = merkle::consistency_path(leaves, old_size, new_size);
            CHECK(merkle::verify_consistency(old_size, new_size, path, old_root, new_root));
        }
    }
}

TEST_CASE("identical sizes: empty proof, roots must match") {
    auto leaves = leaves_for(8);
    auto root = merkle::root(leaves);
    auto path = merkle::consistency_path(leaves, 8, 8);
    CHECK(path.empty());
    CHECK(merkle::verify_consistency(8, 8, path, root, root));
    auto other = merkle::root(std::span(leaves).subspan(0, 7));
    CHECK_FALSE(merkle::verify_consistency(8, 8, path, root, other));
}

TEST_CASE("a forked log admits no verifying consistency proof") {
    auto honest = leaves_for(12);
    auto forked = honest;
    forked[7] = merkle::leaf_hash("history rewritten here");

    auto old_root = merkle::root(std::span(honest).subspan(0, 10));
    auto fork_root = merkle::root(forked);
    auto candidate = merkle::consistency_path(forked, 10, 12);
    CHECK_FALSE(merkle::verify_consistency(10, 12, candidate, old_root, fork_root));

    // divergence after the old prefix is equally detected
    auto diverged = honest;
    diverged[11] = merkle::leaf_hash("replaced tail");
    auto div_root = merkle::root(diverged);
    auto honest_path = merkle::consistency_path(honest, 10, 12);
    CHECK_FALSE(merkle::verify_consistency(10, 12, honest_path, old_root, div_root));
}

TEST_CASE("size bounds raise SizeOutOfRange") {
    auto leaves = leaves_for(8);
    CHECK_THROWS_AS((void)merkle::consistency_path(leaves, 0, 4), Error);
    CHECK_THROWS_AS((void)merkle::consistency_path(leaves, 5, 4), Error);
    try {
        (void)merkle::consistency_path(leaves, 5, 9);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::SizeOutOfRange);
    }
}

TEST_CASE("log-level proofs carry sizes and verify against their tree heads") {
    TransparencyLog log(kSeed);
    SignedTreeHead sth_at_3;
    for (int i = 0; i < 6; ++i) {
        auto [index, sth] = log.append(entry_n(i), 2000 + i);
        if (index == 2) sth_at_3 = sth;
    }
    auto latest = log.latest_sth();
    REQUIRE(latest.has_value());

    auto proof = log.prove_inclusion(1, 6);
    CHECK(verify_inclusion(proof, leaf_hash_hex(entry_n(1)), *latest));
    CHECK_FALSE(verify_inclusion(proof, leaf_hash_hex(entry_n(1)), sth_at_3)); // size binding

    auto consistency = log.prove_consistency(3, 6);
    CHECK(verify_consistency(consistency, sth_at_3, *latest));
}

TEST_CASE("certificate status replay: the spec's leaf-order state machine") {
    TransparencyLog log(kSeed);
    std::int64_t now = testsupport::kAssessClock;
    auto issue = [&](const std::string& id, std::int64_t expires) {
        Json cert{{"certificate_id", id}, {"expires_at", expires}};
        log.append(LogEntry{EntryType::Issuance, canonicalize(cert)}, now);
    };
    auto event = [&](const std::string& id, const std::string& action) {
        Json rec{{"certificate_id", id}, {"action", action}};
        log.append(LogEntry{EntryType::RevocationEvent, canonicalize(rec)}, now);
    };

    CHECK(log.status("cert-none", now) == CertificateStatus::Unknown);

    issue("cert-a", now + 86400);
    CHECK(log.status("cert-a", now) == CertificateStatus::Active);

    event("cert-a", "SUSPEND");
    CHECK(log.status("cert-a", now) == CertificateStatus::Suspended);
    event("cert-a", "REINSTATE");
    CHECK(log.status("cert-a", now) == CertificateStatus::Active);
    event("cert-a", "REVOKE");
    CHECK(log.status("cert-a", now) == CertificateStatus::Revoked);
    event("cert-a", "REINSTATE"); // REVOKED is absorbing
    CHECK(log.status("cert-a", now) == CertificateStatus::Revoked);

    issue("cert-b", now - 10); // already expired
    CHECK(log.status("cert-b", now) == CertificateStatus::Expired);
}

TEST_CASE("persistence: reload replays records and keeps the same head") {
    TempDir dir;
    std::string root_before;
    {
        TransparencyLog log(dir.path() / "log", kSeed);
        for (int i = 0; i < 5; ++i) log.append(entry_n(i), 3000 + i);
        root_before = log.latest_sth()->root_hash;
    }
    {
        TransparencyLog log(dir.path() / "log", kSeed);
        CHECK(log.tree_size() == 5);
        CHECK(log.latest_sth()->root_hash == root_before);
        log.append(entry_n(5), 3005);
        CHECK(log.tree_size() == 6);
    }
    auto read_only = TransparencyLog::open_read_only(dir.path() / "log");
    CHECK(read_only.tree_size() == 6);
    CHECK_FALSE(read_only.can_sign());
    CHECK_THROWS_AS((void)read_only.head(0), Error);
}

TEST_CASE("persistence: edited records are detected on reload") {
    TempDir dir;
    {
        TransparencyLog log(dir.path() / "log", kSeed);
        for (int i = 0; i < 3; ++i) log.append(entry_n(i), 4000 + i);
    }
    // flip one byte inside the record file
    auto records = dir.path() / "log" / "records";
    std::fstream f(records, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(20);
    f.put('X');
    f.close();
    CHECK_THROWS_AS(TransparencyLog(dir.path() / "log", kSeed), Error);
}

TEST_CASE("issuance inclusion query backs certificate verification") {
    TransparencyLog log(kSeed);
    std::int64_t now = testsupport::kAssessClock;
    Json cert{{"certificate_id", "cert-x"}, {"expires_at", now + 86400}};
    log.append(LogEntry{EntryType::Issuance, canonicalize(cert)}, now);

    CHECK(log.issuance_included("cert-x"));
    CHECK_FALSE(log.issuance_included("cert-y"));
    CHECK(log.status_name("cert-x", now) == "ACTIVE");
}

TEST_CASE("append rejects non-canonical payloads") {
    TransparencyLog log(kSeed);
    LogEntry sloppy{EntryType::Issuance, R"({"b":1, "a":2})"};
    CHECK_THROWS_AS((void)log.append(sloppy, 0), Error);
}
