#include "deployauth/merkle.hpp"

#include "deployauth/errors.hpp"

namespace deployauth::merkle {

namespace {

// Largest power of two strictly less than n (n >= 2).
std::uint64_t split_point(std::uint64_t n) {
    std::uint64_t k = 1;
    while (k * 2 < n) k *= 2;
    return k;
}

Hash32 subtree_root(std::span<const Hash32> leaves) {
    if (leaves.size() == 1) return leaves[0];
    std::uint64_t k = split_point(leaves.size());
    return node_hash(subtree_root(leaves.subspan(0, k)), subtree_root(leaves.subspan(k)));
}

void build_inclusion(std::span<const Hash32> leaves, std::uint64_t m, std::vector<Hash32>& path) {
    if (leaves.size() <= 1) return;
    std::uint64_t k = split_point(leaves.size());
    if (m < k) {
        build_inclusion(leaves.subspan(0, k), m, path);
        path.push_back(subtree_root(leaves.subspan(k)));
    } else {
        build_inclusion(leaves.subspan(k), m - k, path);
        path.push_back(subtree_root(leaves.subspan(0, k)));
    }
}

void build_consistency(std::span<const Hash32> leaves, std::uint64_t m, bool complete,
                       std::vector<Hash32>& path) {
    if (m == leaves.size()) {
        if (!complete) path.push_back(subtree_root(leaves));
        return;
    }
    std::uint64_t k = split_point(leaves.size());
    if (m <= k) {
        build_consistency(leaves.subspan(0, k), m, complete, path);
        path.push_back(subtree_root(leaves.subspan(k)));
    } else {
        build_consistency(leaves.subspan(k), m - k, false, path);
        path.push_back(subtree_root(leaves.subspan(0, k)));
    }
}

} // namespace

Hash32 leaf_hash(std::string_view payload) {
    std::string prefixed;
    prefixed.reserve(payload.size() + 1);
    prefixed.push_back('\x00');
    prefixed.append(payload);
    return crypto::sha256(prefixed);
}

Hash32 node_hash(const Hash32& left, const Hash32& right) {
    std::string material;
    material.reserve(65);
    material.push_back('\x01');
    material.append(reinterpret_cast<const char*>(left.data()), left.size());
    material.append(reinterpret_cast<const char*>(right.data()), right.size());
    return crypto::sha256(material);
}

Hash32 root(std::span<const Hash32> leaves) {
    if (leaves.empty()) return crypto::sha256("");
    return subtree_root(leaves);
}

std::vector<Hash32> inclusion_path(std::span<const Hash32> leaves, std::uint64_t leaf_index,
                                   std::uint64_t tree_size) {
    if (tree_size == 0 || tree_size > leaves.size() || leaf_index >= tree_size) {
        throw Error(Errc::IndexOutOfRange,
                    "leaf " + std::to_string(leaf_index) + " of tree size " +
                        std::to_string(tree_size));
    }
    std::vector<Hash32> path;
    build_inclusion(leaves.subspan(0, tree_size), leaf_index, path);
    return path;
}

bool verify_inclusion(std::uint64_t leaf_index, std::uint64_t tree_size, const Hash32& leaf,
                      std::span<const Hash32> path, const Hash32& expected_root) {
    if (leaf_index >= tree_size) return false;
    std::uint64_t fn = leaf_index;
    std::uint64_t sn = tree_size - 1;
    Hash32 r = leaf;
    for (const Hash32& p : path) {
        if (sn == 0) return false;
        if ((fn & 1) != 0 || fn == sn) {
            r = node_hash(p, r);
            if ((fn & 1) == 0) {
                while (fn != 0 && (fn & 1) == 0) {
                    fn >>= 1;
                    sn >>= 1;
                }
            }
        } else {
            r = node_hash(r, p);
        }
        fn >>= 1;
        sn >>= 1;
    }
    return sn == 0 && r == expected_root;
}

std::vector<Hash32> consistency_path(std::span<const Hash32> leaves, std::uint64_t old_size,
                                     std::uint64_t new_size) {
    if (old_size == 0 || old_size > new_size || new_size > leaves.size()) {
        throw Error(Errc::SizeOutOfRange,
                    std::to_string(old_size) + " -> " + std::to_string(new_size));
    }
    std::vector<Hash32> path;
    if (old_size == new_size) return path; // identical trees prove themselves
    build_consistency(leaves.subspan(0, new_size), old_size, true, path);
    return path;
}

bool verify_consistency(std::uint64_t old_size, std::uint64_t new_size,
                        std::span<const Hash32> path, const Hash32& old_root,
                        const Hash32& new_root) {
    if (old_size == 0 || old_size > new_size) return false;
    if (old_size == new_size) {
        return path.empty() && old_root == new_root;
    }
    std::uint64_t fn = old_size - 1;
    std::uint64_t sn = new_size - 1;
    while ((fn & 1) != 0) {
        fn >>= 1;
        sn >>= 1;
    }

    std::size_t i = 0;
    Hash32 fr;
    Hash32 sr;
    if (fn == 0) {
        // old tree is a complete subtree; its root anchors both recomputations
        fr = old_root;
        sr = old_root;
    } else {
        if (path.empty()) return false;
        fr = path[0];
        sr = path[0];
        i = 1;
    }

    for (; i < path.size(); ++i) {
        if (sn == 0) return false;
        const Hash32& c = path[i];
        if ((fn & 1) != 0 || fn == sn) {
            fr = node_hash(c, fr);
            sr = node_hash(c, sr);
            if ((fn & 1) == 0) {
                while (fn != 0 && (fn & 1) == 0) {
                    fn >>= 1;
                    sn >>= 1;
                }
            }
        } else {
            sr = node_hash(sr, c);
        }
        fn >>= 1;
        sn >>= 1;
    }
    return sn == 0 && fr == old_root && sr == new_root;
}

} // namespace deployauth::merkle
