#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "deployauth/crypto.hpp"

namespace deployauth::merkle {

using crypto::Hash32;

// Certificate-transparency hashing: leaves and interior nodes are domain
// separated (0x00 / 0x01) and trees split at the largest power of two
// strictly below the leaf count. The empty tree's root is SHA-256 of the
// empty string.
Hash32 leaf_hash(std::string_view payload);
Hash32 node_hash(const Hash32& left, const Hash32& right);
Hash32 root(std::span<const Hash32> leaves);

// Audit path for leaf_index within the tree over leaves[0, tree_size).
// Errors: IndexOutOfRange.
std::vector<Hash32> inclusion_path(std::span<const Hash32> leaves, std::uint64_t leaf_index,
                                   std::uint64_t tree_size);

bool verify_inclusion(std::uint64_t leaf_index, std::uint64_t tree_size, const Hash32& leaf,
                      std::span<const Hash32> path, const Hash32& expected_root);

// Proof that the tree over the first old_size leaves is a prefix of the tree
// over the first new_size. Errors: SizeOutOfRange.
std::vector<Hash32> consistency_path(std::span<const Hash32> leaves, std::uint64_t old_size,
                                     std::uint64_t new_size);

bool verify_consistency(std::uint64_t old_size, std::uint64_t new_size,
                        std::span<const Hash32> path, const Hash32& old_root,
                        const Hash32& new_root);

} // namespace deployauth::merkle
