#pragma once

#include <span>
#include <vector>

#include "zkpot/ec/fields.hpp"

namespace zkpot::zk {

// Keyed x^5 permutation with Miyaguchi-Preneel chaining: the algebraic hash
// binding witnesses (model, pixels, labels) to public inputs inside R1CS.
// gcd(5, r-1) = 1 for this scalar field, so x^5 is a permutation.
inline constexpr unsigned kMimcRounds = 110;

std::span<const ec::Fr> mimc_round_constants();

ec::Fr mimc_encrypt(const ec::Fr& key, const ec::Fr& x);
ec::Fr mimc_compress(const ec::Fr& chain, const ec::Fr& message);
ec::Fr mimc_hash_elements(std::span<const ec::Fr> elems);

// Packs fixed 8-bit values 31 to a field element, little-endian within the
// element; used for weights, pixels and labels.
std::vector<ec::Fr> pack_bytes_to_elements(std::span<const std::int64_t> values);

}  // namespace zkpot::zk
