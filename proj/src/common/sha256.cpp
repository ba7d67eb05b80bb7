#include "zkpot/common/sha256.hpp"

#include <sodium.h>

#include <cstring>
#include <stdexcept>

namespace zkpot {

static_assert(sizeof(crypto_hash_sha256_state) <= 128, "sha256 state buffer too small");

Digest32 sha256(std::span<const std::uint8_t> data) {
    Digest32 out;
    crypto_hash_sha256(out.data(), data.data(), data.size());
    return out;
}

Sha256::Sha256() {
    if (sodium_init() < 0) throw std::runtime_error("sodium_init failed");
    crypto_hash_sha256_init(reinterpret_cast<crypto_hash_sha256_state*>(state_));
}

Sha256& Sha256::update(std::span<const std::uint8_t> data) {
    crypto_hash_sha256_update(reinterpret_cast<crypto_hash_sha256_state*>(state_),
                              data.data(), data.size());
    return *this;
}

Sha256& Sha256::update_u64(std::uint64_t v) {
    std::uint8_t le[8];
    for (int i = 0; i < 8; ++i) le[i] = static_cast<std::uint8_t>(v >> (8 * i));
    return update(le);
}

Digest32 Sha256::finish() {
    Digest32 out;
    crypto_hash_sha256_final(reinterpret_cast<crypto_hash_sha256_state*>(state_), out.data());
    return out;
}

}  // namespace zkpot
