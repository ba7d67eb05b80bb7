#pragma once

#include "zkpot/common/bytes.hpp"

namespace zkpot {

Digest32 sha256(std::span<const std::uint8_t> data);

// Incremental interface for hashing framed records without concatenating.
class Sha256 {
public:
    Sha256();
    Sha256& update(std::span<const std::uint8_t> data);
    Sha256& update_u64(std::uint64_t v);  // little-endian
    Digest32 finish();

private:
    alignas(16) unsigned char state_[128];
};

}  // namespace zkpot
