#pragma once

#include <stdexcept>

#include "zkpot/common/bytes.hpp"
#include "zkpot/ec/msm.hpp"

namespace zkpot::commit {

struct KeyTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Vector Pedersen commitment key over G1. Generators come from hash-to-group
// under a fixed domain-separation tag, so every node derives the same key and
// nobody knows discrete logs between the points.
struct CommitKey {
    std::vector<ec::G1Affine> generators;
    ec::G1Affine blinder;

    static CommitKey create(std::size_t capacity);
    std::size_t capacity() const { return generators.size(); }
};

struct Commitment {
    ec::G1Affine point;

    Bytes to_bytes() const;  // canonical compressed encoding
    std::string to_hex() const;
    static std::optional<Commitment> from_bytes(std::span<const std::uint8_t> bytes);
    bool operator==(const Commitment& o) const { return point == o.point; }
};

// Held privately by the committer.
struct Opening {
    std::vector<ec::Fr> values;
    ec::Fr randomness;
};

// 31-byte big-endian chunks, final chunk zero-padded on the right.
std::vector<ec::Fr> chunk_scalars(std::span<const std::uint8_t> bytes);

Commitment commit_scalars(const CommitKey& key, std::span<const ec::Fr> values, const ec::Fr& r);
Commitment commit(const CommitKey& key, std::span<const std::uint8_t> model_bytes, const ec::Fr& r);

bool verify_opening_scalars(const CommitKey& key, const Commitment& cm,
                            std::span<const ec::Fr> values, const ec::Fr& r);
bool verify_opening(const CommitKey& key, const Commitment& cm,
                    std::span<const std::uint8_t> model_bytes, const ec::Fr& r);

}  // namespace zkpot::commit
