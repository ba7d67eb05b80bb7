#include "zkpot/commit/pedersen.hpp"

namespace zkpot::commit {

using ec::Fr;
using ec::G1;
using ec::G1Affine;

CommitKey CommitKey::create(std::size_t capacity) {
    static const Bytes kGenTag = to_bytes("ZKPOT-PEDERSEN-v1/g");
    static const Bytes kBlinderTag = to_bytes("ZKPOT-PEDERSEN-v1/h");
    CommitKey key;
    key.generators.resize(capacity);
#pragma omp parallel for schedule(dynamic, 16)
    for (long long i = 0; i < static_cast<long long>(capacity); ++i) {
        key.generators[static_cast<std::size_t>(i)] =
            ec::hash_to_g1(kGenTag, static_cast<std::uint64_t>(i));
    }
    key.blinder = ec::hash_to_g1(kBlinderTag, 0);
    return key;
}

Bytes Commitment::to_bytes() const {
    auto enc = ec::g1_compress(point);
    return Bytes(enc.begin(), enc.end());
}

std::string Commitment::to_hex() const { return zkpot::to_hex(to_bytes()); }

std::optional<Commitment> Commitment::from_bytes(std::span<const std::uint8_t> bytes) {
    auto p = ec::g1_decompress(bytes, true);
    if (!p) return std::nullopt;
    return Commitment{*p};
}

std::vector<Fr> chunk_scalars(std::span<const std::uint8_t> bytes) {
    std::vector<Fr> out;
    out.reserve((bytes.size() + 30) / 31);
    for (std::size_t off = 0; off < bytes.size(); off += 31) {
        std::uint8_t buf[32] = {0};
        std::size_t n = std::min<std::size_t>(31, bytes.size() - off);
        // leading zero byte keeps the 248-bit chunk below the modulus
        for (std::size_t i = 0; i < n; ++i) buf[1 + i] = bytes[off + i];
        auto fe = Fr::from_be_bytes(buf);
        out.push_back(*fe);
    }
    return out;
}

Commitment commit_scalars(const CommitKey& key, std::span<const Fr> values, const Fr& r) {
    if (values.size() > key.capacity())
        throw KeyTooSmall("commit: value vector exceeds key capacity");
    G1 acc = ec::msm<ec::G1Traits>(
        std::span<const G1Affine>(key.generators.data(), values.size()), values);
    acc = acc.add(G1::from_affine(key.blinder).mul(r));
    return Commitment{acc.to_affine()};
}

Commitment commit(const CommitKey& key, std::span<const std::uint8_t> model_bytes, const Fr& r) {
    if (model_bytes.empty()) throw KeyTooSmall("commit: empty message");
    auto scalars = chunk_scalars(model_bytes);
    return commit_scalars(key, scalars, r);
}

bool verify_opening_scalars(const CommitKey& key, const Commitment& cm,
                            std::span<const Fr> values, const Fr& r) {
    if (values.size() > key.capacity()) return false;
    return commit_scalars(key, values, r) == cm;
}

bool verify_opening(const CommitKey& key, const Commitment& cm,
                    std::span<const std::uint8_t> model_bytes, const Fr& r) {
    if (model_bytes.empty()) return false;
    auto scalars = chunk_scalars(model_bytes);
    return verify_opening_scalars(key, cm, scalars, r);
}

}  // namespace zkpot::commit
