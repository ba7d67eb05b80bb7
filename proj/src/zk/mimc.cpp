#include "zkpot/zk/mimc.hpp"

#include <stdexcept>

#include "zkpot/common/sha256.hpp"

namespace zkpot::zk {

using ec::Fr;

std::span<const Fr> mimc_round_constants() {
    static const std::vector<Fr> consts = [] {
        std::vector<Fr> out;
        out.reserve(kMimcRounds);
        const Bytes tag = to_bytes("ZKPOT-MIMC-v1");
        for (unsigned i = 0; i < kMimcRounds; ++i) {
            Digest32 h = Sha256().update(tag).update_u64(i).finish();
            out.push_back(ec::fr_from_hash(h));
        }
        out[0] = Fr::zero();  // conventional zero first round constant
        return out;
    }();
    return consts;
}

static Fr pow5(const Fr& x) {
    Fr x2 = x.square();
    return x2.square() * x;
}

Fr mimc_encrypt(const Fr& key, const Fr& x) {
    auto rc = mimc_round_constants();
    Fr s = x;
    for (unsigned i = 0; i < kMimcRounds; ++i) s = pow5(s + key + rc[i]);
    return s + key;
}

Fr mimc_compress(const Fr& chain, const Fr& message) {
    return mimc_encrypt(chain, message) + chain + message;
}

Fr mimc_hash_elements(std::span<const Fr> elems) {
    Fr h = mimc_compress(Fr::zero(), Fr::from_u64(elems.size()));
    for (const Fr& e : elems) h = mimc_compress(h, e);
    return h;
}

std::vector<Fr> pack_bytes_to_elements(std::span<const std::int64_t> values) {
    std::vector<Fr> out;
    out.reserve((values.size() + 30) / 31);
    for (std::size_t off = 0; off < values.size(); off += 31) {
        Fr acc = Fr::zero();
        Fr base = Fr::one();
        const Fr step = Fr::from_u64(256);
        std::size_t n = std::min<std::size_t>(31, values.size() - off);
        for (std::size_t i = 0; i < n; ++i) {
            std::int64_t v = values[off + i];
            if (v < 0 || v > 255) throw std::invalid_argument("pack: value outside [0,255]");
            acc += base * Fr::from_u64(static_cast<std::uint64_t>(v));
            base *= step;
        }
        out.push_back(acc);
    }
    return out;
}

}  // namespace zkpot::zk
