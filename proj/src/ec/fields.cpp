#include "zkpot/ec/fields.hpp"

#include "zkpot/common/sha256.hpp"

namespace zkpot::ec {

std::optional<Fp> fp_sqrt(const Fp& a) {
    if (a.is_zero()) return Fp::zero();
    Fp s = a.pow(consts::kPPlus1Div4);
    if (s * s != a) return std::nullopt;
    return s;
}

template <typename F>
static void batch_inverse_impl(std::span<F> xs) {
    std::vector<F> prefix;
    prefix.reserve(xs.size());
    F acc = F::one();
    for (const auto& x : xs) {
        prefix.push_back(acc);
        if (!x.is_zero()) acc *= x;
    }
    F inv = acc.inverse();
    for (std::size_t i = xs.size(); i-- > 0;) {
        if (xs[i].is_zero()) continue;
        F cur = xs[i];
        xs[i] = inv * prefix[i];
        inv *= cur;
    }
}

void fr_batch_inverse(std::span<Fr> xs) { batch_inverse_impl(xs); }
void fp_batch_inverse(std::span<Fp> xs) { batch_inverse_impl(xs); }

Bytes fr_to_bytes(const Fr& x) {
    Bytes out(kFrBytes);
    x.to_be_bytes(out.data());
    return out;
}

std::optional<Fr> fr_from_bytes(std::span<const std::uint8_t> b) {
    if (b.size() != kFrBytes) return std::nullopt;
    return Fr::from_be_bytes(b.data());
}

Fr fr_from_hash(std::span<const std::uint8_t> data) {
    // Two hash blocks give 512 bits; reduce mod r by splitting into
    // hi*2^256 + lo with both halves below r after masking the top bit.
    Digest32 h0 = Sha256().update(data).update_u64(0).finish();
    Digest32 h1 = Sha256().update(data).update_u64(1).finish();
    auto to_fr = [](const Digest32& d) {
        Fr::Limbs raw{};
        for (int i = 0; i < 32; ++i) raw[3 - i / 8] = (raw[3 - i / 8] << 8) | d[i];
        raw[3] &= 0x3FFFFFFFFFFFFFFFULL;  // < 2^254 < r
        return Fr::from_raw(raw);
    };
    // 2^254 as a field constant
    Fr shift = Fr::from_u64(1);
    for (int i = 0; i < 254; ++i) shift = shift.dbl();
    return to_fr(h0) * shift + to_fr(h1);
}

}  // namespace zkpot::ec
