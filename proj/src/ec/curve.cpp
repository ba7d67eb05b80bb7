#include "zkpot/ec/curve.hpp"

#include "zkpot/common/sha256.hpp"

namespace zkpot::ec {

std::optional<Fp2> fp2_sqrt(const Fp2& a) {
    if (a.is_zero()) return Fp2::zero();
    if (a.c1.is_zero()) {
        if (auto s = fp_sqrt(a.c0)) return Fp2{*s, Fp::zero()};
        auto s = fp_sqrt(-a.c0);
        if (!s) return std::nullopt;
        return Fp2{Fp::zero(), *s};
    }
    auto alpha = fp_sqrt(a.c0 * a.c0 + a.c1 * a.c1);
    if (!alpha) return std::nullopt;
    Fp half = Fp::from_u64(2).inverse();
    for (Fp cand : {*alpha, -*alpha}) {
        Fp delta = (a.c0 + cand) * half;
        auto x0 = fp_sqrt(delta);
        if (!x0 || x0->is_zero()) continue;
        Fp x1 = a.c1 * (x0->dbl()).inverse();
        Fp2 root{*x0, x1};
        if (root.square() == a) return root;
    }
    return std::nullopt;
}

static bool fp_raw_greater(const Fp& a, const Fp& b) {
    auto ar = a.to_raw();
    auto br = b.to_raw();
    for (std::size_t i = ar.size(); i-- > 0;) {
        if (ar[i] != br[i]) return ar[i] > br[i];
    }
    return false;
}

static bool y_is_greater(const Fp& y) { return fp_raw_greater(y, -y); }

static bool y_is_greater(const Fp2& y) {
    Fp2 n = -y;
    if (y.c1 != n.c1) return fp_raw_greater(y.c1, n.c1);
    return fp_raw_greater(y.c0, n.c0);
}

bool g1_in_subgroup(const G1Affine& p) {
    if (p.infinity) return true;
    return G1::from_affine(p).mul(std::span<const std::uint64_t>(consts::kR.data(), 4)).is_identity();
}

bool g2_in_subgroup(const G2Affine& p) {
    if (p.infinity) return true;
    return G2::from_affine(p).mul(std::span<const std::uint64_t>(consts::kR.data(), 4)).is_identity();
}

std::array<std::uint8_t, kG1CompressedBytes> g1_compress(const G1Affine& p) {
    std::array<std::uint8_t, kG1CompressedBytes> out{};
    if (p.infinity) {
        out[0] = 0x80 | 0x40;
        return out;
    }
    p.x.to_be_bytes(out.data());
    out[0] |= 0x80;
    if (y_is_greater(p.y)) out[0] |= 0x20;
    return out;
}

std::array<std::uint8_t, kG2CompressedBytes> g2_compress(const G2Affine& p) {
    std::array<std::uint8_t, kG2CompressedBytes> out{};
    if (p.infinity) {
        out[0] = 0x80 | 0x40;
        return out;
    }
    p.x.c1.to_be_bytes(out.data());
    p.x.c0.to_be_bytes(out.data() + kFpBytes);
    out[0] |= 0x80;
    if (y_is_greater(p.y)) out[0] |= 0x20;
    return out;
}

std::optional<G1Affine> g1_decompress(std::span<const std::uint8_t> bytes, bool subgroup_check) {
    if (bytes.size() != kG1CompressedBytes || !(bytes[0] & 0x80)) return std::nullopt;
    std::array<std::uint8_t, kG1CompressedBytes> buf;
    std::copy(bytes.begin(), bytes.end(), buf.begin());
    bool infinity = buf[0] & 0x40;
    bool greater = buf[0] & 0x20;
    buf[0] &= 0x1F;
    if (infinity) {
        for (auto b : buf)
            if (b) return std::nullopt;
        return G1Affine::identity();
    }
    auto x = Fp::from_be_bytes(buf.data());
    if (!x) return std::nullopt;
    auto y = fp_sqrt(x->square() * *x + G1Traits::b());
    if (!y) return std::nullopt;
    Fp yy = (y_is_greater(*y) == greater) ? *y : -*y;
    G1Affine p{*x, yy, false};
    if (subgroup_check && !g1_in_subgroup(p)) return std::nullopt;
    return p;
}

std::optional<G2Affine> g2_decompress(std::span<const std::uint8_t> bytes, bool subgroup_check) {
    if (bytes.size() != kG2CompressedBytes || !(bytes[0] & 0x80)) return std::nullopt;
    std::array<std::uint8_t, kG2CompressedBytes> buf;
    std::copy(bytes.begin(), bytes.end(), buf.begin());
    bool infinity = buf[0] & 0x40;
    bool greater = buf[0] & 0x20;
    buf[0] &= 0x1F;
    if (infinity) {
        for (auto b : buf)
            if (b) return std::nullopt;
        return G2Affine::identity();
    }
    auto xc1 = Fp::from_be_bytes(buf.data());
    auto xc0 = Fp::from_be_bytes(buf.data() + kFpBytes);
    if (!xc0 || !xc1) return std::nullopt;
    Fp2 x{*xc0, *xc1};
    auto y = fp2_sqrt(x.square() * x + G2Traits::b());
    if (!y) return std::nullopt;
    Fp2 yy = (y_is_greater(*y) == greater) ? *y : -*y;
    G2Affine p{x, yy, false};
    if (subgroup_check && !g2_in_subgroup(p)) return std::nullopt;
    return p;
}

G1Affine hash_to_g1(std::span<const std::uint8_t> tag, std::uint64_t index) {
    for (std::uint64_t ctr = 0;; ++ctr) {
        Digest32 h0 = Sha256().update(tag).update_u64(index).update_u64(ctr).update_u64(0).finish();
        Digest32 h1 = Sha256().update(tag).update_u64(index).update_u64(ctr).update_u64(1).finish();
        std::uint8_t cand[kFpBytes];
        std::copy(h0.begin(), h0.end(), cand);
        std::copy(h1.begin(), h1.begin() + 16, cand + 32);
        cand[0] &= 0x1F;
        auto x = Fp::from_be_bytes(cand);
        if (!x) continue;
        auto y = fp_sqrt(x->square() * *x + G1Traits::b());
        if (!y) continue;
        Fp yy = y_is_greater(*y) ? -*y : *y;
        G1 cleared = G1::from_affine({*x, yy, false})
                         .mul(std::span<const std::uint64_t>(consts::kG1Cofactor.data(), 2));
        if (cleared.is_identity()) continue;
        return cleared.to_affine();
    }
}

template <typename Traits>
static std::vector<AffinePoint<Traits>> batch_to_affine_impl(
    std::span<const JacobianPoint<Traits>> pts) {
    using Field = typename Traits::Field;
    std::vector<Field> zs;
    zs.reserve(pts.size());
    for (const auto& p : pts) zs.push_back(p.Z);

    // Montgomery batch inversion over the z coordinates, skipping identities.
    std::vector<Field> prefix(pts.size());
    Field acc = Field::one();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        prefix[i] = acc;
        if (!zs[i].is_zero()) acc = acc * zs[i];
    }
    Field inv = acc.inverse();
    std::vector<AffinePoint<Traits>> out(pts.size());
    for (std::size_t i = pts.size(); i-- > 0;) {
        if (zs[i].is_zero()) {
            out[i] = AffinePoint<Traits>::identity();
            continue;
        }
        Field zinv = inv * prefix[i];
        inv = inv * zs[i];
        Field zinv2 = zinv.square();
        out[i] = {pts[i].X * zinv2, pts[i].Y * zinv2 * zinv, false};
    }
    return out;
}

std::vector<G1Affine> g1_batch_to_affine(std::span<const G1> pts) {
    return batch_to_affine_impl<G1Traits>(pts);
}
std::vector<G2Affine> g2_batch_to_affine(std::span<const G2> pts) {
    return batch_to_affine_impl<G2Traits>(pts);
}

}  // namespace zkpot::ec
