#pragma once

#include <vector>

#include "zkpot/ec/fp_tower.hpp"

namespace zkpot::ec {

template <typename Traits>
struct AffinePoint {
    using Field = typename Traits::Field;
    Field x = Field::zero();
    Field y = Field::zero();
    bool infinity = true;

    static AffinePoint identity() { return {}; }
    bool is_on_curve() const {
        if (infinity) return true;
        return y.square() == x.square() * x + Traits::b();
    }
    bool operator==(const AffinePoint& o) const {
        if (infinity || o.infinity) return infinity == o.infinity;
        return x == o.x && y == o.y;
    }
    AffinePoint negate() const {
        if (infinity) return *this;
        return {x, -y, false};
    }
};

// Jacobian projective point: (X, Y, Z) with x = X/Z^2, y = Y/Z^3.
template <typename Traits>
struct JacobianPoint {
    using Field = typename Traits::Field;
    using Affine = AffinePoint<Traits>;

    Field X = Field::zero();
    Field Y = Field::zero();
    Field Z = Field::zero();

    static JacobianPoint identity() { return {}; }
    static JacobianPoint from_affine(const Affine& a) {
        if (a.infinity) return identity();
        return {a.x, a.y, Field::one()};
    }
    static JacobianPoint generator() { return from_affine(Traits::generator()); }

    bool is_identity() const { return Z.is_zero(); }

    JacobianPoint dbl() const {
        if (is_identity()) return *this;
        Field a = X.square();
        Field b = Y.square();
        Field c = b.square();
        Field d = ((X + b).square() - a - c).dbl();
        Field e = a + a + a;
        Field f = e.square();
        JacobianPoint r;
        r.X = f - d.dbl();
        Field c8 = c.dbl().dbl().dbl();
        r.Y = e * (d - r.X) - c8;
        r.Z = (Y * Z).dbl();
        return r;
    }

    JacobianPoint add(const JacobianPoint& o) const {
        if (is_identity()) return o;
        if (o.is_identity()) return *this;
        Field z1z1 = Z.square();
        Field z2z2 = o.Z.square();
        Field u1 = X * z2z2;
        Field u2 = o.X * z1z1;
        Field s1 = Y * o.Z * z2z2;
        Field s2 = o.Y * Z * z1z1;
        if (u1 == u2) {
            if (s1 == s2) return dbl();
            return identity();
        }
        Field h = u2 - u1;
        Field i = h.dbl().square();
        Field j = h * i;
        Field rr = (s2 - s1).dbl();
        Field v = u1 * i;
        JacobianPoint r;
        r.X = rr.square() - j - v.dbl();
        r.Y = rr * (v - r.X) - (s1 * j).dbl();
        r.Z = ((Z + o.Z).square() - z1z1 - z2z2) * h;
        return r;
    }

    // Mixed addition with an affine point (Z2 = 1).
    JacobianPoint add_affine(const Affine& o) const {
        if (o.infinity) return *this;
        if (is_identity()) return from_affine(o);
        Field z1z1 = Z.square();
        Field u2 = o.x * z1z1;
        Field s2 = o.y * Z * z1z1;
        if (X == u2) {
            if (Y == s2) return dbl();
            return identity();
        }
        Field h = u2 - X;
        Field hh = h.square();
        Field i = hh.dbl().dbl();
        Field j = h * i;
        Field rr = (s2 - Y).dbl();
        Field v = X * i;
        JacobianPoint r;
        r.X = rr.square() - j - v.dbl();
        r.Y = rr * (v - r.X) - (Y * j).dbl();
        r.Z = (Z + h).square() - z1z1 - hh;
        return r;
    }

    JacobianPoint negate() const { return {X, -Y, Z}; }

    JacobianPoint mul(std::span<const std::uint64_t> scalar) const {
        JacobianPoint acc = identity();
        bool started = false;
        for (std::size_t i = scalar.size(); i-- > 0;) {
            for (int b = 63; b >= 0; --b) {
                if (started) acc = acc.dbl();
                if ((scalar[i] >> b) & 1) {
                    acc = acc.add(*this);
                    started = true;
                }
            }
        }
        return acc;
    }

    JacobianPoint mul(const Fr& k) const {
        auto raw = k.to_raw();
        return mul(std::span<const std::uint64_t>(raw.data(), raw.size()));
    }

    Affine to_affine() const {
        if (is_identity()) return Affine::identity();
        Field zinv = Z.inverse();
        Field zinv2 = zinv.square();
        return {X * zinv2, Y * zinv2 * zinv, false};
    }

    bool operator==(const JacobianPoint& o) const {
        if (is_identity() || o.is_identity()) return is_identity() == o.is_identity();
        Field z1z1 = Z.square();
        Field z2z2 = o.Z.square();
        return X * z2z2 == o.X * z1z1 && Y * o.Z * z2z2 == o.Y * Z * z1z1;
    }
};

struct G1Traits {
    using Field = Fp;
    static Field b() { return Fp::from_mont_limbs(consts::kG1B); }
    static AffinePoint<G1Traits> generator() {
        return {Fp::from_mont_limbs(consts::kG1GenX), Fp::from_mont_limbs(consts::kG1GenY), false};
    }
};

struct G2Traits {
    using Field = Fp2;
    static Field b() {
        return {Fp::from_mont_limbs(consts::kG2Bc0), Fp::from_mont_limbs(consts::kG2Bc1)};
    }
    static AffinePoint<G2Traits> generator() {
        return {{Fp::from_mont_limbs(consts::kG2GenXc0), Fp::from_mont_limbs(consts::kG2GenXc1)},
                {Fp::from_mont_limbs(consts::kG2GenYc0), Fp::from_mont_limbs(consts::kG2GenYc1)},
                false};
    }
};

using G1Affine = AffinePoint<G1Traits>;
using G1 = JacobianPoint<G1Traits>;
using G2Affine = AffinePoint<G2Traits>;
using G2 = JacobianPoint<G2Traits>;

inline constexpr std::size_t kG1CompressedBytes = 48;
inline constexpr std::size_t kG2CompressedBytes = 96;

// Compressed encodings: big-endian x with flag bits in the top byte
// (0x80 = compressed, 0x40 = infinity, 0x20 = lexicographically larger y).
std::array<std::uint8_t, kG1CompressedBytes> g1_compress(const G1Affine& p);
std::array<std::uint8_t, kG2CompressedBytes> g2_compress(const G2Affine& p);
std::optional<G1Affine> g1_decompress(std::span<const std::uint8_t> bytes, bool subgroup_check);
std::optional<G2Affine> g2_decompress(std::span<const std::uint8_t> bytes, bool subgroup_check);

bool g1_in_subgroup(const G1Affine& p);
bool g2_in_subgroup(const G2Affine& p);

// Deterministic hash-to-curve (try-and-increment, cofactor cleared). All
// parties derive identical generators from a shared domain-separation tag.
G1Affine hash_to_g1(std::span<const std::uint8_t> tag, std::uint64_t index);

// Batch Jacobian -> affine conversion with one field inversion.
std::vector<G1Affine> g1_batch_to_affine(std::span<const G1> pts);
std::vector<G2Affine> g2_batch_to_affine(std::span<const G2> pts);

}  // namespace zkpot::ec
