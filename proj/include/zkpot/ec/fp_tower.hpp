#pragma once

#include "zkpot/ec/fields.hpp"

namespace zkpot::ec {

// Fp2 = Fp[u] / (u^2 + 1)
struct Fp2 {
    Fp c0, c1;

    static Fp2 zero() { return {Fp::zero(), Fp::zero()}; }
    static Fp2 one() { return {Fp::one(), Fp::zero()}; }

    bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
    bool operator==(const Fp2& o) const { return c0 == o.c0 && c1 == o.c1; }
    bool operator!=(const Fp2& o) const { return !(*this == o); }

    Fp2 operator+(const Fp2& o) const { return {c0 + o.c0, c1 + o.c1}; }
    Fp2 operator-(const Fp2& o) const { return {c0 - o.c0, c1 - o.c1}; }
    Fp2 operator-() const { return {-c0, -c1}; }

    Fp2 operator*(const Fp2& o) const {
        Fp v0 = c0 * o.c0;
        Fp v1 = c1 * o.c1;
        Fp mixed = (c0 + c1) * (o.c0 + o.c1);
        return {v0 - v1, mixed - v0 - v1};
    }

    Fp2 mul_fp(const Fp& k) const { return {c0 * k, c1 * k}; }

    Fp2 square() const {
        Fp a = c0 + c1;
        Fp b = c0 - c1;
        Fp cc = c0 * c1;
        return {a * b, cc + cc};
    }

    Fp2 dbl() const { return {c0.dbl(), c1.dbl()}; }

    Fp2 conjugate() const { return {c0, -c1}; }

    Fp2 inverse() const {
        Fp norm = c0 * c0 + c1 * c1;
        Fp ninv = norm.inverse();
        return {c0 * ninv, -(c1 * ninv)};
    }

    // Multiplication by the sextic non-residue xi = u + 1.
    Fp2 mul_by_xi() const { return {c0 - c1, c0 + c1}; }

    static Fp2 random(Rng& rng) { return {Fp::random(rng), Fp::random(rng)}; }
};

// sqrt in Fp2 via the complex method; nullopt for non-residues.
std::optional<Fp2> fp2_sqrt(const Fp2& a);

// Fp6 = Fp2[v] / (v^3 - xi)
struct Fp6 {
    Fp2 c0, c1, c2;

    static Fp6 zero() { return {Fp2::zero(), Fp2::zero(), Fp2::zero()}; }
    static Fp6 one() { return {Fp2::one(), Fp2::zero(), Fp2::zero()}; }

    bool is_zero() const { return c0.is_zero() && c1.is_zero() && c2.is_zero(); }
    bool operator==(const Fp6& o) const { return c0 == o.c0 && c1 == o.c1 && c2 == o.c2; }
    bool operator!=(const Fp6& o) const { return !(*this == o); }

    Fp6 operator+(const Fp6& o) const { return {c0 + o.c0, c1 + o.c1, c2 + o.c2}; }
    Fp6 operator-(const Fp6& o) const { return {c0 - o.c0, c1 - o.c1, c2 - o.c2}; }
    Fp6 operator-() const { return {-c0, -c1, -c2}; }

    Fp6 operator*(const Fp6& o) const {
        Fp2 v0 = c0 * o.c0;
        Fp2 v1 = c1 * o.c1;
        Fp2 v2 = c2 * o.c2;
        Fp2 r0 = v0 + ((c1 + c2) * (o.c1 + o.c2) - v1 - v2).mul_by_xi();
        Fp2 r1 = (c0 + c1) * (o.c0 + o.c1) - v0 - v1 + v2.mul_by_xi();
        Fp2 r2 = (c0 + c2) * (o.c0 + o.c2) - v0 - v2 + v1;
        return {r0, r1, r2};
    }

    Fp6 square() const { return *this * *this; }

    // Multiplication by v (the cubic extension generator).
    Fp6 mul_by_v() const { return {c2.mul_by_xi(), c0, c1}; }

    Fp6 inverse() const {
        Fp2 a = c0.square() - (c1 * c2).mul_by_xi();
        Fp2 b = c2.square().mul_by_xi() - c0 * c1;
        Fp2 c = c1.square() - c0 * c2;
        Fp2 t = ((c2 * b + c1 * c).mul_by_xi() + c0 * a).inverse();
        return {a * t, b * t, c * t};
    }
};

// Fp12 = Fp6[w] / (w^2 - v)
struct Fp12 {
    Fp6 c0, c1;

    static Fp12 zero() { return {Fp6::zero(), Fp6::zero()}; }
    static Fp12 one() { return {Fp6::one(), Fp6::zero()}; }

    bool operator==(const Fp12& o) const { return c0 == o.c0 && c1 == o.c1; }
    bool operator!=(const Fp12& o) const { return !(*this == o); }
    bool is_one() const { return *this == one(); }

    Fp12 operator+(const Fp12& o) const { return {c0 + o.c0, c1 + o.c1}; }
    Fp12 operator-(const Fp12& o) const { return {c0 - o.c0, c1 - o.c1}; }

    Fp12 operator*(const Fp12& o) const {
        Fp6 v0 = c0 * o.c0;
        Fp6 v1 = c1 * o.c1;
        Fp6 mixed = (c0 + c1) * (o.c0 + o.c1);
        return {v0 + v1.mul_by_v(), mixed - v0 - v1};
    }

    Fp12 square() const { return *this * *this; }

    // The p^6 power map: w -> -w.
    Fp12 conjugate() const { return {c0, -c1}; }

    Fp12 inverse() const {
        Fp6 t = (c0.square() - c1.square().mul_by_v()).inverse();
        return {c0 * t, -(c1 * t)};
    }

    Fp12 pow(std::span<const std::uint64_t> exp) const {
        Fp12 acc = one();
        bool started = false;
        for (std::size_t i = exp.size(); i-- > 0;) {
            for (int b = 63; b >= 0; --b) {
                if (started) acc = acc.square();
                if ((exp[i] >> b) & 1) {
                    acc = acc * *this;
                    started = true;
                }
            }
        }
        return acc;
    }
};

}  // namespace zkpot::ec
