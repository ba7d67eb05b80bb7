#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>

#include "zkpot/common/bytes.hpp"
#include "zkpot/common/rng.hpp"
#include "zkpot/ec/curve_constants.hpp"

namespace zkpot::ec {

// Prime-field element in Montgomery representation. Params supplies the
// modulus, R^2, Montgomery one and -mod^-1 (mod 2^64); both moduli used here
// are below 2^(64*N - 1), so a single conditional subtraction after CIOS
// keeps values reduced.
template <typename Params>
class Fe {
public:
    static constexpr std::size_t N = Params::kLimbs;
    using Limbs = std::array<std::uint64_t, N>;

    constexpr Fe() : v_{} {}

    static Fe zero() { return Fe(); }
    static Fe one() {
        Fe r;
        r.v_ = Params::mont_one();
        return r;
    }

    static Fe from_u64(std::uint64_t x) {
        Limbs raw{};
        raw[0] = x;
        return from_raw(raw);
    }

    static Fe from_i64(std::int64_t x) {
        return x >= 0 ? from_u64(static_cast<std::uint64_t>(x))
                      : from_u64(static_cast<std::uint64_t>(-x)).neg();
    }

    // `raw` must already be < modulus.
    static Fe from_raw(const Limbs& raw) {
        Fe r;
        r.v_ = raw;
        mul_assign(r.v_, Params::r2());
        return r;
    }

    Limbs to_raw() const {
        Limbs one_raw{};
        one_raw[0] = 1;
        Limbs t = v_;
        // Montgomery multiply by plain 1 strips the R factor.
        Limbs res = t;
        mul_assign(res, one_raw);
        return res;
    }

    static std::optional<Fe> from_raw_checked(const Limbs& raw) {
        if (!less_than(raw, Params::mod())) return std::nullopt;
        return from_raw(raw);
    }

    Fe operator+(const Fe& o) const {
        Fe r = *this;
        add_assign(r.v_, o.v_);
        return r;
    }
    Fe operator-(const Fe& o) const {
        Fe r = *this;
        sub_assign(r.v_, o.v_);
        return r;
    }
    Fe operator*(const Fe& o) const {
        Fe r = *this;
        mul_assign(r.v_, o.v_);
        return r;
    }
    Fe& operator+=(const Fe& o) {
        add_assign(v_, o.v_);
        return *this;
    }
    Fe& operator-=(const Fe& o) {
        sub_assign(v_, o.v_);
        return *this;
    }
    Fe& operator*=(const Fe& o) {
        mul_assign(v_, o.v_);
        return *this;
    }

    Fe square() const { return *this * *this; }

    Fe neg() const {
        if (is_zero()) return *this;
        Fe r;
        borrow_sub(r.v_, Params::mod(), v_);
        return r;
    }
    Fe operator-() const { return neg(); }

    Fe dbl() const { return *this + *this; }

    bool is_zero() const {
        for (auto l : v_)
            if (l) return false;
        return true;
    }
    bool operator==(const Fe& o) const { return v_ == o.v_; }
    bool operator!=(const Fe& o) const { return v_ != o.v_; }

    Fe pow(std::span<const std::uint64_t> exp) const {
        Fe acc = one();
        bool started = false;
        for (std::size_t i = exp.size(); i-- > 0;) {
            for (int b = 63; b >= 0; --b) {
                if (started) acc = acc.square();
                if ((exp[i] >> b) & 1) {
                    acc *= *this;
                    started = true;
                }
            }
        }
        return acc;
    }

    Fe inverse() const {
        // Fermat inversion; all callers guarantee nonzero input.
        Limbs e = Params::mod();
        sub_small(e, 2);
        return pow(e);
    }

    // Raw-value comparison (not Montgomery order). Used for canonical-y
    // selection in point compression.
    bool raw_greater_than(const Limbs& bound) const {
        Limbs raw = to_raw();
        return less_than(bound, raw);
    }

    void to_be_bytes(std::uint8_t* out) const {  // N*8 bytes, big-endian
        Limbs raw = to_raw();
        for (std::size_t i = 0; i < N; ++i) {
            std::uint64_t limb = raw[N - 1 - i];
            for (int b = 0; b < 8; ++b) out[i * 8 + b] = static_cast<std::uint8_t>(limb >> (56 - 8 * b));
        }
    }

    static std::optional<Fe> from_be_bytes(const std::uint8_t* in) {
        Limbs raw{};
        for (std::size_t i = 0; i < N; ++i) {
            std::uint64_t limb = 0;
            for (int b = 0; b < 8; ++b) limb = (limb << 8) | in[i * 8 + b];
            raw[N - 1 - i] = limb;
        }
        return from_raw_checked(raw);
    }

    static Fe random(Rng& rng) {
        for (;;) {
            Limbs raw;
            for (auto& l : raw) l = rng.next();
            raw[N - 1] &= top_mask();
            if (less_than(raw, Params::mod())) return from_raw(raw);
        }
    }

    const Limbs& mont_limbs() const { return v_; }
    static Fe from_mont_limbs(const Limbs& m) {
        Fe r;
        r.v_ = m;
        return r;
    }

private:
    static constexpr std::uint64_t top_mask() {
        std::uint64_t top = Params::mod()[N - 1];
        std::uint64_t mask = ~0ULL;
        while ((mask >> 1) >= top) mask >>= 1;
        return mask;
    }

    static bool less_than(const Limbs& a, const Limbs& b) {
        for (std::size_t i = N; i-- > 0;) {
            if (a[i] < b[i]) return true;
            if (a[i] > b[i]) return false;
        }
        return false;
    }

    static void sub_small(Limbs& a, std::uint64_t k) {
        std::uint64_t borrow = k;
        for (std::size_t i = 0; i < N && borrow; ++i) {
            std::uint64_t prev = a[i];
            a[i] = prev - borrow;
            borrow = prev < borrow ? 1 : 0;
        }
    }

    // out = a - b, assumes a >= b
    static void borrow_sub(Limbs& out, const Limbs& a, const Limbs& b) {
        std::uint64_t borrow = 0;
        for (std::size_t i = 0; i < N; ++i) {
            std::uint64_t ai = a[i];
            std::uint64_t bi = b[i];
            std::uint64_t d = ai - bi - borrow;
            borrow = (ai < bi + borrow) || (bi == ~0ULL && borrow) ? 1 : 0;
            out[i] = d;
        }
    }

    static void add_assign(Limbs& a, const Limbs& b) {
        unsigned __int128 carry = 0;
        for (std::size_t i = 0; i < N; ++i) {
            carry += a[i];
            carry += b[i];
            a[i] = static_cast<std::uint64_t>(carry);
            carry >>= 64;
        }
        // carry cannot be set: both inputs < mod < 2^(64N-1)
        cond_reduce(a);
    }

    static void sub_assign(Limbs& a, const Limbs& b) {
        std::uint64_t borrow = 0;
        for (std::size_t i = 0; i < N; ++i) {
            std::uint64_t ai = a[i];
            std::uint64_t bi = b[i] + borrow;
            std::uint64_t next_borrow = (borrow && b[i] == ~0ULL) || ai < bi ? 1 : 0;
            a[i] = ai - bi;
            borrow = next_borrow;
        }
        if (borrow) {
            unsigned __int128 carry = 0;
            for (std::size_t i = 0; i < N; ++i) {
                carry += a[i];
                carry += Params::mod()[i];
                a[i] = static_cast<std::uint64_t>(carry);
                carry >>= 64;
            }
        }
    }

    static void cond_reduce(Limbs& a) {
        if (!less_than(a, Params::mod())) {
            Limbs r;
            borrow_sub(r, a, Params::mod());
            a = r;
        }
    }

    // CIOS Montgomery multiplication.
    static void mul_assign(Limbs& a, const Limbs& b) {
        const Limbs& mod = Params::mod();
        std::uint64_t t[N + 2] = {0};
        for (std::size_t i = 0; i < N; ++i) {
            unsigned __int128 carry = 0;
            for (std::size_t j = 0; j < N; ++j) {
                unsigned __int128 cur =
                    static_cast<unsigned __int128>(a[j]) * b[i] + t[j] + carry;
                t[j] = static_cast<std::uint64_t>(cur);
                carry = cur >> 64;
            }
            unsigned __int128 cur = static_cast<unsigned __int128>(t[N]) + carry;
            t[N] = static_cast<std::uint64_t>(cur);
            t[N + 1] = static_cast<std::uint64_t>(cur >> 64);

            std::uint64_t m = t[0] * Params::inv();
            unsigned __int128 cc =
                (static_cast<unsigned __int128>(m) * mod[0] + t[0]) >> 64;
            for (std::size_t j = 1; j < N; ++j) {
                unsigned __int128 cur2 =
                    static_cast<unsigned __int128>(m) * mod[j] + t[j] + cc;
                t[j - 1] = static_cast<std::uint64_t>(cur2);
                cc = cur2 >> 64;
            }
            unsigned __int128 cur3 = static_cast<unsigned __int128>(t[N]) + cc;
            t[N - 1] = static_cast<std::uint64_t>(cur3);
            t[N] = t[N + 1] + static_cast<std::uint64_t>(cur3 >> 64);
        }
        Limbs res;
        for (std::size_t i = 0; i < N; ++i) res[i] = t[i];
        cond_reduce(res);
        a = res;
    }

    Limbs v_;
};

struct FpParams {
    static constexpr std::size_t kLimbs = consts::kFpLimbs;
    static constexpr const std::array<std::uint64_t, 6>& mod() { return consts::kP; }
    static constexpr const std::array<std::uint64_t, 6>& r2() { return consts::kPR2; }
    static constexpr const std::array<std::uint64_t, 6>& mont_one() { return consts::kPMontOne; }
    static constexpr std::uint64_t inv() { return consts::kPInv; }
};

struct FrParams {
    static constexpr std::size_t kLimbs = consts::kFrLimbs;
    static constexpr const std::array<std::uint64_t, 4>& mod() { return consts::kR; }
    static constexpr const std::array<std::uint64_t, 4>& r2() { return consts::kRR2; }
    static constexpr const std::array<std::uint64_t, 4>& mont_one() { return consts::kRMontOne; }
    static constexpr std::uint64_t inv() { return consts::kRInv; }
};

using Fp = Fe<FpParams>;
using Fr = Fe<FrParams>;

inline constexpr std::size_t kFpBytes = 48;
inline constexpr std::size_t kFrBytes = 32;

// sqrt in Fp, valid because p = 3 (mod 4); nullopt for non-residues.
std::optional<Fp> fp_sqrt(const Fp& a);

// Batch inversion via the Montgomery product trick; zero entries untouched.
void fr_batch_inverse(std::span<Fr> xs);
void fp_batch_inverse(std::span<Fp> xs);

Bytes fr_to_bytes(const Fr& x);
std::optional<Fr> fr_from_bytes(std::span<const std::uint8_t> b);

// Derives a field element from arbitrary bytes (uniform enough for nonces and
// hash-chain use; not used where exact uniformity matters).
Fr fr_from_hash(std::span<const std::uint8_t> data);

}  // namespace zkpot::ec
