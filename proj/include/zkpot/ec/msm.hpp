#pragma once

#include <vector>

#include "zkpot/ec/curve.hpp"

namespace zkpot::ec {

namespace detail {

inline unsigned msm_window_bits(std::size_t n) {
    if (n < 32) return 3;
    unsigned c = 1;
    while ((std::size_t(1) << (c + 1)) < n) ++c;
    unsigned w = c > 2 ? c - 2 : 1;
    return w > 16 ? 16 : w;
}

inline unsigned scalar_window(const std::array<std::uint64_t, 4>& raw, unsigned pos, unsigned c) {
    unsigned limb = pos / 64;
    unsigned off = pos % 64;
    if (limb >= 4) return 0;
    std::uint64_t v = raw[limb] >> off;
    if (off + c > 64 && limb + 1 < 4) v |= raw[limb + 1] << (64 - off);
    return static_cast<unsigned>(v & ((std::uint64_t(1) << c) - 1));
}

}  // namespace detail

// Reference multi-scalar multiplication: one double-and-add per term. Kept
// serial and obvious; the Pippenger kernel below is checked against it.
template <typename Traits>
JacobianPoint<Traits> msm_serial(std::span<const AffinePoint<Traits>> points,
                                 std::span<const Fr> scalars) {
    JacobianPoint<Traits> acc = JacobianPoint<Traits>::identity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        acc = acc.add(JacobianPoint<Traits>::from_affine(points[i]).mul(scalars[i]));
    }
    return acc;
}

// Pippenger bucket method, parallelized across scalar windows. Each window is
// processed by exactly one thread and the windows are combined in a fixed
// order, so results are bit-identical to the serial path.
template <typename Traits>
JacobianPoint<Traits> msm(std::span<const AffinePoint<Traits>> points,
                          std::span<const Fr> scalars) {
    using Jac = JacobianPoint<Traits>;
    const std::size_t n = points.size();
    if (n == 0) return Jac::identity();

    const unsigned c = detail::msm_window_bits(n);
    const unsigned windows = (255 + c - 1) / c;

    std::vector<std::array<std::uint64_t, 4>> raw(n);
    for (std::size_t i = 0; i < n; ++i) raw[i] = scalars[i].to_raw();

    std::vector<Jac> window_sums(windows, Jac::identity());
#pragma omp parallel for schedule(dynamic)
    for (int w = 0; w < static_cast<int>(windows); ++w) {
        std::vector<Jac> buckets((std::size_t(1) << c) - 1, Jac::identity());
        for (std::size_t i = 0; i < n; ++i) {
            unsigned idx = detail::scalar_window(raw[i], static_cast<unsigned>(w) * c, c);
            if (idx) buckets[idx - 1] = buckets[idx - 1].add_affine(points[i]);
        }
        Jac running = Jac::identity();
        Jac sum = Jac::identity();
        for (std::size_t b = buckets.size(); b-- > 0;) {
            running = running.add(buckets[b]);
            sum = sum.add(running);
        }
        window_sums[w] = sum;
    }

    Jac acc = Jac::identity();
    for (std::size_t w = windows; w-- > 0;) {
        for (unsigned i = 0; i < c; ++i) acc = acc.dbl();
        acc = acc.add(window_sums[w]);
    }
    return acc;
}

// Many scalars against a single base, with an 8-bit precomputed table.
template <typename Traits>
std::vector<JacobianPoint<Traits>> fixed_base_mul(const JacobianPoint<Traits>& base,
                                                  std::span<const Fr> scalars) {
    using Jac = JacobianPoint<Traits>;
    constexpr unsigned kWindow = 8;
    constexpr unsigned kWindows = 32;  // 256 bits / 8
    const std::size_t table_width = (1u << kWindow) - 1;

    std::vector<Jac> table_jac;
    table_jac.reserve(kWindows * table_width);
    Jac win_base = base;
    for (unsigned w = 0; w < kWindows; ++w) {
        Jac cur = win_base;
        for (std::size_t j = 0; j < table_width; ++j) {
            table_jac.push_back(cur);
            cur = cur.add(win_base);
        }
        win_base = cur;  // win_base * 2^kWindow
    }
    std::vector<AffinePoint<Traits>> table;
    if constexpr (std::is_same_v<Traits, G1Traits>) {
        table = g1_batch_to_affine(table_jac);
    } else {
        table = g2_batch_to_affine(table_jac);
    }

    std::vector<Jac> out(scalars.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(scalars.size()); ++i) {
        auto raw = scalars[i].to_raw();
        Jac acc = Jac::identity();
        for (unsigned w = 0; w < kWindows; ++w) {
            unsigned idx = (raw[w / 8] >> ((w % 8) * 8)) & 0xFF;
            if (idx) acc = acc.add_affine(table[w * table_width + idx - 1]);
        }
        out[i] = acc;
    }
    return out;
}

}  // namespace zkpot::ec
