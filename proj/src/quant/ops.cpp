#include "zkpot/quant/ops.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

namespace zkpot::quant {

namespace {

std::int64_t round_away(double x) { return std::llround(x); }

std::int64_t clamp_q(std::int64_t v, std::int64_t qmax) {
    return std::clamp<std::int64_t>(v, 0, qmax);
}

void require(bool cond, const char* msg) {
    if (!cond) throw ShapeError(msg);
}

std::int64_t checked_i64(__int128 v, const char* what) {
    if (v > kIntegerBudget || v < -static_cast<__int128>(kIntegerBudget))
        throw OverflowError(what);
    return static_cast<std::int64_t>(v);
}

}  // namespace

QuantizedTensor quantize(const RealTensor& t, unsigned bit_width) {
    if (t.rows <= 0 || t.cols <= 0 || t.data.size() != static_cast<std::size_t>(t.size()))
        throw InvalidTensor("quantize: empty or malformed tensor");
    if (bit_width != 8 && bit_width != 16) throw InvalidTensor("quantize: bit_width must be 8 or 16");

    double lo = t.data[0], hi = t.data[0];
    for (double v : t.data) {
        if (!std::isfinite(v)) throw InvalidTensor("quantize: non-finite entry");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }

    QuantParams params;
    params.bit_width = bit_width;
    const std::int64_t qmax = params.qmax();
    if (lo == hi) {
        // Degenerate constant tensor: unit scale, zero point from the constant.
        params.scale = 1.0;
        params.zero_point = clamp_q(round_away(-lo), qmax);
    } else {
        lo = std::min(lo, 0.0);
        hi = std::max(hi, 0.0);
        params.scale = (hi - lo) / static_cast<double>(qmax);
        params.zero_point = clamp_q(round_away(-lo / params.scale), qmax);
    }

    QuantizedTensor out{t.rows, t.cols, std::vector<std::int64_t>(t.data.size()), params};
    for (std::size_t i = 0; i < t.data.size(); ++i) {
        out.q[i] = clamp_q(round_away(t.data[i] / params.scale) + params.zero_point, qmax);
    }
    return out;
}

RealTensor dequantize(const QuantizedTensor& qt) {
    RealTensor out{qt.rows, qt.cols, std::vector<double>(qt.q.size())};
    for (std::size_t i = 0; i < qt.q.size(); ++i) {
        out.data[i] = qt.params.scale * static_cast<double>(qt.q[i] - qt.params.zero_point);
    }
    return out;
}

FixedMultiplier fixed_multiplier(double s_w, double s_x, double s_y, unsigned shift) {
    if (!(s_w > 0.0) || !(s_x > 0.0) || !(s_y > 0.0))
        throw MultiplierOverflow("fixed_multiplier: scales must be positive");
    double ratio = std::ldexp(s_w * s_x / s_y, static_cast<int>(shift));
    if (!std::isfinite(ratio) || ratio > static_cast<double>(kIntegerBudget))
        throw MultiplierOverflow("fixed_multiplier: multiplier exceeds integer budget");
    std::int64_t m = round_away(ratio);
    if (m < 1) throw MultiplierOverflow("fixed_multiplier: multiplier rounds to zero");
    return {m, shift};
}

template <bool Parallel>
static QmatmulResult qmatmul_impl(const QuantizedTensor& qw, const QuantizedTensor& qx,
                                  const FixedMultiplier& mult, const QuantParams& out_params,
                                  std::span<const std::int64_t> bias) {
    require(qw.cols == qx.rows, "qmatmul: inner dimensions do not match");
    require(qw.rows > 0 && qx.cols > 0, "qmatmul: empty operands");
    if (!bias.empty()) require(static_cast<Index>(bias.size()) == qw.rows, "qmatmul: bias length");

    const Index m = qw.rows, n = qw.cols, p = qx.cols;
    const std::int64_t z_w = qw.params.zero_point;
    const std::int64_t z_x = qx.params.zero_point;
    const std::int64_t z_y = out_params.zero_point;
    const std::int64_t M = mult.m;
    const std::int64_t two_k = std::int64_t(1) << mult.shift;

    QmatmulResult res;
    res.qy = QuantizedTensor{m, p, std::vector<std::int64_t>(static_cast<std::size_t>(m * p)),
                             out_params};
    res.remainder.resize(static_cast<std::size_t>(m * p));
    res.aux.g1.resize(static_cast<std::size_t>(m * p));
    res.aux.g2.resize(static_cast<std::size_t>(m));
    res.aux.g3.resize(static_cast<std::size_t>(p));
    res.aux.bias.assign(static_cast<std::size_t>(m), 0);
    if (!bias.empty()) std::copy(bias.begin(), bias.end(), res.aux.bias.begin());

    // mprime = ceil(z_y * 2^k / M), exact integer arithmetic
    __int128 zy2k = static_cast<__int128>(z_y) << mult.shift;
    res.aux.mprime = checked_i64((zy2k + M - 1) / M, "qmatmul: mprime overflow");

    for (Index i = 0; i < m; ++i) {
        __int128 rs = 0;
        for (Index j = 0; j < n; ++j) rs += qw.at(i, j);
        res.aux.g2[static_cast<std::size_t>(i)] =
            checked_i64(static_cast<__int128>(z_x) * rs, "qmatmul: g2 overflow");
    }
    for (Index c = 0; c < p; ++c) {
        __int128 cs = 0;
        for (Index j = 0; j < n; ++j) cs += qx.at(j, c);
        res.aux.g3[static_cast<std::size_t>(c)] =
            checked_i64(static_cast<__int128>(z_w) * cs, "qmatmul: g3 overflow");
    }

    const std::int64_t nzwzx =
        checked_i64(static_cast<__int128>(n) * z_w * z_x, "qmatmul: n*z_w*z_x overflow");

    const auto body = [&](Index i) {
        for (Index c = 0; c < p; ++c) {
            __int128 dot = 0;
            for (Index j = 0; j < n; ++j) {
                dot += static_cast<__int128>(qw.at(i, j)) * qx.at(j, c);
            }
            const std::size_t idx = static_cast<std::size_t>(i * p + c);
            res.aux.g1[idx] = checked_i64(dot, "qmatmul: g1 overflow");
            __int128 bracket = dot + res.aux.bias[static_cast<std::size_t>(i)] + nzwzx +
                               res.aux.mprime - res.aux.g2[static_cast<std::size_t>(i)] -
                               res.aux.g3[static_cast<std::size_t>(c)];
            if (bracket < 0)
                throw OverflowError("qmatmul: negative bracket (out_params do not cover the range)");
            __int128 scaled = checked_i64(bracket * M, "qmatmul: bracket*M overflow");
            std::int64_t qy = static_cast<std::int64_t>(scaled >> mult.shift);
            if (qy > out_params.qmax())
                throw OverflowError("qmatmul: output exceeds quantized range");
            res.qy.q[idx] = qy;
            res.remainder[idx] = static_cast<std::int64_t>(scaled & (two_k - 1));
        }
    };

    if constexpr (Parallel) {
        std::exception_ptr err = nullptr;
        std::atomic<bool> failed{false};
#pragma omp parallel for schedule(static)
        for (Index i = 0; i < m; ++i) {
            if (failed.load(std::memory_order_relaxed)) continue;
            try {
                body(i);
            } catch (...) {
#pragma omp critical
                {
                    if (!err) err = std::current_exception();
                }
                failed.store(true, std::memory_order_relaxed);
            }
        }
        if (err) std::rethrow_exception(err);
    } else {
        for (Index i = 0; i < m; ++i) body(i);
    }
    return res;
}

QmatmulResult qmatmul(const QuantizedTensor& qw, const QuantizedTensor& qx,
                      const FixedMultiplier& mult, const QuantParams& out_params,
                      std::span<const std::int64_t> bias) {
    return qmatmul_impl<true>(qw, qx, mult, out_params, bias);
}

QmatmulResult qmatmul_reference(const QuantizedTensor& qw, const QuantizedTensor& qx,
                                const FixedMultiplier& mult, const QuantParams& out_params,
                                std::span<const std::int64_t> bias) {
    return qmatmul_impl<false>(qw, qx, mult, out_params, bias);
}

bool check_remainder_identity(const QmatmulResult& res, const QuantizedTensor& qw,
                              const QuantizedTensor& qx, const FixedMultiplier& mult) {
    const Index m = res.qy.rows, p = res.qy.cols, n = qw.cols;
    const std::int64_t two_k = std::int64_t(1) << mult.shift;
    const __int128 nzwzx =
        static_cast<__int128>(n) * qw.params.zero_point * qx.params.zero_point;
    for (Index i = 0; i < m; ++i) {
        for (Index c = 0; c < p; ++c) {
            const std::size_t idx = static_cast<std::size_t>(i * p + c);
            std::int64_t r = res.remainder[idx];
            if (r < 0 || r >= two_k) return false;
            __int128 lhs = static_cast<__int128>(res.qy.q[idx]) * two_k + r;
            __int128 rhs = static_cast<__int128>(mult.m) *
                           (static_cast<__int128>(res.aux.g1[idx]) +
                            res.aux.bias[static_cast<std::size_t>(i)] + nzwzx + res.aux.mprime -
                            res.aux.g2[static_cast<std::size_t>(i)] -
                            res.aux.g3[static_cast<std::size_t>(c)]);
            if (lhs != rhs) return false;
        }
    }
    return true;
}

}  // namespace zkpot::quant
