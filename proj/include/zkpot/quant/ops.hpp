#pragma once

#include <span>

#include "zkpot/quant/types.hpp"

namespace zkpot::quant {

// Asymmetric per-tensor affine quantization, r = S(q - Z). The range is
// extended to include zero so the zero point always lands in [0, qmax] and the
// element-wise round-trip error stays within scale/2. Rounding is
// half-away-from-zero throughout.
QuantizedTensor quantize(const RealTensor& t, unsigned bit_width);

RealTensor dequantize(const QuantizedTensor& qt);

FixedMultiplier fixed_multiplier(double s_w, double s_x, double s_y, unsigned shift);

// Sign-bit-grouping byproducts of a quantized matmul. With J the all-ones
// matrix: g1 = QW*QX, g2 = z_x * (QW row sums), g3 = z_w * (QX column sums),
// and the ceiling constant mprime = ceil(z_y * 2^shift / m). The bracket
//   g1 + bias + n*z_w*z_x + mprime - g2 - g3
// is non-negative for valid out_params, and the layer satisfies
//   QY * 2^shift + R = m * bracket, 0 <= R < 2^shift, element-wise.
struct QmatmulAux {
    std::vector<std::int64_t> g1;    // rows x cols of the output
    std::vector<std::int64_t> g2;    // one per output row
    std::vector<std::int64_t> g3;    // one per output column
    std::vector<std::int64_t> bias;  // one per output row (zeros if absent)
    std::int64_t mprime = 0;
};

struct QmatmulResult {
    QuantizedTensor qy;
    std::vector<std::int64_t> remainder;  // rows x cols, in [0, 2^shift)
    QmatmulAux aux;
};

// OpenMP-parallel over output elements; bit-identical to qmatmul_reference.
QmatmulResult qmatmul(const QuantizedTensor& qw, const QuantizedTensor& qx,
                      const FixedMultiplier& mult, const QuantParams& out_params,
                      std::span<const std::int64_t> bias = {});

// Serial reference implementation kept as the test oracle.
QmatmulResult qmatmul_reference(const QuantizedTensor& qw, const QuantizedTensor& qx,
                                const FixedMultiplier& mult, const QuantParams& out_params,
                                std::span<const std::int64_t> bias = {});

// Re-evaluates the right-hand side of the remainder identity from the aux
// values alone and checks it reproduces qy*2^shift + remainder bit-exactly.
bool check_remainder_identity(const QmatmulResult& res, const QuantizedTensor& qw,
                              const QuantizedTensor& qx, const FixedMultiplier& mult);

}  // namespace zkpot::quant
