#pragma once

#include <optional>
#include <span>

#include "zkpot/common/bytes.hpp"
#include "zkpot/quant/ops.hpp"

namespace zkpot::quant {

enum class LayerKind : std::uint8_t { FullyConnected = 0, Relu = 1 };

struct Layer {
    LayerKind kind = LayerKind::FullyConnected;
    QuantizedTensor weights;         // FC only, rows = out, cols = in
    std::vector<std::int64_t> bias;  // FC only, quantized at s_w*s_x with zero point 0
    QuantParams out_params;          // FC: 16-bit activation params; ReLU: its input params
};

// Fully-connected quantized network. Weights are 8-bit, activations 16-bit;
// the input quantization (images: scale 1/255, zero point 0) is part of the
// model so inference is a pure function of (model bytes, sample).
struct QuantizedModel {
    QuantParams input_params;
    std::vector<Layer> layers;

    Index input_size() const;
    Index output_size() const;
    std::vector<Index> fc_dims() const;  // [in, out0, out1, ...] over FC layers
};

struct LayerTrace {
    std::size_t layer_index = 0;  // index into model.layers (FC layers only)
    QuantizedTensor qx;
    QuantizedTensor qy;
    std::vector<std::int64_t> remainder;
    QmatmulAux aux;
    FixedMultiplier multiplier;
    std::int64_t z_w = 0, z_x = 0, z_y = 0;
};

struct InferenceTrace {
    std::vector<LayerTrace> layers;
    std::vector<std::int64_t> logits;
};

// Per-layer multipliers are derived from the stored scales, never serialized.
FixedMultiplier layer_multiplier(const QuantizedModel& model, std::size_t fc_index,
                                 unsigned shift = kDefaultShift);

QuantizedTensor quantize_input(const QuantParams& input_params, std::span<const double> sample);

// Runs every FC layer through qmatmul (recording the full trace) and ReLU as
// max(q, zero_point) on the quantized values.
std::pair<std::vector<std::int64_t>, InferenceTrace> quantized_forward(
    const QuantizedModel& model, const QuantizedTensor& input);

bool validate_trace(const QuantizedModel& model, const InferenceTrace& trace);

// Number of samples whose integer-logit argmax (lowest index wins ties)
// equals the label. Samples are rows of a row-major matrix.
std::int64_t accuracy(const QuantizedModel& model, const RealTensor& samples,
                      std::span<const std::int32_t> labels);

// Same, also returning per-sample traces for witness generation.
std::int64_t accuracy_with_traces(const QuantizedModel& model, const RealTensor& samples,
                                  std::span<const std::int32_t> labels,
                                  std::vector<InferenceTrace>& traces);

std::int64_t accuracy_serial(const QuantizedModel& model, const RealTensor& samples,
                             std::span<const std::int32_t> labels);

// Builds the quantized model from float parameters: weights quantized to
// 8 bits, biases at s_w*s_x, and 16-bit activation params sized from the
// exact worst-case integer range of each layer so the remainder identity can
// never saturate. A ReLU layer is inserted after every FC layer but the last.
QuantizedModel build_quantized_model(std::span<const RealTensor> weights,
                                     std::span<const RealTensor> biases,
                                     const QuantParams& input_params,
                                     unsigned shift = kDefaultShift);

// Rejects models whose worst-case intermediates exceed the integer budget.
void validate_model_budget(const QuantizedModel& model, unsigned shift = kDefaultShift);

// 16-bit activation params (and the matching multiplier) covering the exact
// worst-case integer range of one FC layer, so qmatmul can never saturate.
std::pair<QuantParams, FixedMultiplier> choose_activation_params(
    const QuantizedTensor& qw, std::span<const std::int64_t> bias, const QuantParams& in_params,
    unsigned shift = kDefaultShift);

// Binary container (magic "ZKPQ"): the exact byte stream that gets committed,
// content-addressed and hashed.
Bytes serialize_model(const QuantizedModel& model);
QuantizedModel deserialize_model(std::span<const std::uint8_t> bytes);

int argmax_lowest(std::span<const std::int64_t> v);

}  // namespace zkpot::quant
