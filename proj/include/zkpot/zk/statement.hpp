#pragma once

#include <optional>

#include "zkpot/quant/model.hpp"
#include "zkpot/zk/mimc.hpp"

namespace zkpot::zk {

struct UnsupportedCircuit : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsatisfiableWitness : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidKey : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Protocol-wide input quantization for image features in [0,1].
inline const quant::QuantParams kCanonicalInputParams{1.0 / 255.0, 0, 8};

struct ModelShape {
    std::vector<quant::Index> dims;  // [in, hidden..., out] over FC layers
    bool operator==(const ModelShape&) const = default;
};

ModelShape shape_of(const quant::QuantizedModel& model);

struct CircuitConfig {
    std::uint32_t n_samples = 100;
    unsigned shift = quant::kDefaultShift;
    unsigned activation_bits = 16;
    unsigned compare_bits = 18;  // signed comparison window over 16-bit logits
    bool operator==(const CircuitConfig&) const = default;
};

// Public claim: the model committed to (Pedersen point + algebraic digest)
// reaches claimed_acc correct predictions on the digest-pinned dataset.
struct Statement {
    Bytes commitment;          // compressed Pedersen point bytes
    ec::Fr model_digest;       // algebraic in-circuit binding of the model
    Digest32 dataset_sha{};    // SHA-256 of the canonical dataset bytes
    Digest32 labels_sha{};
    ec::Fr dataset_digest;     // algebraic binding of the quantized pixels
    ec::Fr labels_digest;
    std::uint32_t claimed_acc = 0;
    ModelShape shape;
    std::uint32_t n_samples = 0;
};

struct Witness {
    quant::QuantizedModel model;
    ec::Fr opening_r;  // Pedersen opening randomness
    std::vector<quant::InferenceTrace> traces;
    std::vector<std::int32_t> labels;
    std::vector<std::uint8_t> correct_bits;
};

// Deterministic integer image of the model hashed in-circuit: shape, per-layer
// zero points / multipliers / mprime, biases, then packed 8-bit weights.
std::vector<ec::Fr> model_circuit_view(const quant::QuantizedModel& model,
                                       unsigned shift = quant::kDefaultShift);
ec::Fr model_digest(const quant::QuantizedModel& model, unsigned shift = quant::kDefaultShift);

Bytes serialize_dataset(const quant::RealTensor& samples);
Bytes serialize_labels(std::span<const std::int32_t> labels);

ec::Fr dataset_algebraic_digest(const quant::RealTensor& samples);
ec::Fr labels_algebraic_digest(std::span<const std::int32_t> labels);

Statement make_statement(Bytes commitment_bytes, const ec::Fr& model_dig,
                         const quant::RealTensor& samples, std::span<const std::int32_t> labels,
                         std::uint32_t claimed_acc, const ModelShape& shape);

// Runs inference over all samples, recording traces and correctness bits.
Witness build_witness(quant::QuantizedModel model, const ec::Fr& opening_r,
                      const quant::RealTensor& samples, std::span<const std::int32_t> labels);

}  // namespace zkpot::zk
