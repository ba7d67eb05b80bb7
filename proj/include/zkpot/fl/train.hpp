#pragma once

#include "zkpot/common/bytes.hpp"
#include "zkpot/fl/dataset.hpp"
#include "zkpot/quant/model.hpp"

namespace zkpot::fl {

struct TrainingDiverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};
using quant::ShapeError;

// Dense float network, one ReLU between consecutive layers.
struct FloatModel {
    std::vector<quant::RealTensor> weights;  // out x in, row-major
    std::vector<quant::RealTensor> biases;   // out x 1

    std::vector<quant::Index> dims() const;
    bool same_shape(const FloatModel& o) const;
};

// 784-128-10 network from the MNIST experiments; seeded uniform init.
FloatModel init_model(std::span<const quant::Index> dims, std::uint64_t seed);
inline FloatModel init_shallownet(std::uint64_t seed) {
    const quant::Index dims[] = {784, 128, 10};
    return init_model(dims, seed);
}

struct TrainConfig {
    unsigned local_epochs = 5;
    double learning_rate = 0.1;
    std::size_t batch_size = 32;
    std::size_t clients_total = 100;
    std::size_t clients_per_round = 20;
    unsigned global_rounds = 30;
    std::uint64_t seed = 1;
};

// Mini-batch SGD with softmax cross-entropy. Returns the trained copy;
// non-finite loss raises TrainingDiverged.
FloatModel local_train(const FloatModel& global, const Dataset& data, const TrainConfig& cfg,
                       std::uint64_t shuffle_seed);

// Dataset-size-weighted parameter average.
FloatModel fedavg(std::span<const FloatModel> models, std::span<const std::size_t> sizes);

std::vector<std::int32_t> float_predictions(const FloatModel& model, const Dataset& data);
double evaluate(const FloatModel& model, const Dataset& test);
double mean_loss(const FloatModel& model, const Dataset& data);

// Conversions to and from the quantized container.
quant::QuantizedModel quantize_float_model(const FloatModel& model);
FloatModel dequantize_model(const quant::QuantizedModel& model);

// Float checkpoint, magic "ZKPF": the quantized container's f64 sibling.
Bytes serialize_float_model(const FloatModel& model);
FloatModel deserialize_float_model(std::span<const std::uint8_t> bytes);

}  // namespace zkpot::fl
