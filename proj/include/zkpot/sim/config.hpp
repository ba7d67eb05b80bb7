#pragma once

#include <filesystem>

#include "zkpot/consensus/consensus.hpp"

namespace zkpot::sim {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LatencyModel {
    enum class Kind { Fixed, Uniform } kind = Kind::Fixed;
    double fixed_ms = 5.0;
    double lo_ms = 0.0, hi_ms = 0.0;

    double sample_s(Rng& rng) const {
        if (kind == Kind::Fixed) return fixed_ms / 1e3;
        return (lo_ms + (hi_ms - lo_ms) * rng.unit()) / 1e3;
    }
    static LatencyModel parse(std::string_view spec);  // "fixed:5" | "uniform:1:10"
    std::string to_string() const;
};

struct SimConfig {
    std::size_t nodes = 4;
    unsigned rounds = 2;
    double byzantine_frac = 0.0;
    std::string byzantine_kind = "inflated_acc";
    std::string dataset = "synthetic";  // "mnist" | "synthetic"
    std::string data_dir = "data";
    std::string backend = "oracle";  // "oracle" | "snark"
    std::uint64_t seed = 1;
    std::string latency = "fixed:5";
    std::uint32_t prove_samples = 100;
    std::string out_dir = "out";
    bool deterministic = false;
    double deadline_s = 30.0;

    unsigned local_epochs = 5;
    double learning_rate = 0.1;
    std::size_t batch_size = 32;
    std::size_t clients_per_round = 20;

    std::vector<quant::Index> model_dims = {784, 128, 10};
    quant::Index synth_train = 6000;
    quant::Index synth_test = 1000;

    void validate() const;
    LatencyModel latency_model() const { return LatencyModel::parse(latency); }
    consensus::ByzantineKind byz_kind() const {
        return consensus::byzantine_kind_from_string(byzantine_kind);
    }

    static SimConfig from_json_file(const std::filesystem::path& path);
    std::string to_json() const;
};

}  // namespace zkpot::sim
