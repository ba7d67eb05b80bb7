#pragma once

#include <filesystem>
#include <span>
#include <variant>

#include "zkpot/common/rng.hpp"
#include "zkpot/quant/types.hpp"

namespace zkpot::fl {

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidPartition : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Split { Train, Test };

// Feature rows normalized to [0,1]; labels are class indices.
struct Dataset {
    quant::RealTensor samples;  // n x features
    std::vector<std::int32_t> labels;
    Split split = Split::Train;

    quant::Index size() const { return samples.rows; }
    quant::Index features() const { return samples.cols; }
    std::span<const double> row(quant::Index i) const {
        return {samples.data.data() + i * samples.cols, static_cast<std::size_t>(samples.cols)};
    }
    Dataset subset(std::span<const quant::Index> indices) const;
};

// IDX-format MNIST pair (big-endian magic 0x803 for images, 0x801 for labels).
Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                 Split split);
std::pair<Dataset, Dataset> load_mnist(const std::filesystem::path& dir);

// Deterministic stand-in when the real archive is not on disk: a mixture of
// seeded class prototypes with pixel noise, byte-quantized like MNIST.
Dataset synthetic_dataset(std::uint64_t seed, quant::Index n, quant::Index features,
                          int classes, Split split);

struct IidScheme {};
struct DirichletScheme {
    double alpha = 0.5;
};
using PartitionScheme = std::variant<IidScheme, DirichletScheme>;

// Disjoint client shards covering the input exactly.
std::vector<Dataset> partition(const Dataset& train, std::size_t n_clients,
                               const PartitionScheme& scheme, std::uint64_t seed);

// Per-class label histogram, used by the partition tests.
std::vector<std::size_t> label_histogram(const Dataset& d, int classes);

}  // namespace zkpot::fl
