#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace zkpot::quant {

using Index = std::int64_t;

struct InvalidTensor : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ShapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OverflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MultiplierOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidDataset : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Every intermediate of the integer pipeline must stay below this bound; the
// proof backend's scalar field is far larger, so 64-bit signed arithmetic is
// the binding constraint.
inline constexpr std::int64_t kIntegerBudget = std::int64_t(1) << 62;
inline constexpr unsigned kDefaultShift = 24;

struct RealTensor {
    Index rows = 0;
    Index cols = 0;
    std::vector<double> data;  // row-major

    static RealTensor zeros(Index r, Index c) {
        return {r, c, std::vector<double>(static_cast<std::size_t>(r * c), 0.0)};
    }
    double& at(Index r, Index c) { return data[static_cast<std::size_t>(r * cols + c)]; }
    double at(Index r, Index c) const { return data[static_cast<std::size_t>(r * cols + c)]; }
    Index size() const { return rows * cols; }
};

struct QuantParams {
    double scale = 1.0;
    std::int64_t zero_point = 0;
    unsigned bit_width = 8;

    std::int64_t qmax() const { return (std::int64_t(1) << bit_width) - 1; }
    bool operator==(const QuantParams&) const = default;
};

struct QuantizedTensor {
    Index rows = 0;
    Index cols = 0;
    std::vector<std::int64_t> q;  // row-major
    QuantParams params;

    std::int64_t at(Index r, Index c) const { return q[static_cast<std::size_t>(r * cols + c)]; }
    Index size() const { return rows * cols; }
};

// Fixed-point replacement for the float scale ratio: m ~= 2^shift * sW*sX/sY.
struct FixedMultiplier {
    std::int64_t m = 1;
    unsigned shift = kDefaultShift;
    bool operator==(const FixedMultiplier&) const = default;
};

}  // namespace zkpot::quant
