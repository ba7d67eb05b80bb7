#pragma once

#include <memory>

#include "zkpot/commit/pedersen.hpp"
#include "zkpot/common/serial.hpp"
#include "zkpot/zk/circuit.hpp"

namespace zkpot::zk {

struct SetupOptions {
    std::optional<std::uint64_t> seed;  // deterministic mode when set
    unsigned security_param = 128;
};

// Out-of-band data a verifier holds: the publisher-dispatched test set and the
// shared commitment key. The snark backend ignores the dataset (it is bound
// through the statement digests); the oracle backend re-executes on it.
struct VerifyContext {
    const quant::RealTensor* samples = nullptr;
    std::span<const std::int32_t> labels;
    const commit::CommitKey* commit_key = nullptr;
};

inline constexpr std::uint8_t kBackendOracle = 0;
inline constexpr std::uint8_t kBackendSnark = 1;
inline constexpr std::uint8_t kKindProvingKey = 0;
inline constexpr std::uint8_t kKindVerifyingKey = 1;
inline constexpr std::uint8_t kKindProof = 2;

class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string name() const = 0;
    virtual std::uint8_t tag() const = 0;

    // Keys depend only on the circuit shape/config and the seed; never on
    // model parameter values.
    virtual std::pair<Bytes, Bytes> setup(const ModelShape& shape, const CircuitConfig& cfg,
                                          const SetupOptions& opts) = 0;

    // Returns (claimed accuracy, serialized proof); rejects witnesses that do
    // not satisfy the statement with UnsatisfiableWitness.
    virtual std::pair<std::uint32_t, Bytes> prove(const Bytes& pk, const Statement& statement,
                                                  const Witness& witness, Rng& rng) = 0;

    // Accept/reject. Throws InvalidKey for malformed keys; malformed proofs
    // are rejections, not errors.
    virtual bool verify(const Bytes& vk, const Statement& statement, const Bytes& proof,
                        const VerifyContext& ctx) = 0;
};

std::unique_ptr<Backend> make_backend(std::string_view name);

// Shared "ZKPOTPRF" container helpers.
Bytes wrap_container(std::uint8_t backend, std::uint8_t kind, Bytes payload);
struct ContainerView {
    std::uint16_t version;
    std::uint8_t backend;
    std::uint8_t kind;
    std::span<const std::uint8_t> payload;
};
std::optional<ContainerView> parse_container(std::span<const std::uint8_t> bytes);

void write_shape_config(ByteWriter& w, const ModelShape& shape, const CircuitConfig& cfg);
std::pair<ModelShape, CircuitConfig> read_shape_config(ByteReader& r);

}  // namespace zkpot::zk
