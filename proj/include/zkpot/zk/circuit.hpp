#pragma once

#include "zkpot/zk/r1cs.hpp"
#include "zkpot/zk/statement.hpp"

namespace zkpot::zk {

// Public input order (after the constant one):
//   1: model digest, 2: dataset digest, 3: labels digest, 4: claimed accuracy
inline constexpr std::uint32_t kNumPublicInputs = 4;

// The constraint structure depends only on (shape, config) -- never on the
// parameter values -- which is what makes the proving keys model-independent.
R1cs synthesize_circuit(const ModelShape& shape, const CircuitConfig& cfg);

// Full assignment z = (1, publics, witness) for the same traversal order.
// Does not require the witness to satisfy the system (tampered witnesses
// produce unsatisfying assignments, which callers detect via R1cs::satisfied).
std::vector<ec::Fr> assign_witness(const ModelShape& shape, const CircuitConfig& cfg,
                                   const Statement& statement, const Witness& witness);

struct SynthesizedSystem {
    R1cs cs;
    std::vector<ec::Fr> assignment;
    bool satisfied() const { return cs.satisfied(assignment); }
};

// Builds the system for the statement's shape/sample count and assigns the
// witness in one go.
SynthesizedSystem synthesize(const Statement& statement, const Witness& witness);

void validate_shape(const ModelShape& shape, const CircuitConfig& cfg);

}  // namespace zkpot::zk
