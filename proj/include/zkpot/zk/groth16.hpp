#pragma once

#include "zkpot/common/rng.hpp"
#include "zkpot/ec/pairing.hpp"
#include "zkpot/zk/r1cs.hpp"

namespace zkpot::zk {

// Pairing-based preprocessing SNARK in the usual three-algorithm shape.
// The QAP domain is sized to constraints + public inputs + 1; the extra
// evaluation points pin the public-input polynomials.
struct Groth16Pk {
    std::uint32_t num_vars = 0;
    std::uint32_t num_public = 0;
    std::uint32_t domain_size = 0;
    ec::G1Affine alpha1, beta1, delta1;
    ec::G2Affine beta2, delta2;
    std::vector<ec::G1Affine> a_query;   // [u_i(tau)]_1
    std::vector<ec::G1Affine> b1_query;  // [v_i(tau)]_1
    std::vector<ec::G2Affine> b2_query;  // [v_i(tau)]_2
    std::vector<ec::G1Affine> k_query;   // [(beta u_i + alpha v_i + w_i)/delta]_1, witness vars
    std::vector<ec::G1Affine> h_query;   // [tau^j Z(tau)/delta]_1
};

struct Groth16Vk {
    std::uint32_t num_public = 0;
    ec::G1Affine alpha1;
    ec::G2Affine beta2, gamma2, delta2;
    std::vector<ec::G1Affine> ic;  // [(beta u_i + alpha v_i + w_i)/gamma]_1, public vars
};

struct Groth16Proof {
    ec::G1Affine a;
    ec::G2Affine b;
    ec::G1Affine c;
};

std::pair<Groth16Pk, Groth16Vk> groth16_setup(const R1cs& cs, Rng& rng);

Groth16Proof groth16_prove(const Groth16Pk& pk, const R1cs& cs,
                           std::span<const ec::Fr> assignment, Rng& rng);

// public_inputs excludes the leading constant one.
bool groth16_verify(const Groth16Vk& vk, std::span<const ec::Fr> public_inputs,
                    const Groth16Proof& proof);

}  // namespace zkpot::zk
