#pragma once

#include "zkpot/ec/curve.hpp"

namespace zkpot::ec {

// Optimal ate pairing e: G1 x G2 -> Fp12 (r-th roots of unity subgroup).
// Returns Fp12::one() when either input is the identity.
Fp12 miller_loop(const G1Affine& p, const G2Affine& q);
Fp12 final_exponentiation(const Fp12& f);
Fp12 pairing(const G1Affine& p, const G2Affine& q);

// final_exponentiation(prod of miller loops) == product of pairings; used to
// batch the proof verification equation into a single final exponentiation.
}  // namespace zkpot::ec
