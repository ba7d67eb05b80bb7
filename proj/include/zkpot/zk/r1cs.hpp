#pragma once

#include <span>
#include <vector>

#include "zkpot/ec/fields.hpp"

namespace zkpot::zk {

struct Term {
    std::uint32_t var = 0;
    ec::Fr coeff;
};
using LinComb = std::vector<Term>;

// Rank-1 constraint system over the proof field: (A.z)(B.z) = (C.z) with
// z = (1, public inputs, witness).
struct R1cs {
    struct Constraint {
        LinComb a, b, c;
    };

    std::uint32_t num_vars = 1;  // variable 0 is the constant one
    std::uint32_t num_public = 0;
    std::vector<Constraint> constraints;

    static ec::Fr eval(const LinComb& lc, std::span<const ec::Fr> z) {
        ec::Fr acc = ec::Fr::zero();
        for (const Term& t : lc) acc += t.coeff * z[t.var];
        return acc;
    }

    bool satisfied(std::span<const ec::Fr> z, std::size_t* first_failing = nullptr) const {
        if (z.size() != num_vars) {
            if (first_failing) *first_failing = 0;
            return false;
        }
        for (std::size_t i = 0; i < constraints.size(); ++i) {
            const auto& cst = constraints[i];
            if (eval(cst.a, z) * eval(cst.b, z) != eval(cst.c, z)) {
                if (first_failing) *first_failing = i;
                return false;
            }
        }
        return true;
    }
};

}  // namespace zkpot::zk
