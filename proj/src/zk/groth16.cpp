#include "zkpot/zk/groth16.hpp"

#include "zkpot/ec/fft.hpp"
#include "zkpot/ec/msm.hpp"
#include "zkpot/zk/statement.hpp"

namespace zkpot::zk {

using ec::Fr;
using ec::G1;
using ec::G1Affine;
using ec::G2;
using ec::G2Affine;

namespace {

Fr nonzero_random(Rng& rng) {
    for (;;) {
        Fr v = Fr::random(rng);
        if (!v.is_zero()) return v;
    }
}

// Lagrange basis evaluations L_j(tau) over the radix-2 domain:
// L_j(tau) = (tau^d - 1) * w^j / (d * (tau - w^j)).
std::vector<Fr> lagrange_at(const ec::FftDomain& dom, const Fr& tau) {
    const std::size_t d = dom.size();
    std::array<std::uint64_t, 1> dexp{d};
    Fr zt = tau.pow(dexp) - Fr::one();
    Fr winv = Fr::from_u64(d).inverse();

    std::vector<Fr> denoms(d);
    Fr wj = Fr::one();
    for (std::size_t j = 0; j < d; ++j) {
        denoms[j] = tau - wj;
        wj *= dom.group_gen();
    }
    ec::fr_batch_inverse(denoms);
    std::vector<Fr> out(d);
    wj = Fr::one();
    Fr scale = zt * winv;
    for (std::size_t j = 0; j < d; ++j) {
        out[j] = scale * wj * denoms[j];
        wj *= dom.group_gen();
    }
    return out;
}

}  // namespace

std::pair<Groth16Pk, Groth16Vk> groth16_setup(const R1cs& cs, Rng& rng) {
    const std::uint32_t m = cs.num_vars;
    const std::uint32_t ell = cs.num_public;
    const std::size_t n = cs.constraints.size();
    ec::FftDomain dom(n + ell + 1);
    const std::size_t d = dom.size();

    const Fr tau = nonzero_random(rng);
    const Fr alpha = nonzero_random(rng);
    const Fr beta = nonzero_random(rng);
    const Fr gamma = nonzero_random(rng);
    const Fr delta = nonzero_random(rng);

    std::vector<Fr> lag = lagrange_at(dom, tau);

    // per-variable QAP evaluations at tau
    std::vector<Fr> u(m, Fr::zero()), v(m, Fr::zero()), w(m, Fr::zero());
    for (std::size_t j = 0; j < n; ++j) {
        const auto& cst = cs.constraints[j];
        for (const Term& t : cst.a) u[t.var] += t.coeff * lag[j];
        for (const Term& t : cst.b) v[t.var] += t.coeff * lag[j];
        for (const Term& t : cst.c) w[t.var] += t.coeff * lag[j];
    }
    // input consistency rows at domain points n..n+ell
    for (std::uint32_t i = 0; i <= ell; ++i) u[i] += lag[n + i];

    const Fr gamma_inv = gamma.inverse();
    const Fr delta_inv = delta.inverse();

    std::vector<Fr> k_scalars(m - ell - 1);
    for (std::uint32_t i = ell + 1; i < m; ++i) {
        k_scalars[i - ell - 1] = (beta * u[i] + alpha * v[i] + w[i]) * delta_inv;
    }
    std::vector<Fr> ic_scalars(ell + 1);
    for (std::uint32_t i = 0; i <= ell; ++i) {
        ic_scalars[i] = (beta * u[i] + alpha * v[i] + w[i]) * gamma_inv;
    }

    // h query scalars: tau^j * Z(tau) / delta
    std::array<std::uint64_t, 1> dexp{d};
    Fr zt = tau.pow(dexp) - Fr::one();
    std::vector<Fr> h_scalars(d - 1);
    Fr tpow = zt * delta_inv;
    for (std::size_t j = 0; j + 1 < d; ++j) {
        h_scalars[j] = tpow;
        tpow *= tau;
    }

    const G1 g1 = G1::generator();
    const G2 g2 = G2::generator();

    Groth16Pk pk;
    pk.num_vars = m;
    pk.num_public = ell;
    pk.domain_size = static_cast<std::uint32_t>(d);
    pk.alpha1 = g1.mul(alpha).to_affine();
    pk.beta1 = g1.mul(beta).to_affine();
    pk.delta1 = g1.mul(delta).to_affine();
    pk.beta2 = g2.mul(beta).to_affine();
    pk.delta2 = g2.mul(delta).to_affine();
    pk.a_query = ec::g1_batch_to_affine(ec::fixed_base_mul<ec::G1Traits>(g1, u));
    pk.b1_query = ec::g1_batch_to_affine(ec::fixed_base_mul<ec::G1Traits>(g1, v));
    pk.b2_query = ec::g2_batch_to_affine(ec::fixed_base_mul<ec::G2Traits>(g2, v));
    pk.k_query = ec::g1_batch_to_affine(ec::fixed_base_mul<ec::G1Traits>(g1, k_scalars));
    pk.h_query = ec::g1_batch_to_affine(ec::fixed_base_mul<ec::G1Traits>(g1, h_scalars));

    Groth16Vk vk;
    vk.num_public = ell;
    vk.alpha1 = pk.alpha1;
    vk.beta2 = pk.beta2;
    vk.gamma2 = g2.mul(gamma).to_affine();
    vk.delta2 = pk.delta2;
    vk.ic = ec::g1_batch_to_affine(ec::fixed_base_mul<ec::G1Traits>(g1, ic_scalars));
    return {std::move(pk), std::move(vk)};
}

Groth16Proof groth16_prove(const Groth16Pk& pk, const R1cs& cs,
                           std::span<const Fr> assignment, Rng& rng) {
    if (assignment.size() != pk.num_vars || cs.num_vars != pk.num_vars)
        throw UnsatisfiableWitness("assignment does not match proving key");
    const std::size_t n = cs.constraints.size();
    const std::uint32_t ell = pk.num_public;
    ec::FftDomain dom(pk.domain_size);

    // evaluations of A(x), B(x), C(x) over the domain
    std::vector<Fr> a_ev(dom.size(), Fr::zero());
    std::vector<Fr> b_ev(dom.size(), Fr::zero());
    std::vector<Fr> c_ev(dom.size(), Fr::zero());
#pragma omp parallel for schedule(static)
    for (long long j = 0; j < static_cast<long long>(n); ++j) {
        const auto& cst = cs.constraints[static_cast<std::size_t>(j)];
        a_ev[static_cast<std::size_t>(j)] = R1cs::eval(cst.a, assignment);
        b_ev[static_cast<std::size_t>(j)] = R1cs::eval(cst.b, assignment);
        c_ev[static_cast<std::size_t>(j)] = R1cs::eval(cst.c, assignment);
    }
    for (std::uint32_t i = 0; i <= ell; ++i) a_ev[n + i] = assignment[i];

    dom.ifft(a_ev);
    dom.ifft(b_ev);
    dom.ifft(c_ev);
    dom.coset_fft(a_ev);
    dom.coset_fft(b_ev);
    dom.coset_fft(c_ev);
    Fr zinv = dom.coset_vanishing_value().inverse();
    std::vector<Fr>& h_ev = a_ev;
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(dom.size()); ++i) {
        auto idx = static_cast<std::size_t>(i);
        h_ev[idx] = (a_ev[idx] * b_ev[idx] - c_ev[idx]) * zinv;
    }
    dom.coset_ifft(h_ev);
    // deg(h) <= d-2: drop the top coefficient (zero for satisfying witnesses)
    std::span<const Fr> h_coeffs(h_ev.data(), dom.size() - 1);

    const Fr r = nonzero_random(rng);
    const Fr s = nonzero_random(rng);

    G1 a_acc = ec::msm<ec::G1Traits>(pk.a_query, assignment);
    a_acc = a_acc.add(G1::from_affine(pk.alpha1));
    a_acc = a_acc.add(G1::from_affine(pk.delta1).mul(r));

    G1 b1_acc = ec::msm<ec::G1Traits>(pk.b1_query, assignment);
    b1_acc = b1_acc.add(G1::from_affine(pk.beta1));
    b1_acc = b1_acc.add(G1::from_affine(pk.delta1).mul(s));

    G2 b2_acc = ec::msm<ec::G2Traits>(pk.b2_query, assignment);
    b2_acc = b2_acc.add(G2::from_affine(pk.beta2));
    b2_acc = b2_acc.add(G2::from_affine(pk.delta2).mul(s));

    std::span<const Fr> wit(assignment.data() + ell + 1, pk.num_vars - ell - 1);
    G1 c_acc = ec::msm<ec::G1Traits>(pk.k_query, wit);
    c_acc = c_acc.add(ec::msm<ec::G1Traits>(
        std::span<const G1Affine>(pk.h_query.data(), h_coeffs.size()), h_coeffs));
    c_acc = c_acc.add(a_acc.mul(s));
    c_acc = c_acc.add(b1_acc.mul(r));
    c_acc = c_acc.add(G1::from_affine(pk.delta1).mul(r * s).negate());

    return {a_acc.to_affine(), b2_acc.to_affine(), c_acc.to_affine()};
}

bool groth16_verify(const Groth16Vk& vk, std::span<const Fr> public_inputs,
                    const Groth16Proof& proof) {
    if (public_inputs.size() != vk.num_public) return false;
    if (proof.a.infinity || proof.b.infinity || proof.c.infinity) return false;
    if (!proof.a.is_on_curve() || !proof.b.is_on_curve() || !proof.c.is_on_curve()) return false;
    if (!ec::g1_in_subgroup(proof.a) || !ec::g2_in_subgroup(proof.b) ||
        !ec::g1_in_subgroup(proof.c))
        return false;

    G1 acc = G1::from_affine(vk.ic[0]);
    for (std::size_t i = 0; i < public_inputs.size(); ++i) {
        acc = acc.add(G1::from_affine(vk.ic[i + 1]).mul(public_inputs[i]));
    }

    // e(A,B) = e(alpha,beta) * e(acc,gamma) * e(C,delta)
    ec::Fp12 lhs = ec::miller_loop(proof.a, proof.b);
    ec::Fp12 rhs1 = ec::miller_loop(acc.to_affine().negate(), vk.gamma2);
    ec::Fp12 rhs2 = ec::miller_loop(proof.c.negate(), vk.delta2);
    ec::Fp12 folded = ec::final_exponentiation(lhs * rhs1 * rhs2);
    return folded == ec::pairing(vk.alpha1, vk.beta2);
}

}  // namespace zkpot::zk
