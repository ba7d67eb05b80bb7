#include "doctest.h"

#include "vectors/ec_vectors.hpp"
#include "zkpot/common/rng.hpp"
#include "zkpot/ec/fft.hpp"
#include "zkpot/ec/msm.hpp"
#include "zkpot/ec/pairing.hpp"

using namespace zkpot;
using namespace zkpot::ec;

namespace {

template <typename F>
void check_field_vectors(const auto& vectors) {
    for (const auto& row : vectors) {
        auto get = [&](int i) {
            typename F::Limbs limbs;
            for (std::size_t j = 0; j < F::N; ++j) limbs[j] = row[i][j];
            return F::from_raw(limbs);
        };
        F a = get(0), b = get(1);
        CHECK(a * b == get(2));
        CHECK(a + b == get(3));
        CHECK(a - b == get(4));
        CHECK(a.inverse() == get(5));
        CHECK(a * a.inverse() == F::one());
    }
}

Fr fr_rand(Rng& rng) { return Fr::random(rng); }

}  // namespace

TEST_CASE("field arithmetic matches frozen vectors") {
    check_field_vectors<Fp>(testvec::kFpMulVectors);
    check_field_vectors<Fr>(testvec::kFrMulVectors);
}

TEST_CASE("field algebra properties on random values") {
    Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        Fp a = Fp::random(rng), b = Fp::random(rng), c = Fp::random(rng);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a - a == Fp::zero());
        CHECK((a.square()) == a * a);
        if (!a.is_zero()) CHECK(a * a.inverse() == Fp::one());
    }
    Fr x = Fr::from_u64(12345);
    CHECK(x.pow(std::array<std::uint64_t, 1>{3}) == x * x * x);
    CHECK(Fr::from_i64(-5) + Fr::from_u64(5) == Fr::zero());
}

TEST_CASE("field byte round trips") {
    Rng rng(2);
    for (int i = 0; i < 50; ++i) {
        Fr x = Fr::random(rng);
        auto bytes = fr_to_bytes(x);
        auto back = fr_from_bytes(bytes);
        REQUIRE(back.has_value());
        CHECK(*back == x);
    }
    // modulus itself must be rejected
    Bytes mod_bytes(kFrBytes);
    Fr::Limbs raw = FrParams::mod();
    for (std::size_t i = 0; i < 4; ++i)
        for (int b = 0; b < 8; ++b)
            mod_bytes[(3 - i) * 8 + (7 - b)] = static_cast<std::uint8_t>(raw[i] >> (8 * b));
    CHECK(!fr_from_bytes(mod_bytes).has_value());
}

TEST_CASE("g1 generator and scalar multiplication vectors") {
    G1 gen = G1::generator();
    CHECK(gen.to_affine().is_on_curve());
    CHECK(g1_in_subgroup(gen.to_affine()));
    for (std::size_t i = 0; i < testvec::kG1MulScalars.size(); ++i) {
        Fr::Limbs k;
        for (int j = 0; j < 4; ++j) k[j] = testvec::kG1MulScalars[i][j];
        Fp::Limbs xr, yr;
        for (int j = 0; j < 6; ++j) {
            xr[j] = testvec::kG1MulPoints[i][0][j];
            yr[j] = testvec::kG1MulPoints[i][1][j];
        }
        G1Affine expect{Fp::from_raw(xr), Fp::from_raw(yr), false};
        CHECK(gen.mul(Fr::from_raw(k)).to_affine() == expect);
    }
}

TEST_CASE("g2 generator and scalar multiplication vectors") {
    G2 gen = G2::generator();
    CHECK(gen.to_affine().is_on_curve());
    CHECK(g2_in_subgroup(gen.to_affine()));
    for (std::size_t i = 0; i < testvec::kG2MulScalars.size(); ++i) {
        Fr::Limbs k;
        for (int j = 0; j < 4; ++j) k[j] = testvec::kG2MulScalars[i][j];
        Fp::Limbs limbs[4];
        for (int c = 0; c < 4; ++c)
            for (int j = 0; j < 6; ++j) limbs[c][j] = testvec::kG2MulPoints[i][c][j];
        G2Affine expect{{Fp::from_raw(limbs[0]), Fp::from_raw(limbs[1])},
                        {Fp::from_raw(limbs[2]), Fp::from_raw(limbs[3])},
                        false};
        CHECK(gen.mul(Fr::from_raw(k)).to_affine() == expect);
    }
}

TEST_CASE("group laws hold") {
    Rng rng(3);
    G1 g = G1::generator();
    G1 a = g.mul(fr_rand(rng)), b = g.mul(fr_rand(rng));
    CHECK(a.add(b) == b.add(a));
    CHECK(a.add(G1::identity()) == a);
    CHECK(a.add(a.negate()).is_identity());
    CHECK(a.dbl() == a.add(a));
    // mixed addition agrees with full addition
    CHECK(a.add_affine(b.to_affine()) == a.add(b));

    G2 h = G2::generator();
    G2 c = h.mul(fr_rand(rng)), d = h.mul(fr_rand(rng));
    CHECK(c.add(d) == d.add(c));
    CHECK(c.add(c.negate()).is_identity());
    CHECK(c.add_affine(d.to_affine()) == c.add(d));
}

TEST_CASE("point compression round trips and rejects tampering") {
    Rng rng(4);
    for (int i = 0; i < 10; ++i) {
        G1Affine p = G1::generator().mul(fr_rand(rng)).to_affine();
        auto enc = g1_compress(p);
        auto dec = g1_decompress(enc, true);
        REQUIRE(dec.has_value());
        CHECK(*dec == p);

        G2Affine q = G2::generator().mul(fr_rand(rng)).to_affine();
        auto enc2 = g2_compress(q);
        auto dec2 = g2_decompress(enc2, true);
        REQUIRE(dec2.has_value());
        CHECK(*dec2 == q);
    }
    auto enc = g1_compress(G1Affine::identity());
    auto dec = g1_decompress(enc, true);
    REQUIRE(dec.has_value());
    CHECK(dec->infinity);
    // clearing the compression bit must fail
    enc[0] &= 0x7F;
    CHECK(!g1_decompress(enc, true).has_value());
}

TEST_CASE("hash_to_g1 is deterministic and lands in the subgroup") {
    auto tag = to_bytes("ZKPOT-TEST-TAG");
    G1Affine a = hash_to_g1(tag, 0);
    G1Affine b = hash_to_g1(tag, 0);
    G1Affine c = hash_to_g1(tag, 1);
    CHECK(a == b);
    CHECK(!(a == c));
    CHECK(a.is_on_curve());
    CHECK(g1_in_subgroup(a));
    CHECK(g1_in_subgroup(c));
}

TEST_CASE("msm agrees with the serial reference") {
    Rng rng(5);
    for (std::size_t n : {1u, 2u, 31u, 100u}) {
        std::vector<G1Affine> pts;
        std::vector<Fr> scalars;
        G1 g = G1::generator();
        for (std::size_t i = 0; i < n; ++i) {
            pts.push_back(g.mul(fr_rand(rng)).to_affine());
            scalars.push_back(i % 7 == 0 ? Fr::zero() : fr_rand(rng));
        }
        CHECK(msm<G1Traits>(pts, scalars) == msm_serial<G1Traits>(pts, scalars));
    }
    // G2 flavour
    std::vector<G2Affine> pts2;
    std::vector<Fr> sc2;
    for (int i = 0; i < 20; ++i) {
        pts2.push_back(G2::generator().mul(fr_rand(rng)).to_affine());
        sc2.push_back(fr_rand(rng));
    }
    CHECK(msm<G2Traits>(pts2, sc2) == msm_serial<G2Traits>(pts2, sc2));
}

TEST_CASE("fixed-base multiplication agrees with plain scalar multiplication") {
    Rng rng(6);
    G1 base = G1::generator().mul(fr_rand(rng));
    std::vector<Fr> scalars;
    for (int i = 0; i < 40; ++i) scalars.push_back(fr_rand(rng));
    scalars.push_back(Fr::zero());
    scalars.push_back(Fr::one());
    auto out = fixed_base_mul<G1Traits>(base, scalars);
    for (std::size_t i = 0; i < scalars.size(); ++i) CHECK(out[i] == base.mul(scalars[i]));
}

TEST_CASE("fft matches the naive dft and inverts") {
    Rng rng(7);
    for (std::size_t n : {1u, 2u, 8u, 64u}) {
        FftDomain dom(n);
        std::vector<Fr> a(dom.size());
        for (auto& x : a) x = fr_rand(rng);
        std::vector<Fr> expect = naive_dft(a, false);
        std::vector<Fr> got = a;
        dom.fft(got);
        CHECK(got == expect);
        dom.ifft(got);
        CHECK(got == a);

        std::vector<Fr> coset = a;
        dom.coset_fft(coset);
        dom.coset_ifft(coset);
        CHECK(coset == a);
    }
}

TEST_CASE("fft roots have the right order") {
    FftDomain dom(16);
    Fr w = dom.group_gen();
    Fr acc = Fr::one();
    for (int i = 0; i < 16; ++i) acc *= w;
    CHECK(acc == Fr::one());
    Fr half = Fr::one();
    for (int i = 0; i < 8; ++i) half *= w;
    CHECK(half == -Fr::one());
    CHECK(!dom.coset_vanishing_value().is_zero());
}

TEST_CASE("pairing is bilinear and non-degenerate") {
    Rng rng(8);
    G1Affine p = G1::generator().to_affine();
    G2Affine q = G2::generator().to_affine();

    Fp12 e = pairing(p, q);
    CHECK(!(e == Fp12::one()));
    // e has order r: e^r == 1
    CHECK(e.pow(std::span<const std::uint64_t>(consts::kR.data(), 4)) == Fp12::one());

    Fr a = fr_rand(rng), b = fr_rand(rng);
    G1Affine ap = G1::generator().mul(a).to_affine();
    G2Affine bq = G2::generator().mul(b).to_affine();

    Fp12 lhs = pairing(ap, bq);
    auto ab = (a * b).to_raw();
    Fp12 rhs = e.pow(std::span<const std::uint64_t>(ab.data(), 4));
    CHECK(lhs == rhs);

    // moving the scalar between slots
    CHECK(pairing(ap, q) == pairing(p, G2::generator().mul(a).to_affine()));
    // identity inputs
    CHECK(pairing(G1Affine::identity(), q) == Fp12::one());

    // product-of-pairings via shared final exponentiation
    Fp12 prod = final_exponentiation(miller_loop(ap, q) * miller_loop(ap.negate(), q));
    CHECK(prod == Fp12::one());
}
