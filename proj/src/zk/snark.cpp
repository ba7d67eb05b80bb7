#include <map>
#include <mutex>

#include "zkpot/common/sha256.hpp"
#include "zkpot/zk/backend.hpp"
#include "zkpot/zk/groth16.hpp"

#include <sodium.h>

namespace zkpot::zk {

namespace {

void write_g1(ByteWriter& w, const ec::G1Affine& p) {
    std::uint8_t buf[2 * ec::kFpBytes] = {0};
    if (!p.infinity) {
        p.x.to_be_bytes(buf);
        p.y.to_be_bytes(buf + ec::kFpBytes);
    }
    w.u8(p.infinity ? 1 : 0);
    w.raw(std::span<const std::uint8_t>(buf, sizeof buf));
}

ec::G1Affine read_g1(ByteReader& r) {
    bool inf = r.u8() != 0;
    auto bytes = r.raw(2 * ec::kFpBytes);
    if (inf) return ec::G1Affine::identity();
    auto x = ec::Fp::from_be_bytes(bytes.data());
    auto y = ec::Fp::from_be_bytes(bytes.data() + ec::kFpBytes);
    if (!x || !y) throw DeserializeError("bad G1 point");
    return {*x, *y, false};
}

void write_g2(ByteWriter& w, const ec::G2Affine& p) {
    std::uint8_t buf[4 * ec::kFpBytes] = {0};
    if (!p.infinity) {
        p.x.c0.to_be_bytes(buf);
        p.x.c1.to_be_bytes(buf + ec::kFpBytes);
        p.y.c0.to_be_bytes(buf + 2 * ec::kFpBytes);
        p.y.c1.to_be_bytes(buf + 3 * ec::kFpBytes);
    }
    w.u8(p.infinity ? 1 : 0);
    w.raw(std::span<const std::uint8_t>(buf, sizeof buf));
}

ec::G2Affine read_g2(ByteReader& r) {
    bool inf = r.u8() != 0;
    auto bytes = r.raw(4 * ec::kFpBytes);
    if (inf) return ec::G2Affine::identity();
    auto xc0 = ec::Fp::from_be_bytes(bytes.data());
    auto xc1 = ec::Fp::from_be_bytes(bytes.data() + ec::kFpBytes);
    auto yc0 = ec::Fp::from_be_bytes(bytes.data() + 2 * ec::kFpBytes);
    auto yc1 = ec::Fp::from_be_bytes(bytes.data() + 3 * ec::kFpBytes);
    if (!xc0 || !xc1 || !yc0 || !yc1) throw DeserializeError("bad G2 point");
    return {{*xc0, *xc1}, {*yc0, *yc1}, false};
}

Rng make_rng(const std::optional<std::uint64_t>& seed) {
    if (seed) return Rng(*seed);
    std::uint64_t fresh;
    randombytes_buf(&fresh, sizeof fresh);
    return Rng(fresh);
}

struct ParsedVk {
    ModelShape shape;
    CircuitConfig cfg;
    Groth16Vk vk;
    ec::Fp12 alpha_beta;  // cached pairing for the verification equation
};

ParsedVk parse_vk(std::span<const std::uint8_t> payload) {
    ByteReader r(payload);
    ParsedVk out;
    std::tie(out.shape, out.cfg) = read_shape_config(r);
    out.vk.num_public = r.u32();
    out.vk.alpha1 = read_g1(r);
    out.vk.beta2 = read_g2(r);
    out.vk.gamma2 = read_g2(r);
    out.vk.delta2 = read_g2(r);
    std::uint32_t n_ic = r.u32();
    if (n_ic != out.vk.num_public + 1 || n_ic > 1024) throw DeserializeError("bad ic size");
    out.vk.ic.resize(n_ic);
    for (auto& p : out.vk.ic) p = read_g1(r);
    r.expect_done();
    for (const auto& p : out.vk.ic)
        if (!p.is_on_curve()) throw DeserializeError("ic point off curve");
    if (!out.vk.alpha1.is_on_curve() || !out.vk.beta2.is_on_curve() ||
        !out.vk.gamma2.is_on_curve() || !out.vk.delta2.is_on_curve())
        throw DeserializeError("vk point off curve");
    out.alpha_beta = ec::pairing(out.vk.alpha1, out.vk.beta2);
    return out;
}

// vk parsing includes a pairing; cache by content hash since consensus nodes
// verify many transactions against the same key.
const ParsedVk& cached_vk(std::span<const std::uint8_t> payload) {
    static std::mutex mu;
    static std::map<Digest32, ParsedVk> cache;
    Digest32 key = sha256(payload);
    std::scoped_lock lock(mu);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, parse_vk(payload)).first;
    return it->second;
}

class SnarkBackend final : public Backend {
public:
    std::string name() const override { return "snark"; }
    std::uint8_t tag() const override { return kBackendSnark; }

    std::pair<Bytes, Bytes> setup(const ModelShape& shape, const CircuitConfig& cfg,
                                  const SetupOptions& opts) override {
        R1cs cs = synthesize_circuit(shape, cfg);
        Rng rng = make_rng(opts.seed);
        auto [pk, vk] = groth16_setup(cs, rng);

        ByteWriter pw;
        write_shape_config(pw, shape, cfg);
        pw.u32(pk.num_vars);
        pw.u32(pk.num_public);
        pw.u32(pk.domain_size);
        write_g1(pw, pk.alpha1);
        write_g1(pw, pk.beta1);
        write_g1(pw, pk.delta1);
        write_g2(pw, pk.beta2);
        write_g2(pw, pk.delta2);
        auto write_g1_vec = [&](const std::vector<ec::G1Affine>& v) {
            pw.u32(static_cast<std::uint32_t>(v.size()));
            for (const auto& p : v) write_g1(pw, p);
        };
        write_g1_vec(pk.a_query);
        write_g1_vec(pk.b1_query);
        pw.u32(static_cast<std::uint32_t>(pk.b2_query.size()));
        for (const auto& p : pk.b2_query) write_g2(pw, p);
        write_g1_vec(pk.k_query);
        write_g1_vec(pk.h_query);

        ByteWriter vw;
        write_shape_config(vw, shape, cfg);
        vw.u32(vk.num_public);
        write_g1(vw, vk.alpha1);
        write_g2(vw, vk.beta2);
        write_g2(vw, vk.gamma2);
        write_g2(vw, vk.delta2);
        vw.u32(static_cast<std::uint32_t>(vk.ic.size()));
        for (const auto& p : vk.ic) write_g1(vw, p);

        return {wrap_container(kBackendSnark, kKindProvingKey, pw.take()),
                wrap_container(kBackendSnark, kKindVerifyingKey, vw.take())};
    }

    std::pair<std::uint32_t, Bytes> prove(const Bytes& pk_bytes, const Statement& statement,
                                          const Witness& witness, Rng& rng) override {
        auto view = parse_container(pk_bytes);
        if (!view || view->backend != kBackendSnark || view->kind != kKindProvingKey)
            throw InvalidKey("snark: bad proving key");
        ByteReader r(view->payload);
        auto [shape, cfg] = read_shape_config(r);
        Groth16Pk pk;
        pk.num_vars = r.u32();
        pk.num_public = r.u32();
        pk.domain_size = r.u32();
        pk.alpha1 = read_g1(r);
        pk.beta1 = read_g1(r);
        pk.delta1 = read_g1(r);
        pk.beta2 = read_g2(r);
        pk.delta2 = read_g2(r);
        auto read_g1_vec = [&](std::vector<ec::G1Affine>& v) {
            v.resize(r.u32());
            for (auto& p : v) p = read_g1(r);
        };
        read_g1_vec(pk.a_query);
        read_g1_vec(pk.b1_query);
        pk.b2_query.resize(r.u32());
        for (auto& p : pk.b2_query) p = read_g2(r);
        read_g1_vec(pk.k_query);
        read_g1_vec(pk.h_query);
        r.expect_done();

        if (statement.n_samples != cfg.n_samples)
            throw UnsatisfiableWitness("snark: sample count mismatch");
        R1cs cs = synthesize_circuit(shape, cfg);
        std::vector<ec::Fr> assignment = assign_witness(shape, cfg, statement, witness);
        std::size_t failing = 0;
        if (!cs.satisfied(assignment, &failing))
            throw UnsatisfiableWitness("snark: witness does not satisfy constraint " +
                                       std::to_string(failing));

        Groth16Proof proof = groth16_prove(pk, cs, assignment, rng);
        ByteWriter w;
        auto a = ec::g1_compress(proof.a);
        auto b = ec::g2_compress(proof.b);
        auto c = ec::g1_compress(proof.c);
        w.raw(a);
        w.raw(b);
        w.raw(c);
        return {statement.claimed_acc, wrap_container(kBackendSnark, kKindProof, w.take())};
    }

    bool verify(const Bytes& vk_bytes, const Statement& statement, const Bytes& proof_bytes,
                const VerifyContext&) override {
        auto view = parse_container(vk_bytes);
        if (!view || view->backend != kBackendSnark || view->kind != kKindVerifyingKey)
            throw InvalidKey("snark: bad verifying key");
        const ParsedVk* vk = nullptr;
        try {
            vk = &cached_vk(view->payload);
        } catch (...) {
            throw InvalidKey("snark: malformed verifying key");
        }
        try {
            if (statement.n_samples != vk->cfg.n_samples || !(statement.shape == vk->shape))
                return false;
            auto pview = parse_container(proof_bytes);
            if (!pview || pview->backend != kBackendSnark || pview->kind != kKindProof)
                return false;
            if (pview->payload.size() !=
                2 * ec::kG1CompressedBytes + ec::kG2CompressedBytes)
                return false;
            auto a = ec::g1_decompress(pview->payload.subspan(0, 48), true);
            auto b = ec::g2_decompress(pview->payload.subspan(48, 96), true);
            auto c = ec::g1_decompress(pview->payload.subspan(144, 48), true);
            if (!a || !b || !c) return false;

            std::array<ec::Fr, kNumPublicInputs> publics = {
                statement.model_digest, statement.dataset_digest, statement.labels_digest,
                ec::Fr::from_u64(statement.claimed_acc)};

            // inline the cached-e(alpha,beta) verification equation
            ec::G1 acc = ec::G1::from_affine(vk->vk.ic[0]);
            for (std::size_t i = 0; i < publics.size(); ++i)
                acc = acc.add(ec::G1::from_affine(vk->vk.ic[i + 1]).mul(publics[i]));
            ec::Fp12 folded = ec::final_exponentiation(
                ec::miller_loop(*a, *b) *
                ec::miller_loop(acc.to_affine().negate(), vk->vk.gamma2) *
                ec::miller_loop(c->negate(), vk->vk.delta2));
            return folded == vk->alpha_beta;
        } catch (...) {
            return false;
        }
    }
};

}  // namespace

std::unique_ptr<Backend> make_snark_backend() { return std::make_unique<SnarkBackend>(); }

}  // namespace zkpot::zk
