#include "zkpot/common/sha256.hpp"
#include "zkpot/zk/backend.hpp"

namespace zkpot::zk {

namespace {

// Re-execution backend: the "proof" is the opening itself, and verification
// replays quantized inference on the publisher's dataset. Accept/reject
// behaviour matches the snark backend on every wire-level vector, at a tiny
// fraction of the cost, which is what large consensus simulations run on.
class OracleBackend final : public Backend {
public:
    std::string name() const override { return "oracle"; }
    std::uint8_t tag() const override { return kBackendOracle; }

    std::pair<Bytes, Bytes> setup(const ModelShape& shape, const CircuitConfig& cfg,
                                  const SetupOptions& opts) override {
        validate_shape(shape, cfg);
        ByteWriter w;
        write_shape_config(w, shape, cfg);
        w.u32(opts.security_param);
        Bytes payload = w.take();
        Bytes pk = wrap_container(kBackendOracle, kKindProvingKey, payload);
        Bytes vk = wrap_container(kBackendOracle, kKindVerifyingKey, payload);
        return {std::move(pk), std::move(vk)};
    }

    std::pair<std::uint32_t, Bytes> prove(const Bytes& pk, const Statement& statement,
                                          const Witness& witness, Rng&) override {
        auto view = parse_container(pk);
        if (!view || view->backend != kBackendOracle || view->kind != kKindProvingKey)
            throw InvalidKey("oracle: bad proving key");
        ByteReader r(view->payload);
        auto [shape, cfg] = read_shape_config(r);
        if (!(shape_of(witness.model) == shape))
            throw UnsatisfiableWitness("oracle: witness shape does not match key");
        if (statement.n_samples != cfg.n_samples)
            throw UnsatisfiableWitness("oracle: sample count mismatch");

        // completeness gate: the witness must actually satisfy the statement
        std::uint32_t acc = 0;
        for (auto b : witness.correct_bits) acc += b;
        if (acc != statement.claimed_acc)
            throw UnsatisfiableWitness("oracle: claimed accuracy does not match witness");
        if (model_digest(witness.model, cfg.shift) != statement.model_digest)
            throw UnsatisfiableWitness("oracle: model digest mismatch");
        for (const auto& trace : witness.traces)
            if (!quant::validate_trace(witness.model, trace))
                throw UnsatisfiableWitness("oracle: invalid trace");

        ByteWriter w;
        w.var_bytes(quant::serialize_model(witness.model));
        w.raw(ec::fr_to_bytes(witness.opening_r));
        return {acc, wrap_container(kBackendOracle, kKindProof, w.take())};
    }

    bool verify(const Bytes& vk, const Statement& statement, const Bytes& proof,
                const VerifyContext& ctx) override {
        auto view = parse_container(vk);
        if (!view || view->backend != kBackendOracle || view->kind != kKindVerifyingKey)
            throw InvalidKey("oracle: bad verifying key");
        if (!ctx.samples || !ctx.commit_key) throw InvalidKey("oracle: context incomplete");
        try {
            ByteReader kr(view->payload);
            auto [shape, cfg] = read_shape_config(kr);
            if (statement.n_samples != cfg.n_samples || !(statement.shape == shape)) return false;
            if (ctx.labels.size() != cfg.n_samples ||
                ctx.samples->rows != static_cast<quant::Index>(cfg.n_samples))
                return false;

            auto pview = parse_container(proof);
            if (!pview || pview->backend != kBackendOracle || pview->kind != kKindProof)
                return false;
            ByteReader pr(pview->payload);
            Bytes model_bytes = pr.var_bytes();
            auto r_bytes = pr.raw(ec::kFrBytes);
            pr.expect_done();
            auto opening_r = ec::fr_from_bytes(r_bytes);
            if (!opening_r) return false;

            quant::QuantizedModel model = quant::deserialize_model(model_bytes);
            if (!(shape_of(model) == shape)) return false;
            quant::validate_model_budget(model, cfg.shift);

            // binding: Pedersen point and algebraic digest over the same bytes
            commit::Commitment cm =
                commit::commit(*ctx.commit_key, model_bytes, *opening_r);
            if (cm.to_bytes() != statement.commitment) return false;
            if (model_digest(model, cfg.shift) != statement.model_digest) return false;

            // dataset binding
            if (sha256(serialize_dataset(*ctx.samples)) != statement.dataset_sha) return false;
            if (sha256(serialize_labels(ctx.labels)) != statement.labels_sha) return false;
            if (dataset_algebraic_digest(*ctx.samples) != statement.dataset_digest) return false;
            if (labels_algebraic_digest(ctx.labels) != statement.labels_digest) return false;

            // the claim itself
            std::int64_t acc = quant::accuracy(model, *ctx.samples, ctx.labels);
            return acc == static_cast<std::int64_t>(statement.claimed_acc);
        } catch (const InvalidKey&) {
            throw;
        } catch (...) {
            return false;
        }
    }
};

}  // namespace

std::unique_ptr<Backend> make_oracle_backend() { return std::make_unique<OracleBackend>(); }

}  // namespace zkpot::zk
