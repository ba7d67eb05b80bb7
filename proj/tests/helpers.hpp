#pragma once

// Shared test fixtures: a small quantized model with its commitment,
// statement, witness and proof artifacts.

#include "zkpot/consensus/consensus.hpp"

namespace zkpot::testing {

inline quant::RealTensor random_tensor(Rng& rng, quant::Index r, quant::Index c, double lo,
                                       double hi) {
    quant::RealTensor t = quant::RealTensor::zeros(r, c);
    for (auto& v : t.data) v = lo + (hi - lo) * rng.unit();
    return t;
}

struct ProverFixture {
    quant::QuantizedModel model;
    Bytes model_bytes;
    ec::Fr opening_r;
    commit::Commitment cm;
    zk::Witness witness;
    zk::Statement statement;
    std::uint32_t true_acc = 0;
};

// D and T are shared by all provers in a task.
struct TaskFixture {
    quant::RealTensor samples;
    std::vector<std::int32_t> labels;
    commit::CommitKey key;
    zk::ModelShape shape;
    zk::CircuitConfig cfg;

    zk::VerifyContext ctx() const { return {&samples, labels, &key}; }
};

inline TaskFixture make_task(std::uint64_t seed, std::vector<quant::Index> dims,
                             std::uint32_t n_samples, std::size_t key_capacity = 128) {
    Rng rng(Rng(seed).derive(0).seed());
    TaskFixture t{.samples = random_tensor(rng, n_samples, dims.front(), 0.0, 1.0),
                  .labels = {},
                  .key = commit::CommitKey::create(key_capacity),
                  .shape = zk::ModelShape{dims},
                  .cfg = {}};
    t.labels.resize(n_samples);
    for (auto& l : t.labels) l = static_cast<std::int32_t>(rng.below(dims.back()));
    t.cfg.n_samples = n_samples;
    return t;
}

inline ProverFixture make_prover(const TaskFixture& task, std::uint64_t seed) {
    Rng rng(Rng(seed).derive(1).seed());
    const auto& dims = task.shape.dims;
    std::vector<quant::RealTensor> ws, bs;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        ws.push_back(random_tensor(rng, dims[l + 1], dims[l], -0.6, 0.6));
        bs.push_back(random_tensor(rng, dims[l + 1], 1, -0.1, 0.1));
    }
    ProverFixture p;
    p.model = quant::build_quantized_model(ws, bs, zk::kCanonicalInputParams);
    p.model_bytes = quant::serialize_model(p.model);
    p.opening_r = ec::Fr::random(rng);
    p.cm = commit::commit(task.key, p.model_bytes, p.opening_r);
    p.witness = zk::build_witness(p.model, p.opening_r, task.samples, task.labels);
    for (auto b : p.witness.correct_bits) p.true_acc += b;
    p.statement = zk::make_statement(p.cm.to_bytes(), zk::model_digest(p.model), task.samples,
                                     task.labels, p.true_acc, task.shape);
    return p;
}

}  // namespace zkpot::testing
