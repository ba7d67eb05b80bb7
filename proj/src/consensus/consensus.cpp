#include "zkpot/consensus/consensus.hpp"

#include <algorithm>

#include "zkpot/common/serial.hpp"

namespace zkpot::consensus {

using ledger::Transaction;

bool TransactionPool::collect(const Transaction& tx, double now) {
    if (closed_ || now >= deadline_)
        throw LateTransaction("pool: transaction after close");
    if (txs_.size() >= expected_) throw LateTransaction("pool: already full");
    if (!senders_.insert(tx.sender_id).second) return false;  // duplicate sender
    txs_.push_back(tx);
    return true;
}

std::vector<Transaction> sort_pool(std::vector<Transaction> txs) {
    std::stable_sort(txs.begin(), txs.end(), [](const Transaction& a, const Transaction& b) {
        if (a.acc != b.acc) return a.acc > b.acc;
        return a.id() < b.id();
    });
    return txs;
}

ElectionResult elect_leader(std::span<const Transaction> ordered,
                            const std::map<Digest32, VoteRecord>& votes, std::size_t n_nodes) {
    ElectionResult res;
    const std::size_t threshold = vote_threshold(n_nodes);
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        auto it = votes.find(ordered[i].id());
        std::size_t tally = it == votes.end() ? 0 : it->second.tally();
        res.tallies.push_back(tally);
        if (tally >= threshold) {
            res.elected = true;
            res.leader_id = ordered[i].sender_id;
            res.winning_index = i;
            return res;
        }
    }
    return res;
}

ByzantineKind byzantine_kind_from_string(std::string_view s) {
    if (s == "inflated_acc") return ByzantineKind::InflatedAcc;
    if (s == "gaussian_aggregate") return ByzantineKind::GaussianAggregate;
    if (s == "withhold_vote") return ByzantineKind::WithholdVote;
    if (s == "none" || s.empty()) return ByzantineKind::None;
    throw std::invalid_argument("unknown byzantine kind: " + std::string(s));
}

std::string to_string(ByzantineKind k) {
    switch (k) {
        case ByzantineKind::None: return "none";
        case ByzantineKind::InflatedAcc: return "inflated_acc";
        case ByzantineKind::GaussianAggregate: return "gaussian_aggregate";
        case ByzantineKind::WithholdVote: return "withhold_vote";
    }
    return "none";
}

std::optional<zk::Statement> statement_for_tx(const Transaction& tx,
                                              const quant::RealTensor& samples,
                                              std::span<const std::int32_t> labels,
                                              const zk::ModelShape& shape) {
    auto digest = ec::fr_from_bytes(tx.model_digest);
    if (!digest) return std::nullopt;
    if (tx.commitment_point.size() != ec::kG1CompressedBytes) return std::nullopt;
    if (tx.acc > labels.size()) return std::nullopt;
    return zk::make_statement(tx.commitment_point, *digest, samples, labels, tx.acc, shape);
}

Bytes encode_model_record(std::span<const std::uint8_t> model_bytes, const ec::Fr& opening_r) {
    ByteWriter w;
    w.var_bytes(model_bytes);
    w.raw(ec::fr_to_bytes(opening_r));
    return w.take();
}

std::optional<ModelRecord> decode_model_record(std::span<const std::uint8_t> bytes) {
    try {
        ByteReader r(bytes);
        ModelRecord rec;
        rec.model_bytes = r.var_bytes();
        auto fr = ec::fr_from_bytes(r.raw(ec::kFrBytes));
        r.expect_done();
        if (!fr) return std::nullopt;
        rec.opening_r = *fr;
        return rec;
    } catch (const DeserializeError&) {
        return std::nullopt;
    }
}

ledger::Block empty_block(const ledger::Chain& chain, ledger::NodeId sealer,
                          std::int64_t timestamp) {
    ledger::Block b;
    b.header.height = chain.tip().header.height + 1;
    b.header.timestamp = timestamp;
    b.header.prev_hash = chain.tip().header.hash();
    b.header.leader_id = sealer;
    b.header.merkle_root = ledger::merkle_root({});
    b.global_model_addr = chain.tip().global_model_addr;  // carry forward
    return b;
}

RoundOutcome leader_finalize(const FinalizeInputs& in) {
    RoundOutcome out;
    out.leader_id = in.leader_id;

    // the winner already passed the network vote; the leader verifies the rest
    for (std::size_t i = 0; i < in.ordered.size(); ++i) {
        const Transaction& tx = in.ordered[i];
        if (tx.acc < in.inclusion_threshold) continue;
        if (i != in.winner_index) {
            auto st = statement_for_tx(tx, *in.vctx.samples, in.vctx.labels, in.shape);
            if (!st) continue;
            bool ok = false;
            try {
                ok = in.backend->verify(*in.vk, *st, in.cas->get(tx.proof_addr), in.vctx);
            } catch (const ledger::NotFound&) {
                throw AbortRound("leader: proof blob missing from the store");
            } catch (...) {
                ok = false;
            }
            if (!ok) continue;
        }
        out.included.push_back(tx);
    }

    // fetch and cross-check every included model before aggregation
    std::vector<fl::FloatModel> models;
    std::vector<std::size_t> sizes;
    std::vector<Transaction> kept;
    for (const Transaction& tx : out.included) {
        Bytes record_bytes;
        try {
            record_bytes = in.cas->get(tx.model_addr);
        } catch (const ledger::NotFound&) {
            throw AbortRound("leader: model blob missing from the store");
        }
        auto record = decode_model_record(record_bytes);
        if (!record) continue;
        try {
            quant::QuantizedModel qm = quant::deserialize_model(record->model_bytes);
            if (!(zk::shape_of(qm) == in.shape)) continue;  // aggregation shape mismatch
            if (zk::model_digest(qm) != *ec::fr_from_bytes(tx.model_digest)) continue;
            commit::Commitment cm =
                commit::commit(*in.vctx.commit_key, record->model_bytes, record->opening_r);
            if (cm.to_bytes() != tx.commitment_point) continue;
            models.push_back(fl::dequantize_model(qm));
            sizes.push_back(in.registry->require(tx.sender_id).shard_size);
            kept.push_back(tx);
        } catch (const ledger::UnknownSender&) {
            continue;
        } catch (const DeserializeError&) {
            continue;
        }
    }
    out.included = std::move(kept);
    if (out.included.empty()) throw AbortRound("leader: nothing left to aggregate");

    out.new_global = fl::fedavg(models, sizes);
    if (in.gaussian_attack && in.attack_rng) {
        for (auto& w : out.new_global.weights)
            for (auto& v : w.data) v = in.attack_rng->gaussian();
        for (auto& b : out.new_global.biases)
            for (auto& v : b.data) v = in.attack_rng->gaussian();
    }
    Bytes global_bytes = fl::serialize_float_model(out.new_global);
    out.new_global_addr = in.cas->put(global_bytes);

    out.block.header.height = in.chain->tip().header.height + 1;
    out.block.header.timestamp = in.timestamp;
    out.block.header.prev_hash = in.chain->tip().header.hash();
    out.block.header.leader_id = in.leader_id;
    out.block.transactions = out.included;
    out.block.header.merkle_root = ledger::merkle_root(out.block.transactions);
    out.block.global_model_addr = out.new_global_addr;
    return out;
}

}  // namespace zkpot::consensus
