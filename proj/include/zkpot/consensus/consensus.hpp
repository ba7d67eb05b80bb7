#pragma once

#include <set>

#include "zkpot/fl/train.hpp"
#include "zkpot/ledger/chain.hpp"
#include "zkpot/zk/backend.hpp"

namespace zkpot::consensus {

struct LateTransaction : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AbortRound : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Collects until the deadline passes or the expected number of transactions
// arrived, keeping the first transaction per sender.
class TransactionPool {
public:
    TransactionPool(double deadline, std::size_t expected_total)
        : deadline_(deadline), expected_(expected_total) {}

    bool collect(const ledger::Transaction& tx, double now);
    bool should_close(double now) const {
        return now >= deadline_ || txs_.size() >= expected_;
    }
    void close() { closed_ = true; }
    bool closed() const { return closed_; }
    std::span<const ledger::Transaction> transactions() const { return txs_; }
    double deadline() const { return deadline_; }
    std::size_t expected_total() const { return expected_; }

private:
    double deadline_;
    std::size_t expected_;
    bool closed_ = false;
    std::vector<ledger::Transaction> txs_;
    std::set<ledger::NodeId> senders_;
};

// Non-increasing accuracy; ties broken by ascending SHA-256 of the canonical
// transaction bytes so every node lands on the same order.
std::vector<ledger::Transaction> sort_pool(std::vector<ledger::Transaction> txs);

struct VoteRecord {
    Digest32 tx_id{};
    std::map<ledger::NodeId, bool> verdicts;

    void record(ledger::NodeId node, bool accept) { verdicts.emplace(node, accept); }
    std::size_t tally() const {
        std::size_t n = 0;
        for (const auto& [node, v] : verdicts) n += v ? 1 : 0;
        return n;
    }
};

// ceil(2N/3)
constexpr std::size_t vote_threshold(std::size_t n_nodes) { return (2 * n_nodes + 2) / 3; }

struct ElectionResult {
    bool elected = false;
    ledger::NodeId leader_id = 0;
    std::size_t winning_index = 0;
    std::vector<std::size_t> tallies;  // per inspected transaction, in order
};

// First transaction in order whose tally reaches ceil(2N/3) wins.
ElectionResult elect_leader(std::span<const ledger::Transaction> ordered,
                            const std::map<Digest32, VoteRecord>& votes, std::size_t n_nodes);

enum class ByzantineKind { None, InflatedAcc, GaussianAggregate, WithholdVote };
ByzantineKind byzantine_kind_from_string(std::string_view s);
std::string to_string(ByzantineKind k);

// Statement a verifier derives from a transaction plus the locally held test
// set; nullopt when the transaction's binding fields are malformed.
std::optional<zk::Statement> statement_for_tx(const ledger::Transaction& tx,
                                              const quant::RealTensor& samples,
                                              std::span<const std::int32_t> labels,
                                              const zk::ModelShape& shape);

// CAS record a client stores at its model address: model bytes plus the
// Pedersen opening, so the leader can check both bindings before aggregating.
Bytes encode_model_record(std::span<const std::uint8_t> model_bytes, const ec::Fr& opening_r);
struct ModelRecord {
    Bytes model_bytes;
    ec::Fr opening_r;
};
std::optional<ModelRecord> decode_model_record(std::span<const std::uint8_t> bytes);

struct FinalizeInputs {
    std::span<const ledger::Transaction> ordered;  // sorted, closed pool
    std::size_t winner_index = 0;
    ledger::NodeId leader_id = 0;
    zk::Backend* backend = nullptr;
    const Bytes* vk = nullptr;
    zk::VerifyContext vctx;
    zk::ModelShape shape;
    ledger::Cas* cas = nullptr;
    const ledger::Registry* registry = nullptr;
    std::uint32_t inclusion_threshold = 0;  // minimum accepted accuracy
    const ledger::Chain* chain = nullptr;
    std::int64_t timestamp = 0;
    // gaussian corruption hook for byzantine leaders
    bool gaussian_attack = false;
    Rng* attack_rng = nullptr;
};

struct RoundOutcome {
    bool no_leader = false;
    ledger::NodeId leader_id = 0;
    std::vector<ledger::Transaction> included;
    ledger::CasAddress new_global_addr;
    ledger::Block block;
    fl::FloatModel new_global;
};

// Leader duties after election: verify the remaining transactions, drop
// invalid or below-threshold ones, aggregate the fetched models with FedAvg
// weighted by registered shard sizes, store the new global model and seal the
// block. CAS misses abort the round; per-model validation failures only
// exclude that transaction.
RoundOutcome leader_finalize(const FinalizeInputs& in);

// Empty carry-forward block for rounds without a leader.
ledger::Block empty_block(const ledger::Chain& chain, ledger::NodeId sealer,
                          std::int64_t timestamp);

}  // namespace zkpot::consensus
