#pragma once

#include "zkpot/ledger/cas.hpp"

namespace zkpot::ledger {

struct ForkRejected : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidBlock : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownSender : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using NodeId = std::uint32_t;

struct KeyPair {
    std::array<std::uint8_t, 32> public_key{};
    std::array<std::uint8_t, 64> secret_key{};
    static KeyPair from_seed(std::uint64_t seed);
};

using Signature = std::array<std::uint8_t, 64>;
Signature sign_bytes(const KeyPair& keys, std::span<const std::uint8_t> msg);
bool verify_bytes(const std::array<std::uint8_t, 32>& public_key,
                  std::span<const std::uint8_t> msg, const Signature& sig);

enum class NodeRole : std::uint8_t { Publisher = 0, Client = 1 };

// Registration record shared at genesis: identity, role and the declared
// shard size used as the FedAvg weight.
struct Registry {
    struct Entry {
        std::array<std::uint8_t, 32> public_key{};
        NodeRole role = NodeRole::Client;
        std::size_t shard_size = 0;
    };
    std::map<NodeId, Entry> entries;

    const Entry& require(NodeId id) const;
};

struct Transaction {
    NodeId sender_id = 0;
    std::string task_name;
    std::uint32_t acc = 0;
    CasAddress model_addr, proof_addr, vk_addr;
    Bytes commitment_point;  // compressed Pedersen point
    Bytes model_digest;      // algebraic in-circuit binding, 32 bytes
    std::uint64_t nonce = 0;
    Signature signature{};

    Bytes canonical_unsigned() const;
    Bytes canonical_bytes() const;
    Digest32 id() const;  // SHA-256 of the canonical bytes
};

void sign_tx(Transaction& tx, const KeyPair& keys);
// Throws UnknownSender for unregistered ids; false on any field mutation.
bool verify_tx(const Transaction& tx, const Registry& registry);

// Leaves are SHA-256 of canonical transaction bytes; odd levels duplicate the
// last node; the empty list hashes to 32 zero bytes.
Digest32 merkle_root(std::span<const Transaction> txs);

struct BlockHeader {
    std::uint64_t height = 0;
    std::int64_t timestamp = 0;  // unix seconds (simulated clock)
    Digest32 prev_hash{};
    Digest32 merkle_root{};
    NodeId leader_id = 0;

    Bytes canonical_bytes() const;
    Digest32 hash() const;
};

Transaction deserialize_tx(std::span<const std::uint8_t> bytes);

struct Block {
    BlockHeader header;
    std::vector<Transaction> transactions;
    CasAddress global_model_addr;

    Bytes canonical_bytes() const;
    Digest32 hash() const;  // over the full canonical block
};
Block deserialize_block(std::span<const std::uint8_t> bytes);

class Chain {
public:
    // Genesis: height 0, zero prev-hash.
    static Chain genesis(Block block);

    // Link + merkle validation; ForkRejected on stale prev-hash.
    void append(Block block);

    const Block& tip() const { return blocks_.back(); }
    const std::vector<Block>& blocks() const { return blocks_; }
    std::size_t height() const { return blocks_.size() - 1; }

    // Full revalidation: linkage, merkle roots and every tx signature.
    bool validate(const Registry& registry, std::string* why = nullptr) const;

    Digest32 tip_hash() const { return tip().hash(); }

private:
    std::vector<Block> blocks_;
};

// chain.log: length-prefixed records of canonical block bytes, each followed
// by its SHA-256. Loading rejects any byte-level corruption.
Bytes serialize_chain(const Chain& chain);
void save_chain(const std::filesystem::path& path, const Chain& chain);
Chain load_chain_bytes(std::span<const std::uint8_t> bytes);
Chain load_chain(const std::filesystem::path& path);

}  // namespace zkpot::ledger
