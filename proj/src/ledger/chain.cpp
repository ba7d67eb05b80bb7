#include "zkpot/ledger/chain.hpp"

#include <sodium.h>

#include <fstream>

#include "zkpot/common/serial.hpp"
#include "zkpot/common/sha256.hpp"

namespace zkpot::ledger {

KeyPair KeyPair::from_seed(std::uint64_t seed) {
    if (sodium_init() < 0) throw std::runtime_error("sodium_init failed");
    std::array<std::uint8_t, crypto_sign_SEEDBYTES> seed_bytes{};
    for (int i = 0; i < 8; ++i) seed_bytes[i] = static_cast<std::uint8_t>(seed >> (8 * i));
    Digest32 stretched = sha256(seed_bytes);
    KeyPair kp;
    crypto_sign_seed_keypair(kp.public_key.data(), kp.secret_key.data(), stretched.data());
    return kp;
}

Signature sign_bytes(const KeyPair& keys, std::span<const std::uint8_t> msg) {
    Signature sig{};
    crypto_sign_detached(sig.data(), nullptr, msg.data(), msg.size(), keys.secret_key.data());
    return sig;
}

bool verify_bytes(const std::array<std::uint8_t, 32>& public_key,
                  std::span<const std::uint8_t> msg, const Signature& sig) {
    return crypto_sign_verify_detached(sig.data(), msg.data(), msg.size(), public_key.data()) == 0;
}

const Registry::Entry& Registry::require(NodeId id) const {
    auto it = entries.find(id);
    if (it == entries.end())
        throw UnknownSender("registry: unknown sender " + std::to_string(id));
    return it->second;
}

Bytes Transaction::canonical_unsigned() const {
    ByteWriter w;
    w.u32(sender_id);
    w.str(task_name);
    w.u32(acc);
    w.raw(model_addr.digest);
    w.raw(proof_addr.digest);
    w.raw(vk_addr.digest);
    w.var_bytes(commitment_point);
    w.var_bytes(model_digest);
    w.u64(nonce);
    return w.take();
}

Bytes Transaction::canonical_bytes() const {
    ByteWriter w;
    Bytes unsigned_part = canonical_unsigned();
    w.raw(unsigned_part);
    w.raw(signature);
    return w.take();
}

Digest32 Transaction::id() const { return sha256(canonical_bytes()); }

void sign_tx(Transaction& tx, const KeyPair& keys) {
    tx.signature = sign_bytes(keys, tx.canonical_unsigned());
}

bool verify_tx(const Transaction& tx, const Registry& registry) {
    const Registry::Entry& entry = registry.require(tx.sender_id);
    return verify_bytes(entry.public_key, tx.canonical_unsigned(), tx.signature);
}

Digest32 merkle_root(std::span<const Transaction> txs) {
    if (txs.empty()) return Digest32{};
    std::vector<Digest32> level;
    level.reserve(txs.size());
    for (const auto& tx : txs) level.push_back(sha256(tx.canonical_bytes()));
    while (level.size() > 1) {
        if (level.size() % 2 == 1) level.push_back(level.back());
        std::vector<Digest32> next;
        next.reserve(level.size() / 2);
        for (std::size_t i = 0; i < level.size(); i += 2) {
            next.push_back(Sha256().update(level[i]).update(level[i + 1]).finish());
        }
        level = std::move(next);
    }
    return level.front();
}

Bytes BlockHeader::canonical_bytes() const {
    ByteWriter w;
    w.u64(height);
    w.i64(timestamp);
    w.raw(prev_hash);
    w.raw(merkle_root);
    w.u32(leader_id);
    return w.take();
}

Digest32 BlockHeader::hash() const { return sha256(canonical_bytes()); }

Bytes Block::canonical_bytes() const {
    ByteWriter w;
    w.raw(header.canonical_bytes());
    w.u32(static_cast<std::uint32_t>(transactions.size()));
    for (const auto& tx : transactions) w.var_bytes(tx.canonical_bytes());
    w.raw(global_model_addr.digest);
    return w.take();
}

Digest32 Block::hash() const { return sha256(canonical_bytes()); }

Transaction deserialize_tx(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    Transaction tx;
    tx.sender_id = r.u32();
    tx.task_name = r.str();
    tx.acc = r.u32();
    tx.model_addr.digest = r.fixed<32>();
    tx.proof_addr.digest = r.fixed<32>();
    tx.vk_addr.digest = r.fixed<32>();
    tx.commitment_point = r.var_bytes();
    tx.model_digest = r.var_bytes();
    tx.nonce = r.u64();
    tx.signature = r.fixed<64>();
    r.expect_done();
    return tx;
}

Block deserialize_block(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    Block b;
    b.header.height = r.u64();
    b.header.timestamp = r.i64();
    b.header.prev_hash = r.fixed<32>();
    b.header.merkle_root = r.fixed<32>();
    b.header.leader_id = r.u32();
    std::uint32_t n = r.u32();
    if (n > 100000) throw DeserializeError("block: implausible tx count");
    b.transactions.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        Bytes tx_bytes = r.var_bytes();
        b.transactions.push_back(deserialize_tx(tx_bytes));
    }
    b.global_model_addr.digest = r.fixed<32>();
    r.expect_done();
    return b;
}

Chain Chain::genesis(Block block) {
    if (block.header.height != 0) throw InvalidBlock("genesis: height must be 0");
    if (block.header.prev_hash != Digest32{})
        throw InvalidBlock("genesis: prev_hash must be zero");
    if (block.header.merkle_root != merkle_root(block.transactions))
        throw InvalidBlock("genesis: wrong merkle root");
    Chain c;
    c.blocks_.push_back(std::move(block));
    return c;
}

void Chain::append(Block block) {
    const Block& parent = blocks_.back();
    if (block.header.prev_hash != parent.header.hash())
        throw ForkRejected("append: block does not link to the tip");
    if (block.header.height != parent.header.height + 1)
        throw InvalidBlock("append: non-contiguous height");
    if (block.header.merkle_root != merkle_root(block.transactions))
        throw InvalidBlock("append: wrong merkle root");
    blocks_.push_back(std::move(block));
}

bool Chain::validate(const Registry& registry, std::string* why) const {
    auto fail = [&](const std::string& reason) {
        if (why) *why = reason;
        return false;
    };
    if (blocks_.empty()) return fail("empty chain");
    if (blocks_.front().header.height != 0) return fail("genesis height");
    if (blocks_.front().header.prev_hash != Digest32{}) return fail("genesis prev hash");
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        const Block& b = blocks_[i];
        if (b.header.height != i) return fail("height sequence");
        if (i > 0 && b.header.prev_hash != blocks_[i - 1].header.hash())
            return fail("hash link at height " + std::to_string(i));
        if (b.header.merkle_root != merkle_root(b.transactions))
            return fail("merkle root at height " + std::to_string(i));
        for (const auto& tx : b.transactions) {
            try {
                if (!verify_tx(tx, registry))
                    return fail("tx signature at height " + std::to_string(i));
            } catch (const UnknownSender&) {
                return fail("unknown sender at height " + std::to_string(i));
            }
        }
    }
    return true;
}

Bytes serialize_chain(const Chain& chain) {
    ByteWriter w;
    for (const Block& b : chain.blocks()) {
        Bytes bytes = b.canonical_bytes();
        w.u32(static_cast<std::uint32_t>(bytes.size()));
        w.raw(bytes);
        w.raw(sha256(bytes));
    }
    return w.take();
}

void save_chain(const std::filesystem::path& path, const Chain& chain) {
    Bytes bytes = serialize_chain(chain);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("save_chain: write failed");
}

Chain load_chain_bytes(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    std::optional<Chain> chain;
    while (!r.done()) {
        Bytes block_bytes = r.var_bytes();
        Digest32 stored = r.fixed<32>();
        if (sha256(block_bytes) != stored)
            throw CorruptBlob("chain.log: record digest mismatch");
        Block b = deserialize_block(block_bytes);
        if (!chain) {
            chain = Chain::genesis(std::move(b));
        } else {
            chain->append(std::move(b));
        }
    }
    if (!chain) throw DeserializeError("chain.log: empty");
    return std::move(*chain);
}

Chain load_chain(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFound("chain.log: cannot open " + path.string());
    Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return load_chain_bytes(bytes);
}

}  // namespace zkpot::ledger
