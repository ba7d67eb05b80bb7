#include "zkpot/sim/messages.hpp"

#include "zkpot/common/serial.hpp"

namespace zkpot::sim {

Bytes VoteMsg::signed_part() const {
    ByteWriter w;
    w.raw(tx_id);
    w.u8(verdict ? 1 : 0);
    w.u32(voter);
    w.u32(round);
    return w.take();
}

Bytes encode_tx_submit(const ledger::Transaction& tx) {
    ByteWriter w;
    w.u8(kMsgTxSubmit);
    w.var_bytes(tx.canonical_bytes());
    return w.take();
}

Bytes encode_vote(const VoteMsg& vote) {
    ByteWriter w;
    w.u8(kMsgVote);
    w.raw(vote.signed_part());
    w.raw(vote.sig);
    return w.take();
}

Bytes encode_block_announce(const ledger::Block& block) {
    ByteWriter w;
    w.u8(kMsgBlockAnnounce);
    w.var_bytes(block.canonical_bytes());
    return w.take();
}

std::optional<DecodedMessage> decode_message(std::span<const std::uint8_t> bytes) {
    try {
        ByteReader r(bytes);
        DecodedMessage msg;
        msg.type = r.u8();
        switch (msg.type) {
            case kMsgTxSubmit: {
                Bytes tx_bytes = r.var_bytes();
                r.expect_done();
                msg.tx = ledger::deserialize_tx(tx_bytes);
                return msg;
            }
            case kMsgVote: {
                VoteMsg v;
                v.tx_id = r.fixed<32>();
                v.verdict = r.u8() != 0;
                v.voter = r.u32();
                v.round = r.u32();
                v.sig = r.fixed<64>();
                r.expect_done();
                msg.vote = v;
                return msg;
            }
            case kMsgBlockAnnounce: {
                Bytes block_bytes = r.var_bytes();
                r.expect_done();
                msg.block = ledger::deserialize_block(block_bytes);
                return msg;
            }
            default:
                return std::nullopt;
        }
    } catch (const DeserializeError&) {
        return std::nullopt;
    }
}

VoteMsg make_vote(const Digest32& tx_id, bool verdict, ledger::NodeId voter, std::uint32_t round,
                  const ledger::KeyPair& keys) {
    VoteMsg v;
    v.tx_id = tx_id;
    v.verdict = verdict;
    v.voter = voter;
    v.round = round;
    v.sig = ledger::sign_bytes(keys, v.signed_part());
    return v;
}

bool verify_vote(const VoteMsg& vote, const ledger::Registry& registry) {
    auto it = registry.entries.find(vote.voter);
    if (it == registry.entries.end()) return false;
    return ledger::verify_bytes(it->second.public_key, vote.signed_part(), vote.sig);
}

}  // namespace zkpot::sim
