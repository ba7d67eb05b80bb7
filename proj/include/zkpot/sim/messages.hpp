#pragma once

#include "zkpot/ledger/chain.hpp"

namespace zkpot::sim {

// Canonical little-endian wire encodings for the three protocol messages.
inline constexpr std::uint8_t kMsgTxSubmit = 0;
inline constexpr std::uint8_t kMsgVote = 1;
inline constexpr std::uint8_t kMsgBlockAnnounce = 2;

struct VoteMsg {
    Digest32 tx_id{};
    bool verdict = false;
    ledger::NodeId voter = 0;
    std::uint32_t round = 0;
    ledger::Signature sig{};

    Bytes signed_part() const;
};

Bytes encode_tx_submit(const ledger::Transaction& tx);
Bytes encode_vote(const VoteMsg& vote);
Bytes encode_block_announce(const ledger::Block& block);

struct DecodedMessage {
    std::uint8_t type;
    std::optional<ledger::Transaction> tx;
    std::optional<VoteMsg> vote;
    std::optional<ledger::Block> block;
};
std::optional<DecodedMessage> decode_message(std::span<const std::uint8_t> bytes);

VoteMsg make_vote(const Digest32& tx_id, bool verdict, ledger::NodeId voter,
                  std::uint32_t round, const ledger::KeyPair& keys);
bool verify_vote(const VoteMsg& vote, const ledger::Registry& registry);

}  // namespace zkpot::sim
