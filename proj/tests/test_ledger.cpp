#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "zkpot/common/rng.hpp"
#include "zkpot/common/serial.hpp"
#include "zkpot/common/sha256.hpp"
#include "zkpot/ledger/chain.hpp"

using namespace zkpot;
using namespace zkpot::ledger;

namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const char* name) {
    fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

Transaction make_tx(Rng& rng, NodeId sender, std::uint32_t acc) {
    Transaction tx;
    tx.sender_id = sender;
    tx.task_name = "mnist-task";
    tx.acc = acc;
    for (auto& b : tx.model_addr.digest) b = static_cast<std::uint8_t>(rng.next());
    for (auto& b : tx.proof_addr.digest) b = static_cast<std::uint8_t>(rng.next());
    for (auto& b : tx.vk_addr.digest) b = static_cast<std::uint8_t>(rng.next());
    tx.commitment_point.resize(48);
    for (auto& b : tx.commitment_point) b = static_cast<std::uint8_t>(rng.next());
    tx.model_digest.resize(32);
    for (auto& b : tx.model_digest) b = static_cast<std::uint8_t>(rng.next());
    tx.nonce = rng.next();
    return tx;
}

// Independent reimplementation with explicit duplication, used as the oracle.
Digest32 merkle_oracle(std::span<const Transaction> txs) {
    if (txs.empty()) return Digest32{};
    std::vector<Digest32> nodes;
    for (const auto& tx : txs) nodes.push_back(sha256(tx.canonical_bytes()));
    while (nodes.size() > 1) {
        std::vector<Digest32> up;
        std::size_t i = 0;
        while (i < nodes.size()) {
            Digest32 left = nodes[i];
            Digest32 right = (i + 1 < nodes.size()) ? nodes[i + 1] : nodes[i];
            Bytes cat(left.begin(), left.end());
            cat.insert(cat.end(), right.begin(), right.end());
            up.push_back(sha256(cat));
            i += 2;
        }
        nodes = std::move(up);
    }
    return nodes[0];
}

struct ChainFixture {
    Registry registry;
    std::map<NodeId, KeyPair> keys;
    Chain chain;

    explicit ChainFixture(int n_blocks, int txs_per_block)
        : chain(Chain::genesis(make_genesis())) {
        Rng rng(77);
        for (int h = 1; h <= n_blocks; ++h) {
            Block b;
            b.header.height = static_cast<std::uint64_t>(h);
            b.header.timestamp = 1700000000 + h;
            b.header.prev_hash = chain.tip().header.hash();
            b.header.leader_id = 1;
            for (int t = 0; t < txs_per_block; ++t) {
                NodeId sender = 1 + static_cast<NodeId>((h + t) % 3);
                Transaction tx = make_tx(rng, sender, static_cast<std::uint32_t>(50 + t));
                sign_tx(tx, keys.at(sender));
                b.transactions.push_back(std::move(tx));
            }
            b.header.merkle_root = merkle_root(b.transactions);
            for (auto& byte : b.global_model_addr.digest)
                byte = static_cast<std::uint8_t>(rng.next());
            chain.append(std::move(b));
        }
    }

    Block make_genesis() {
        for (NodeId id = 0; id < 4; ++id) {
            KeyPair kp = KeyPair::from_seed(1000 + id);
            keys[id] = kp;
            registry.entries[id] = {kp.public_key, id == 0 ? NodeRole::Publisher : NodeRole::Client,
                                    600};
        }
        Block g;
        g.header.height = 0;
        g.header.timestamp = 1700000000;
        g.header.leader_id = 0;
        g.header.merkle_root = merkle_root({});
        return g;
    }
};

}  // namespace

TEST_CASE("cas: idempotent put, NotFound, tamper detection") {
    DiskCas cas(fresh_dir("zkpot_cas_test"));
    Bytes payload = to_bytes("content addressed bytes");
    CasAddress a = cas.put(payload);
    CasAddress b = cas.put(payload);
    CHECK(a == b);
    CHECK(cas.get(a) == payload);

    CasAddress missing;
    missing.digest[0] = 0xAA;
    CHECK_THROWS_AS(cas.get(missing), NotFound);

    // tamper with the stored file
    {
        std::fstream f(cas.path_of(a), std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(3);
        f.put('X');
    }
    CHECK_THROWS_AS(cas.get(a), CorruptBlob);

    MemoryCas mem;
    CasAddress m = mem.put(payload);
    CHECK(mem.get(m) == payload);
    CHECK(m == a);

    CHECK(CasAddress::from_hex(a.to_hex()) == a);
    CHECK(!CasAddress::from_hex("zz").has_value());
}

TEST_CASE("merkle root matches the brute-force oracle") {
    Rng rng(5);
    ChainFixture fx(0, 0);
    CHECK(merkle_root({}) == Digest32{});

    std::vector<Transaction> txs;
    txs.push_back(make_tx(rng, 1, 10));
    sign_tx(txs[0], fx.keys.at(1));
    // single tx: the root is the leaf hash itself
    CHECK(merkle_root(txs) == sha256(txs[0].canonical_bytes()));

    for (int n = 2; n <= 7; ++n) {
        txs.push_back(make_tx(rng, 1 + static_cast<NodeId>(n % 3), 10 + n));
        sign_tx(txs.back(), fx.keys.at(txs.back().sender_id));
        CHECK(merkle_root(txs) == merkle_oracle(txs));
    }
}

TEST_CASE("transaction signatures verify and reject mutation") {
    Rng rng(6);
    ChainFixture fx(0, 0);
    Transaction tx = make_tx(rng, 2, 42);
    sign_tx(tx, fx.keys.at(2));
    CHECK(verify_tx(tx, fx.registry));

    Transaction bad = tx;
    bad.acc += 1;
    CHECK(!verify_tx(bad, fx.registry));

    Transaction unknown = tx;
    unknown.sender_id = 99;
    CHECK_THROWS_AS(verify_tx(unknown, fx.registry), UnknownSender);

    // fuzz: random single-bit flips over the canonical encoding, re-parsed
    int accepted = 0;
    Bytes base = tx.canonical_bytes();
    for (int trial = 0; trial < 1000; ++trial) {
        Bytes mutated = base;
        std::size_t pos = rng.below(mutated.size());
        mutated[pos] ^= static_cast<std::uint8_t>(1 << rng.below(8));
        try {
            Transaction parsed = deserialize_tx(mutated);
            if (verify_tx(parsed, fx.registry)) ++accepted;
        } catch (...) {
        }
    }
    CHECK(accepted == 0);
}

TEST_CASE("canonical serialization is injective over a corpus") {
    Rng rng(7);
    ChainFixture fx(0, 0);
    std::set<Bytes> seen;
    int count = 0;
    for (int i = 0; i < 200; ++i) {
        Transaction tx = make_tx(rng, 1 + static_cast<NodeId>(i % 3),
                                 static_cast<std::uint32_t>(i % 17));
        tx.task_name = i % 2 ? "task-a" : "task";
        sign_tx(tx, fx.keys.at(tx.sender_id));
        seen.insert(tx.canonical_bytes());
        ++count;
    }
    CHECK(static_cast<int>(seen.size()) == count);
}

TEST_CASE("chain append validates linkage and merkle roots") {
    ChainFixture fx(3, 2);
    CHECK(fx.chain.height() == 3);
    CHECK(fx.chain.validate(fx.registry));

    // stale prev hash
    Block stale;
    stale.header.height = 4;
    stale.header.prev_hash = fx.chain.blocks()[1].header.hash();
    stale.header.merkle_root = merkle_root({});
    CHECK_THROWS_AS(fx.chain.append(stale), ForkRejected);

    // bad merkle root
    Rng rng(9);
    Block bad;
    bad.header.height = 4;
    bad.header.prev_hash = fx.chain.tip().header.hash();
    Transaction tx = make_tx(rng, 1, 9);
    sign_tx(tx, fx.keys.at(1));
    bad.transactions.push_back(tx);
    bad.header.merkle_root = Digest32{};
    CHECK_THROWS_AS(fx.chain.append(bad), InvalidBlock);

    // mutate one tx byte in a sealed chain: validation must fail
    Chain mutated = fx.chain;
    const_cast<Transaction&>(mutated.blocks()[2].transactions[0]).acc ^= 1;
    CHECK(!mutated.validate(fx.registry));
}

TEST_CASE("chain.log round trips and every byte is load-bearing") {
    ChainFixture fx(3, 1);
    Bytes log = serialize_chain(fx.chain);
    Chain back = load_chain_bytes(log);
    CHECK(back.tip_hash() == fx.chain.tip_hash());
    CHECK(back.validate(fx.registry));

    Rng rng(10);
    for (int trial = 0; trial < 300; ++trial) {
        Bytes bad = log;
        std::size_t pos = rng.below(bad.size());
        bad[pos] ^= static_cast<std::uint8_t>(1 + rng.below(255));
        bool rejected = false;
        try {
            Chain c = load_chain_bytes(bad);
            rejected = !c.validate(fx.registry) || c.tip_hash() != fx.chain.tip_hash();
        } catch (...) {
            rejected = true;
        }
        CHECK(rejected);
    }

    fs::path dir = fresh_dir("zkpot_chainlog_test");
    save_chain(dir / "chain.log", fx.chain);
    Chain loaded = load_chain(dir / "chain.log");
    CHECK(loaded.tip_hash() == fx.chain.tip_hash());
    CHECK_THROWS_AS(load_chain(dir / "missing.log"), NotFound);
}

TEST_CASE("ipfs http adapter round trips against a mock gateway") {
    httplib::Server server;
    std::map<std::string, std::string> store;
    int counter = 0;
    server.Post("/api/v0/add", [&](const httplib::Request& req, httplib::Response& res) {
        REQUIRE(req.has_file("file"));
        const auto file = req.get_file_value("file");
        std::string cid = "Qm" + std::to_string(counter++);
        store[cid] = file.content;
        res.set_content(nlohmann::json{{"Hash", cid}}.dump(), "application/json");
    });
    server.Post("/api/v0/cat", [&](const httplib::Request& req, httplib::Response& res) {
        auto it = store.find(req.get_param_value("arg"));
        if (it == store.end()) {
            res.status = 404;
            return;
        }
        res.set_content(it->second, "application/octet-stream");
    });

    int port = server.bind_to_any_port("127.0.0.1");
    std::thread worker([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    {
        IpfsHttpCas cas("127.0.0.1", port);
        Bytes payload = to_bytes("ipfs adapter payload");
        CasAddress addr = cas.put(payload);
        CHECK(addr == CasAddress::of(payload));
        CHECK(cas.get(addr) == payload);

        CasAddress missing;
        missing.digest[5] = 9;
        CHECK_THROWS_AS(cas.get(missing), NotFound);

        // gateway corruption is caught by the digest cross-check
        store["Qm0"][0] ^= 0x01;
        CHECK_THROWS_AS(cas.get(addr), CorruptBlob);
    }

    server.stop();
    worker.join();
}
