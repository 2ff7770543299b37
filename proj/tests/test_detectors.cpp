#include <doctest.h>

#include "airdrop/detectors.hpp"
#include "airdrop/errors.hpp"

#include <algorithm>
#include <string>

using namespace airdrop;

namespace {

Address addr(int n) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%04x", n);
    return Address::parse("0x" + std::string(36, '0') + buf);
}

Transaction tx(int id, const Address& from, const Address& to, const char* src, const char* dst,
               const std::string& amount, std::int64_t ts) {
    Transaction t;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%08x", id);
    t.tx_hash = "0x" + std::string(56, '0') + buf;
    t.from = from;
    t.to = to;
    t.src_chain = ChainId::parse(src);
    t.dst_chain = ChainId::parse(dst);
    t.token = "ETH";
    t.amount = Decimal::parse(amount);
    t.timestamp = ts;
    t.gas_fee_native = Decimal::parse("0.001");
    t.transfer_fee_native = Decimal::parse("0.01");
    return t;
}

AttackerGroup group_of(std::initializer_list<int> ids) {
    AttackerGroup g;
    g.group_id = "g";
    for (int id : ids) g.addresses.push_back(addr(id));
    std::sort(g.addresses.begin(), g.addresses.end());
    return g;
}

} // namespace

TEST_CASE("funder detection: external funder of 3 of 4 addresses") {
    const Address s = addr(99);
    const auto g = group_of({1, 2, 3, 4});
    const Ledger ledger = Ledger::from_transactions({
        tx(1, s, addr(1), "ethereum", "ethereum", "10", 100),
        tx(2, s, addr(2), "ethereum", "ethereum", "10", 200),
        tx(3, s, addr(3), "ethereum", "ethereum", "10", 300),
    });
    const auto report = detect_funder_receiver(ledger, g);
    REQUIRE(report.funder.has_value());
    CHECK(report.funder->first == s);
    CHECK(report.funder->second == doctest::Approx(0.75));
    CHECK_FALSE(report.receiver.has_value()); // no in-group senders
}

TEST_CASE("funder detection: no matching transactions") {
    const auto g = group_of({1, 2});
    const Ledger ledger = Ledger::from_transactions({
        tx(1, addr(50), addr(51), "ethereum", "ethereum", "10", 100),
    });
    const auto report = detect_funder_receiver(ledger, g);
    CHECK_FALSE(report.funder.has_value());
    CHECK_FALSE(report.receiver.has_value());
}

TEST_CASE("receiver detection and saturation") {
    const Address sink = addr(77);
    const auto g = group_of({1, 2, 3});
    const Ledger ledger = Ledger::from_transactions({
        tx(1, addr(1), sink, "ethereum", "optimism", "5", 100),
        tx(2, addr(2), sink, "optimism", "ethereum", "5", 200),
        tx(3, addr(3), sink, "arbitrum", "ethereum", "5", 300),
    });
    const auto report = detect_funder_receiver(ledger, g);
    REQUIRE(report.receiver.has_value());
    CHECK(report.receiver->first == sink);
    CHECK(report.receiver->second == doctest::Approx(1.0));
}

TEST_CASE("funder ties break to the lexicographically smallest address") {
    const auto g = group_of({1, 2});
    const Ledger ledger = Ledger::from_transactions({
        tx(1, addr(30), addr(1), "ethereum", "ethereum", "1", 100),
        tx(2, addr(20), addr(2), "ethereum", "ethereum", "1", 200),
    });
    const auto report = detect_funder_receiver(ledger, g);
    REQUIRE(report.funder.has_value());
    CHECK(report.funder->first == addr(20));
}

TEST_CASE("sequential transfers: two-hop chain within thresholds") {
    const auto g = group_of({1, 2, 3});
    const DetectorConfig cfg;
    const Ledger ledger = Ledger::from_transactions({
        tx(1, addr(1), addr(2), "ethereum", "optimism", "100", 1000),
        tx(2, addr(2), addr(3), "optimism", "arbitrum", "99.5", 1600),
    });
    const auto chains = detect_sequential_transfers(ledger, g, cfg);
    REQUIRE(chains.size() == 1);
    CHECK(chains[0].transactions.size() == 2);
    CHECK(chains[0].start_address() == addr(1));
    CHECK(chains[0].end_address() == addr(3));
    CHECK(chains[0].hop_count() == 1);
}

TEST_CASE("sequential transfers: value threshold violation") {
    const auto g = group_of({1, 2, 3});
    const Ledger ledger = Ledger::from_transactions({
        tx(1, addr(1), addr(2), "ethereum", "optimism", "100", 1000),
        tx(2, addr(2), addr(3), "optimism", "arbitrum", "90", 1600), // 10% > 1%
    });
    CHECK(detect_sequential_transfers(ledger, g, DetectorConfig{}).empty());
}

TEST_CASE("sequential transfers: time window violation") {
    const auto g = group_of({1, 2, 3});
    const Ledger ledger = Ledger::from_transactions({
        tx(1, addr(1), addr(2), "ethereum", "optimism", "100", 1000),
        tx(2, addr(2), addr(3), "optimism", "arbitrum", "99.5", 1000 + 7200),
    });
    CHECK(detect_sequential_transfers(ledger, g, DetectorConfig{}).empty());
}

TEST_CASE("sequential transfers: hop must continue on the destination chain") {
    const auto g = group_of({1, 2, 3});
    const Ledger ledger = Ledger::from_transactions({
        tx(1, addr(1), addr(2), "ethereum", "optimism", "100", 1000),
        tx(2, addr(2), addr(3), "arbitrum", "ethereum", "99.5", 1600), // wrong source chain
    });
    CHECK(detect_sequential_transfers(ledger, g, DetectorConfig{}).empty());
}

TEST_CASE("sequential transfers: greedy consumption keeps chains disjoint") {
    const auto g = group_of({1, 2, 3, 4});
    const Ledger ledger = Ledger::from_transactions({
        tx(1, addr(1), addr(2), "ethereum", "optimism", "100", 1000),
        tx(2, addr(2), addr(3), "optimism", "arbitrum", "99.8", 1300),
        tx(3, addr(3), addr(4), "arbitrum", "ethereum", "99.6", 1600),
    });
    const auto chains = detect_sequential_transfers(ledger, g, DetectorConfig{});
    REQUIRE(chains.size() == 1);
    CHECK(chains[0].transactions.size() == 3); // one maximal chain, no sub-chains
}

TEST_CASE("sequential coverage counting") {
    const auto g = group_of({1, 2, 3, 4});
    const Ledger ledger = Ledger::from_transactions({
        tx(1, addr(1), addr(2), "ethereum", "optimism", "100", 1000),
        tx(2, addr(2), addr(3), "optimism", "arbitrum", "99.5", 1600),
    });
    const auto chains = detect_sequential_transfers(ledger, g, DetectorConfig{});
    const auto coverage = sequential_coverage(chains, g);
    CHECK(coverage.covered_fraction == doctest::Approx(0.75)); // addresses 1,2,3 of 4
    CHECK(coverage.avg_transfers_per_covered_address == doctest::Approx(1.0));

    const auto none = sequential_coverage({}, g);
    CHECK(none.covered_fraction == 0.0);
    CHECK(none.avg_transfers_per_covered_address == 0.0);
}

TEST_CASE("uniformity: identical activity is fully uniform at zero thresholds") {
    const auto g = group_of({1, 2, 3});
    // ring: every member sends exactly 2 txs of 10 to other members
    std::vector<Transaction> txs;
    int id = 1;
    std::int64_t ts = 100;
    for (int i = 1; i <= 3; ++i)
        for (int k = 0; k < 2; ++k)
            txs.push_back(tx(id++, addr(i), addr(1 + (i % 3)), "ethereum", "ethereum", "10", ts += 60));
    const Ledger ledger = Ledger::from_transactions(std::move(txs));
    DetectorConfig cfg;
    cfg.count_threshold = 0.0;
    cfg.volume_threshold = 0.0;
    const auto score = compute_uniformity(ledger, g, cfg);
    CHECK(score.u_count == doctest::Approx(1.0));
    CHECK(score.u_volume == doctest::Approx(1.0));
}

TEST_CASE("uniformity: counts [5,5,5,6] with threshold 2") {
    const auto g = group_of({1, 2, 3, 4});
    std::vector<Transaction> txs;
    int id = 1;
    std::int64_t ts = 100;
    const int counts[] = {5, 5, 5, 6};
    for (int i = 1; i <= 4; ++i)
        for (int k = 0; k < counts[i - 1]; ++k)
            txs.push_back(tx(id++, addr(i), addr(1 + (i % 4)), "ethereum", "ethereum", "1", ts += 60));
    const Ledger ledger = Ledger::from_transactions(std::move(txs));
    DetectorConfig cfg;
    cfg.count_threshold = 2.0;
    const auto score = compute_uniformity(ledger, g, cfg);
    CHECK(score.u_count == doctest::Approx(1.0));
}

TEST_CASE("uniformity: two extreme points each become their own center") {
    const auto g = group_of({1, 2});
    std::vector<Transaction> txs;
    int id = 1;
    std::int64_t ts = 100;
    for (int k = 0; k < 1; ++k) txs.push_back(tx(id++, addr(1), addr(2), "ethereum", "ethereum", "1", ts += 60));
    for (int k = 0; k < 100; ++k)
        txs.push_back(tx(id++, addr(2), addr(1), "ethereum", "ethereum", "1", ts += 60));
    const Ledger ledger = Ledger::from_transactions(std::move(txs));
    DetectorConfig cfg;
    cfg.count_threshold = 0.0;
    CHECK(compute_uniformity(ledger, g, cfg).u_count == doctest::Approx(1.0));
}

TEST_CASE("uniformity: no in-group activity raises EmptyActivity") {
    const auto g = group_of({1, 2});
    const Ledger ledger = Ledger::from_transactions({
        tx(1, addr(1), addr(50), "ethereum", "ethereum", "1", 100), // recipient outside group
    });
    CHECK_THROWS_AS(compute_uniformity(ledger, g, DetectorConfig{}), Error);
}

TEST_CASE("deterministic 1-d k-means fixed point") {
    const auto centers = detail::kmeans_1d({1.0, 1.1, 5.0, 5.2, 9.0}, 3);
    REQUIRE(centers.size() == 3);
    CHECK(centers[0] == doctest::Approx(1.05));
    CHECK(centers[1] == doctest::Approx(5.1));
    CHECK(centers[2] == doctest::Approx(9.0));
    // repeated runs are identical
    CHECK(detail::kmeans_1d({1.0, 1.1, 5.0, 5.2, 9.0}, 3) == centers);
}

TEST_CASE("sequential timeline bucketing") {
    CHECK(sequential_timeline({}).empty());

    const auto g = group_of({1, 2});
    auto chain_at = [&](std::int64_t ts, const char* value) {
        TransferChain c;
        c.transactions = {tx(static_cast<int>(ts), addr(1), addr(2), "ethereum", "optimism", value, ts),
                          tx(static_cast<int>(ts) + 1, addr(2), addr(1), "optimism", "ethereum",
                             value, ts + 60)};
        return c;
    };
    const auto rows = sequential_timeline(
        {chain_at(100, "10"), chain_at(200, "20"), chain_at(300, "30"), chain_at(2592000 + 50, "7")});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].bucket_start == 0);
    CHECK(rows[0].chain_count == 3);
    CHECK(rows[0].avg_value == doctest::Approx(20.0));
    CHECK(rows[1].bucket_start == 2592000);
    CHECK(rows[1].chain_count == 1);
}
