#include "airdrop/synth.hpp"

#include "airdrop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace airdrop::synth {

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SplitMix64::next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::next_range(double lo, double hi) { return lo + (hi - lo) * next_double(); }

std::uint64_t SplitMix64::next_below(std::uint64_t bound) { return next() % bound; }

void SynthSpec::validate() const {
    auto fail = [](const char* msg) { throw Error(ErrorCode::SpecError, msg); };
    if (n_groups < 0 || addresses_per_group < 1) fail("group shape invalid");
    if (funder_fanout_fraction < 0.0 || funder_fanout_fraction > 1.0) fail("fanout fraction out of [0,1]");
    if (receiver_fanin_fraction < 0.0 || receiver_fanin_fraction > 1.0) fail("fanin fraction out of [0,1]");
    if (seq_chain_length < 0) fail("negative chain length");
    if (seq_chain_length == 1) fail("a planted chain needs at least 2 transactions");
    if (value_base <= 0.0) fail("value base must be positive");
    if (value_jitter_fraction < 0.0 || value_jitter_fraction >= 1.0) fail("value jitter out of range");
    if (time_jitter_seconds < 0) fail("negative time jitter");
    if (seq_chain_length >= 2 && time_jitter_seconds < 100) fail("time jitter too small to plant chains");
    if (uniform_tx_count < 0 || uniform_volume < 0.0 || background_tx_count < 0) fail("negative counts");
    std::set<ChainId> distinct(chain_pool.begin(), chain_pool.end());
    if (distinct.size() != chain_pool.size()) fail("duplicate chains in pool");
    if (seq_chain_length >= 2 && !chain_pool.empty() && chain_pool.size() < 2)
        fail("planting chains needs at least 2 chains in the pool");
}

namespace {

std::string hex_address(const char* tag, std::uint64_t group, std::uint64_t index) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "0x%s%018llx%020llx", tag,
                  static_cast<unsigned long long>(group), static_cast<unsigned long long>(index));
    return buf;
}

std::string hex_txid(std::uint64_t group, std::uint64_t kind, std::uint64_t seq) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "0x%016llx%016llx%032llx",
                  static_cast<unsigned long long>(group), static_cast<unsigned long long>(kind),
                  static_cast<unsigned long long>(seq));
    return buf;
}

struct Builder {
    std::vector<Transaction> txs;
    std::uint64_t seq = 0;

    std::string add(std::uint64_t group, std::uint64_t kind, const Address& from, const Address& to,
                    ChainId src, ChainId dst, std::int64_t time, std::int64_t value_micro) {
        Transaction t;
        t.tx_hash = hex_txid(group, kind, seq++);
        t.from = from;
        t.to = to;
        t.src_chain = src;
        t.dst_chain = dst;
        t.token = "TKN";
        t.amount = Decimal::from_micro(value_micro);
        t.timestamp = time;
        t.gas_fee_native = Decimal::from_micro(1000);          // 0.001
        t.transfer_fee_native = Decimal::from_micro(10000);    // 0.01
        txs.push_back(std::move(t));
        return txs.back().tx_hash;
    }
};

} // namespace

SynthOutput generate(const SynthSpec& spec) {
    spec.validate();
    SplitMix64 rng(spec.seed);

    std::vector<ChainId> pool = spec.chain_pool;
    if (pool.empty())
        pool = {ChainId::parse("ethereum"), ChainId::parse("optimism"), ChainId::parse("arbitrum")};

    Builder builder;
    SynthOutput out;
    out.truth.generator_id = SplitMix64::kGeneratorId;
    out.truth.seed = spec.seed;

    const int n = spec.addresses_per_group;
    const auto base_value_micro = static_cast<std::int64_t>(std::llround(spec.value_base * 1e6));

    for (int g = 0; g < spec.n_groups; ++g) {
        const auto gid = static_cast<std::uint64_t>(g);
        AttackerGroup group;
        group.group_id = "g" + std::to_string(g + 1);
        std::vector<Address> members;
        for (int i = 0; i < n; ++i)
            members.push_back(Address::parse(hex_address("aa", gid, static_cast<std::uint64_t>(i))));
        group.addresses = members;
        std::sort(group.addresses.begin(), group.addresses.end());

        GroupTruth truth;
        truth.group_id = group.group_id;
        std::int64_t cursor = 1600000000 + static_cast<std::int64_t>(g) * 40000000;

        // Initial funding: one external funder, same-chain, fanout of the group.
        const int fund_count = static_cast<int>(std::ceil(spec.funder_fanout_fraction * n));
        if (fund_count > 0) {
            const Address funder = Address::parse(hex_address("f0", gid, 0));
            truth.funder = funder;
            for (int i = 0; i < fund_count; ++i) {
                builder.add(gid, 1, funder, members[static_cast<std::size_t>(i)], pool[0], pool[0],
                            cursor, 10000000); // 10 tokens
                cursor += 60;
            }
        }
        cursor += 2 * spec.time_jitter_seconds + 1000;

        // Sequential chains over disjoint member runs; jitter lands in
        // (jitter/2, jitter], so thresholds at the jitter recover exactly and
        // thresholds at half the jitter reject every hop.
        if (spec.seq_chain_length >= 2) {
            const int run = spec.seq_chain_length + 1; // addresses per chain
            const int chain_count = n / run;
            for (int c = 0; c < chain_count; ++c) {
                PlantedChain planted;
                std::int64_t value = base_value_micro + static_cast<std::int64_t>(c) * 1000000;
                std::int64_t t = cursor;
                for (int k = 0; k < spec.seq_chain_length; ++k) {
                    const auto a = static_cast<std::size_t>(c * run + k);
                    const ChainId src = pool[static_cast<std::size_t>(k) % pool.size()];
                    const ChainId dst = pool[static_cast<std::size_t>(k + 1) % pool.size()];
                    planted.tx_hashes.push_back(
                        builder.add(gid, 2, members[a], members[a + 1], src, dst, t, value));
                    const double q = rng.next_range(0.55, 0.95);
                    t += static_cast<std::int64_t>(
                        std::floor(static_cast<double>(spec.time_jitter_seconds) * q));
                    value -= static_cast<std::int64_t>(
                        std::floor(static_cast<double>(value) * spec.value_jitter_fraction * q));
                }
                truth.chains.push_back(std::move(planted));
                cursor = t + 2 * spec.time_jitter_seconds + 1000;
            }
        }
        cursor += 2 * spec.time_jitter_seconds + 1000;

        // Cross-chain consolidation into one external receiver.
        const int fanin_count = static_cast<int>(std::ceil(spec.receiver_fanin_fraction * n));
        if (fanin_count > 0) {
            const Address receiver = Address::parse(hex_address("cc", gid, 0));
            truth.receiver = receiver;
            for (int i = 0; i < fanin_count; ++i) {
                const ChainId src = pool[static_cast<std::size_t>(i) % pool.size()];
                ChainId dst = pool[0];
                if (dst == src) dst = pool[1 % pool.size()];
                builder.add(gid, 3, members[static_cast<std::size_t>(i)], receiver, src, dst, cursor,
                            50000000 + static_cast<std::int64_t>(i) * 1000000);
                cursor += 2 * spec.time_jitter_seconds + 600;
            }
        }
        cursor += 2 * spec.time_jitter_seconds + 1000;

        // Same-chain filler giving every member a uniform in-group count/volume.
        if (spec.uniform_tx_count > 0 && n > 1) {
            const auto slice = static_cast<std::int64_t>(
                std::llround(spec.uniform_volume * 1e6 / spec.uniform_tx_count));
            for (int i = 0; i < n; ++i) {
                for (int k = 0; k < spec.uniform_tx_count; ++k) {
                    builder.add(gid, 4, members[static_cast<std::size_t>(i)],
                                members[static_cast<std::size_t>((i + 1) % n)], pool[0], pool[0],
                                cursor, slice);
                    cursor += 120;
                }
            }
        }

        out.groups.push_back(std::move(group));
        out.truth.groups.push_back(std::move(truth));
    }

    // Background noise over an address pool disjoint from every group.
    if (spec.background_tx_count > 0) {
        const std::uint64_t pool_size = 16 + static_cast<std::uint64_t>(spec.background_tx_count) / 4;
        std::int64_t t = 1580000000;
        for (int i = 0; i < spec.background_tx_count; ++i) {
            const std::uint64_t a = rng.next_below(pool_size);
            std::uint64_t b = rng.next_below(pool_size);
            if (b == a) b = (b + 1) % pool_size;
            const ChainId src = pool[rng.next_below(pool.size())];
            const ChainId dst = pool[rng.next_below(pool.size())];
            const auto value = static_cast<std::int64_t>(1000000 + rng.next_below(99000000));
            builder.add(0xffff, 9, Address::parse(hex_address("bb", 0, a)),
                        Address::parse(hex_address("bb", 0, b)), src, dst, t, value);
            t += 1 + static_cast<std::int64_t>(rng.next_below(3600));
        }
    }

    out.ledger = Ledger::from_transactions(std::move(builder.txs));
    return out;
}

namespace {

PatternScore set_score(const std::set<std::vector<std::string>>& detected,
                       const std::set<std::vector<std::string>>& planted) {
    std::size_t hits = 0;
    for (const auto& d : detected)
        if (planted.count(d)) ++hits;
    PatternScore score;
    score.precision = detected.empty()
                          ? 1.0
                          : static_cast<double>(hits) / static_cast<double>(detected.size());
    score.recall = planted.empty()
                       ? 1.0
                       : static_cast<double>(hits) / static_cast<double>(planted.size());
    return score;
}

std::set<std::vector<std::string>> singleton(const std::optional<Address>& a) {
    std::set<std::vector<std::string>> s;
    if (a) s.insert({a->str()});
    return s;
}

} // namespace

LabelMatch label_match(const FunderReceiverReport& report, const std::vector<TransferChain>& chains,
                       const GroupTruth& truth) {
    LabelMatch match;
    std::optional<Address> detected_funder;
    if (report.funder) detected_funder = report.funder->first;
    std::optional<Address> detected_receiver;
    if (report.receiver) detected_receiver = report.receiver->first;
    match.funder = set_score(singleton(detected_funder), singleton(truth.funder));
    match.receiver = set_score(singleton(detected_receiver), singleton(truth.receiver));

    std::set<std::vector<std::string>> detected_chains;
    for (const TransferChain& chain : chains) {
        std::vector<std::string> hashes;
        for (const Transaction& t : chain.transactions) hashes.push_back(t.tx_hash);
        detected_chains.insert(std::move(hashes));
    }
    std::set<std::vector<std::string>> planted_chains;
    for (const PlantedChain& chain : truth.chains) planted_chains.insert(chain.tx_hashes);
    match.chains = set_score(detected_chains, planted_chains);
    return match;
}

} // namespace airdrop::synth
