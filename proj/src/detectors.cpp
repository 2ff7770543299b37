#include "airdrop/detectors.hpp"

#include "airdrop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

namespace airdrop {

void DetectorConfig::validate() const {
    if (!(value_tolerance > 0.0 && value_tolerance < 1.0))
        throw Error(ErrorCode::DomainError, "value_tolerance must be in (0,1)");
    if (time_window <= 0) throw Error(ErrorCode::DomainError, "time_window must be positive");
    if (count_threshold < 0.0 || volume_threshold < 0.0)
        throw Error(ErrorCode::DomainError, "uniformity thresholds must be non-negative");
}

FunderReceiverReport detect_funder_receiver(const Ledger& ledger, const AttackerGroup& group) {
    if (group.addresses.empty()) throw Error(ErrorCode::EmptyGroup, group.group_id);

    // funder: any sender, counted over distinct in-group recipients;
    // receiver: any recipient, counted over distinct in-group senders.
    std::map<Address, std::set<Address>> funded_by;
    std::map<Address, std::set<Address>> received_from;
    for (const Transaction& t : ledger.transactions()) {
        if (group.contains(t.to)) funded_by[t.from].insert(t.to);
        if (group.contains(t.from)) received_from[t.to].insert(t.from);
    }

    auto argmax = [&](const std::map<Address, std::set<Address>>& counts)
        -> std::optional<std::pair<Address, double>> {
        std::optional<Address> best;
        std::size_t best_count = 0;
        for (const auto& [addr, peers] : counts) {
            if (peers.size() > best_count) { // map order breaks ties toward the smaller address
                best = addr;
                best_count = peers.size();
            }
        }
        if (!best) return std::nullopt;
        return std::make_pair(*best, static_cast<double>(best_count) / static_cast<double>(group.size()));
    };

    return {argmax(funded_by), argmax(received_from)};
}

namespace {

bool hop_conditions_hold(const Transaction& out, const Transaction& in, const DetectorConfig& cfg) {
    if (out.to != in.from) return false;
    if (out.dst_chain != in.src_chain) return false;
    if (std::llabs(out.timestamp - in.timestamp) > cfg.time_window) return false;
    const double f_out = out.amount.to_double();
    const double f_in = in.amount.to_double();
    return std::abs((f_out - f_in) / f_out) <= cfg.value_tolerance;
}

} // namespace

std::vector<TransferChain> detect_sequential_transfers(const Ledger& ledger, const AttackerGroup& group,
                                                       const DetectorConfig& cfg) {
    cfg.validate();
    if (group.addresses.empty()) throw Error(ErrorCode::EmptyGroup, group.group_id);

    // Candidates: cross-chain transfers between group members, in ledger order.
    std::vector<std::size_t> candidates;
    const auto& txs = ledger.transactions();
    for (std::size_t i = 0; i < txs.size(); ++i) {
        if (txs[i].is_cross_chain() && group.contains(txs[i].from) && group.contains(txs[i].to))
            candidates.push_back(i);
    }

    std::vector<bool> consumed(txs.size(), false);
    std::vector<TransferChain> chains;
    for (std::size_t start : candidates) {
        if (consumed[start]) continue;
        std::vector<std::size_t> chain{start};
        consumed[start] = true;
        for (;;) {
            std::size_t cur = chain.back();
            // Greedy: earliest unconsumed candidate satisfying the hop conditions.
            std::size_t next = txs.size();
            for (std::size_t cand : candidates) {
                if (consumed[cand] || cand == cur) continue;
                if (hop_conditions_hold(txs[cur], txs[cand], cfg)) {
                    next = cand;
                    break; // candidates are in ledger order
                }
            }
            if (next == txs.size()) break;
            consumed[next] = true;
            chain.push_back(next);
        }
        if (chain.size() >= 2) {
            TransferChain out;
            for (std::size_t idx : chain) out.transactions.push_back(txs[idx]);
            chains.push_back(std::move(out));
        } else {
            consumed[start] = false; // a lone transfer may still join a later chain
        }
    }
    return chains;
}

SequentialCoverage sequential_coverage(const std::vector<TransferChain>& chains,
                                       const AttackerGroup& group) {
    std::map<Address, std::size_t> participations;
    for (const TransferChain& chain : chains) {
        std::set<Address> members;
        for (const Transaction& t : chain.transactions) {
            if (group.contains(t.from)) members.insert(t.from);
            if (group.contains(t.to)) members.insert(t.to);
        }
        for (const Address& a : members) ++participations[a];
    }
    if (participations.empty()) return {0.0, 0.0};

    double total = 0.0;
    for (const auto& [addr, count] : participations) total += static_cast<double>(count);
    return {static_cast<double>(participations.size()) / static_cast<double>(group.size()),
            total / static_cast<double>(participations.size())};
}

namespace detail {

std::vector<double> kmeans_1d(const std::vector<double>& values, int k) {
    if (values.empty() || k <= 0) throw Error(ErrorCode::DomainError, "kmeans_1d needs data and k > 0");
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());

    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(sorted.size() - 1);
        const auto lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
    };

    std::vector<double> centers;
    for (int j = 1; j <= k; ++j)
        centers.push_back(quantile(static_cast<double>(j) / static_cast<double>(k + 1)));

    for (int iter = 0; iter < 1000; ++iter) {
        std::vector<double> sums(centers.size(), 0.0);
        std::vector<std::size_t> counts(centers.size(), 0);
        for (double x : sorted) {
            std::size_t best = 0;
            double best_dist = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < centers.size(); ++c) {
                const double dist = std::abs(x - centers[c]);
                if (dist < best_dist) {
                    best_dist = dist;
                    best = c;
                }
            }
            sums[best] += x;
            ++counts[best];
        }
        bool changed = false;
        for (std::size_t c = 0; c < centers.size(); ++c) {
            if (counts[c] == 0) continue; // empty cluster keeps its center
            const double updated = sums[c] / static_cast<double>(counts[c]);
            if (updated != centers[c]) {
                centers[c] = updated;
                changed = true;
            }
        }
        if (!changed) break;
    }
    return centers;
}

} // namespace detail

namespace {

double uniform_fraction(const std::vector<double>& values, double threshold) {
    const int k = static_cast<int>(std::min<std::size_t>(3, values.size()));
    const std::vector<double> centers = detail::kmeans_1d(values, k);
    std::size_t within = 0;
    for (double x : values) {
        double best = std::numeric_limits<double>::infinity();
        for (double c : centers) best = std::min(best, std::abs(x - c));
        if (best <= threshold) ++within;
    }
    return static_cast<double>(within) / static_cast<double>(values.size());
}

} // namespace

UniformityScore compute_uniformity(const Ledger& ledger, const AttackerGroup& group,
                                   const DetectorConfig& cfg) {
    cfg.validate();
    if (group.addresses.empty()) throw Error(ErrorCode::EmptyGroup, group.group_id);

    // Per address: transactions sent to other members of the group.
    std::vector<double> counts;
    std::vector<double> volumes;
    bool any_activity = false;
    for (const Address& addr : group.addresses) {
        std::size_t count = 0;
        Decimal volume;
        for (std::size_t idx : ledger.sent_by(addr)) {
            const Transaction& t = ledger.transactions()[idx];
            if (t.to != addr && group.contains(t.to)) {
                ++count;
                volume = volume + t.amount;
            }
        }
        any_activity = any_activity || count > 0;
        counts.push_back(static_cast<double>(count));
        volumes.push_back(volume.to_double());
    }
    if (!any_activity)
        throw Error(ErrorCode::EmptyActivity, "no in-group transactions for " + group.group_id);

    return {uniform_fraction(counts, cfg.count_threshold),
            uniform_fraction(volumes, cfg.volume_threshold)};
}

std::vector<TimelineBucket> sequential_timeline(const std::vector<TransferChain>& chains,
                                                std::int64_t bucket_seconds) {
    if (bucket_seconds <= 0) throw Error(ErrorCode::DomainError, "bucket must be positive");
    std::map<std::int64_t, std::pair<std::size_t, double>> buckets; // start -> (count, value sum)
    for (const TransferChain& chain : chains) {
        const std::int64_t start = (chain.start_timestamp() / bucket_seconds) * bucket_seconds;
        auto& [count, sum] = buckets[start];
        ++count;
        sum += chain.start_value().to_double();
    }
    std::vector<TimelineBucket> out;
    for (const auto& [start, agg] : buckets)
        out.push_back({start, agg.first, agg.second / static_cast<double>(agg.first)});
    return out;
}

} // namespace airdrop
