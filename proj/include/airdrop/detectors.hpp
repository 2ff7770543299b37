#pragma once

#include "airdrop/ledger.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace airdrop {

struct DetectorConfig {
    double value_tolerance = 0.01;     // epsilon, fraction in (0,1)
    std::int64_t time_window = 1800;   // seconds
    double count_threshold = 2.0;      // epsilon_T
    double volume_threshold = 300.0;   // epsilon_F

    void validate() const; // throws Error(DomainError)
};

struct FunderReceiverReport {
    std::optional<std::pair<Address, double>> funder;   // (address, percent_funded)
    std::optional<std::pair<Address, double>> receiver; // (address, percent_received)
};

/// A maximal run of cross-chain transactions T1..Tm where each consecutive
/// pair shares the intermediate address/chain and satisfies the time and
/// value conditions.
struct TransferChain {
    std::vector<Transaction> transactions; // ledger order, size >= 2

    const Address& start_address() const { return transactions.front().from; }
    const Address& end_address() const { return transactions.back().to; }
    Decimal start_value() const { return transactions.front().amount; }
    Decimal end_value() const { return transactions.back().amount; }
    std::int64_t start_timestamp() const { return transactions.front().timestamp; }
    std::int64_t end_timestamp() const { return transactions.back().timestamp; }
    std::size_t hop_count() const { return transactions.size() - 1; }
};

struct UniformityScore {
    double u_count = 0.0;  // U_T
    double u_volume = 0.0; // U_F
};

struct SequentialCoverage {
    double covered_fraction = 0.0;
    double avg_transfers_per_covered_address = 0.0;
};

struct TimelineBucket {
    std::int64_t bucket_start = 0;
    std::size_t chain_count = 0;
    double avg_value = 0.0; // mean chain start value
};

FunderReceiverReport detect_funder_receiver(const Ledger& ledger, const AttackerGroup& group);

std::vector<TransferChain> detect_sequential_transfers(const Ledger& ledger, const AttackerGroup& group,
                                                       const DetectorConfig& cfg);

SequentialCoverage sequential_coverage(const std::vector<TransferChain>& chains,
                                       const AttackerGroup& group);

UniformityScore compute_uniformity(const Ledger& ledger, const AttackerGroup& group,
                                   const DetectorConfig& cfg); // throws Error(EmptyActivity)

constexpr std::int64_t kDefaultTimelineBucket = 2592000; // 30 days

std::vector<TimelineBucket> sequential_timeline(const std::vector<TransferChain>& chains,
                                                std::int64_t bucket_seconds = kDefaultTimelineBucket);

namespace detail {
/// Deterministic 1-D k-means: centers start at the 1/(k+1)..k/(k+1)
/// quantiles of the sorted data, then Lloyd iterations to a fixed point.
std::vector<double> kmeans_1d(const std::vector<double>& values, int k);
} // namespace detail

} // namespace airdrop
