#pragma once

#include "airdrop/detectors.hpp"
#include "airdrop/ledger.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace airdrop::synth {

/// Portable seeded PRNG (splitmix64): identical streams across languages
/// and platforms for a given seed.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();
    /// Uniform in [0, 1).
    double next_double();
    /// Uniform in [lo, hi).
    double next_range(double lo, double hi);
    /// Uniform integer in [0, bound).
    std::uint64_t next_below(std::uint64_t bound);

    static constexpr const char* kGeneratorId = "splitmix64-v1";

private:
    std::uint64_t state_;
};

struct SynthSpec {
    std::uint64_t seed = 1;
    int n_groups = 1;
    int addresses_per_group = 8;
    double funder_fanout_fraction = 1.0;
    double receiver_fanin_fraction = 1.0;
    std::vector<ChainId> chain_pool; // defaults to {ethereum, optimism, arbitrum} when empty
    int seq_chain_length = 3;        // transactions per planted chain; 0 disables planting
    double value_base = 1000.0;      // token units at the head of each planted chain
    double value_jitter_fraction = 0.005;
    std::int64_t time_jitter_seconds = 900;
    int uniform_tx_count = 3;
    double uniform_volume = 300.0;
    int background_tx_count = 50;

    void validate() const; // throws Error(SpecError)
};

struct PlantedChain {
    std::vector<std::string> tx_hashes; // ordered
};

struct GroupTruth {
    std::string group_id;
    std::optional<Address> funder;
    std::optional<Address> receiver;
    std::vector<PlantedChain> chains;
};

struct GroundTruth {
    std::string generator_id;
    std::uint64_t seed = 0;
    std::vector<GroupTruth> groups;
};

struct SynthOutput {
    Ledger ledger;
    std::vector<AttackerGroup> groups;
    GroundTruth truth;
};

SynthOutput generate(const SynthSpec& spec);

struct PatternScore {
    double precision = 1.0;
    double recall = 1.0;
};

struct LabelMatch {
    PatternScore funder;
    PatternScore receiver;
    PatternScore chains;
};

LabelMatch label_match(const FunderReceiverReport& report, const std::vector<TransferChain>& chains,
                       const GroupTruth& truth);

} // namespace airdrop::synth
