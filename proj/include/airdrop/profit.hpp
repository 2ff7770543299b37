#pragma once

#include "airdrop/ledger.hpp"

#include <optional>
#include <string>
#include <vector>

namespace airdrop {

struct RewardParams {
    double base_amount = 330.4883; // B, tokens per address
    double token_price = 0.1321;   // P, USD at launch
    Date earliest_date{2021, 6, 17};
    Date latest_date{2022, 4, 1};
    double early_max = 2.0;
    double early_min = 1.0;
    int eligibility_min_txs = 2;
    double eligibility_min_volume_usd = 1000.0;

    void validate() const; // throws Error(DomainError)
};

struct AddressActivity {
    Address address;
    std::vector<Transaction> bridge_txs; // cross-chain transfers sent by the address
    std::optional<Date> first_bridge_date;
    double total_bridge_volume_usd = 0.0; // V_i
    double total_gas_usd = 0.0;           // g_i
    double total_bridge_fee_usd = 0.0;    // B_phi
};

struct ProfitRow {
    Address address;
    double volume_usd = 0.0;
    double early_multiplier = 0.0; // m_e (0 when the address never bridged)
    int volume_multiplier = 0;     // m_v
    double reward_usd = 0.0;
    double fees_usd = 0.0;
    double net_profit_usd = 0.0;
};

struct ProfitReport {
    std::string group_id;
    std::vector<ProfitRow> rows; // one per group address, address order
    double total_reward_usd = 0.0;
    double total_fees_usd = 0.0;
    double total_net_profit_usd = 0.0;
    double mean_reward_per_address = 0.0;
};

/// Linear 2x -> 1x over [earliest_date, latest_date], clamped outside.
double early_bird_multiplier(Date first_date, const RewardParams& params);

/// 0 below the eligibility volume, then the 1/2/3 step bands.
int volume_multiplier(double volume_usd, const RewardParams& params);

/// R_i = B * m_e * m_v * P. Multipliers are accepted as direct inputs.
double compute_reward(double early_mult, int volume_mult, const RewardParams& params);

/// Sent/received differential valued at the daily close on the send date.
double compute_bridge_fee(const Transaction& sent, const Transaction& received,
                          const PriceTable& prices); // throws MissingPrice / NegativeFee

AddressActivity build_activity(const Ledger& ledger, const Address& address, const PriceTable& prices);

ProfitRow compute_net_profit(const AddressActivity& activity, const RewardParams& params);

ProfitReport group_profit_report(const Ledger& ledger, const AttackerGroup& group,
                                 const RewardParams& params, const PriceTable& prices);

} // namespace airdrop
