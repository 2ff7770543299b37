#include "airdrop/profit.hpp"

#include "airdrop/errors.hpp"

#include <algorithm>

namespace airdrop {

void RewardParams::validate() const {
    if (!(base_amount > 0.0 && token_price > 0.0))
        throw Error(ErrorCode::DomainError, "base amount and token price must be positive");
    if (!(earliest_date < latest_date))
        throw Error(ErrorCode::DomainError, "earliest_date must precede latest_date");
    if (!(early_max >= early_min && early_min > 0.0))
        throw Error(ErrorCode::DomainError, "early multiplier range invalid");
    if (eligibility_min_txs < 0 || eligibility_min_volume_usd < 0.0)
        throw Error(ErrorCode::DomainError, "eligibility thresholds must be non-negative");
}

double early_bird_multiplier(Date first_date, const RewardParams& params) {
    params.validate();
    const double span = static_cast<double>(diff_days(params.latest_date, params.earliest_date));
    const double elapsed = static_cast<double>(diff_days(first_date, params.earliest_date));
    const double m =
        params.early_max - (params.early_max - params.early_min) * (elapsed / span);
    return std::clamp(m, params.early_min, params.early_max);
}

int volume_multiplier(double volume_usd, const RewardParams& params) {
    if (volume_usd < 0.0) throw Error(ErrorCode::DomainError, "negative bridge volume");
    if (volume_usd < params.eligibility_min_volume_usd) return 0;
    if (volume_usd < 2000.0) return 1;
    if (volume_usd < 3000.0) return 2;
    return 3;
}

double compute_reward(double early_mult, int volume_mult, const RewardParams& params) {
    params.validate();
    if (early_mult <= 0.0 || volume_mult < 0)
        throw Error(ErrorCode::DomainError, "multipliers out of domain");
    return params.base_amount * early_mult * static_cast<double>(volume_mult) * params.token_price;
}

double compute_bridge_fee(const Transaction& sent, const Transaction& received,
                          const PriceTable& prices) {
    const Decimal differential = sent.amount - received.amount;
    if (differential.is_negative())
        throw Error(ErrorCode::NegativeFee, "received exceeds sent for " + sent.tx_hash);
    const double price = prices.lookup(sent.token, date_from_unix(sent.timestamp));
    return differential.to_double() * price;
}

AddressActivity build_activity(const Ledger& ledger, const Address& address,
                               const PriceTable& prices) {
    AddressActivity activity;
    activity.address = address;
    for (std::size_t idx : ledger.sent_by(address)) {
        const Transaction& t = ledger.transactions()[idx];
        if (!t.is_cross_chain()) continue;
        const Date date = date_from_unix(t.timestamp);
        activity.bridge_txs.push_back(t);
        if (!activity.first_bridge_date || date < *activity.first_bridge_date)
            activity.first_bridge_date = date;

        if (t.amount_usd)
            activity.total_bridge_volume_usd += t.amount_usd->to_double();
        else
            activity.total_bridge_volume_usd += t.amount.to_double() * prices.lookup(t.token, date);

        activity.total_gas_usd +=
            t.gas_fee_native.to_double() * prices.lookup(t.src_chain.native_token(), date);
        activity.total_bridge_fee_usd +=
            t.transfer_fee_native.to_double() * prices.lookup(t.token, date);
    }
    return activity;
}

ProfitRow compute_net_profit(const AddressActivity& activity, const RewardParams& params) {
    params.validate();
    ProfitRow row;
    row.address = activity.address;
    row.volume_usd = activity.total_bridge_volume_usd;
    row.fees_usd = activity.total_gas_usd + activity.total_bridge_fee_usd;
    row.volume_multiplier = volume_multiplier(row.volume_usd, params);
    if (activity.first_bridge_date)
        row.early_multiplier = early_bird_multiplier(*activity.first_bridge_date, params);

    const bool eligible =
        row.volume_multiplier > 0 &&
        activity.bridge_txs.size() >= static_cast<std::size_t>(params.eligibility_min_txs);
    if (eligible)
        row.reward_usd = compute_reward(row.early_multiplier, row.volume_multiplier, params);
    row.net_profit_usd = row.reward_usd - row.fees_usd;
    return row;
}

ProfitReport group_profit_report(const Ledger& ledger, const AttackerGroup& group,
                                 const RewardParams& params, const PriceTable& prices) {
    ProfitReport report;
    report.group_id = group.group_id;
    for (const Address& address : group.addresses) {
        ProfitRow row = compute_net_profit(build_activity(ledger, address, prices), params);
        report.total_reward_usd += row.reward_usd;
        report.total_fees_usd += row.fees_usd;
        report.total_net_profit_usd += row.net_profit_usd;
        report.rows.push_back(std::move(row));
    }
    if (!report.rows.empty())
        report.mean_reward_per_address = report.total_reward_usd / static_cast<double>(report.rows.size());
    return report;
}

} // namespace airdrop
