#pragma once

#include "airdrop/date.hpp"
#include "airdrop/decimal.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace airdrop {

/// Lowercase 0x-prefixed 40-hex-digit account address.
class Address {
public:
    Address() = default;
    static Address parse(std::string_view text); // normalizes case, throws Error(DomainError)

    const std::string& str() const { return value_; }
    auto operator<=>(const Address&) const = default;

private:
    explicit Address(std::string v) : value_(std::move(v)) {}
    std::string value_;
};

struct ChainId {
    enum class Kind { ethereum, optimism, arbitrum, polygon, xdai, other };

    Kind kind = Kind::ethereum;
    std::string label; // only for Kind::other

    static ChainId parse(std::string_view name);
    std::string name() const;
    /// Symbol whose daily close converts this chain's native gas fees to USD.
    std::string native_token() const;

    auto operator<=>(const ChainId&) const = default;
};

struct Transaction {
    std::string tx_hash;
    Address from;
    Address to;
    ChainId src_chain;
    ChainId dst_chain;
    std::string token;
    Decimal amount;
    std::optional<Decimal> amount_usd;
    std::int64_t timestamp = 0;
    Decimal gas_fee_native;
    Decimal transfer_fee_native;

    bool is_cross_chain() const { return src_chain != dst_chain; }
};

/// Immutable, timestamp-ordered transaction store with sender/receiver indexes.
class Ledger {
public:
    Ledger() = default;
    static Ledger from_transactions(std::vector<Transaction> txs); // throws on duplicate tx_hash

    const std::vector<Transaction>& transactions() const { return txs_; }
    /// Indices into transactions(), in ledger order.
    const std::vector<std::size_t>& sent_by(const Address& a) const;
    const std::vector<std::size_t>& received_by(const Address& a) const;

    bool operator==(const Ledger& other) const;

private:
    std::vector<Transaction> txs_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_sender_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_receiver_;
};

bool operator==(const Transaction& a, const Transaction& b);

struct AttackerGroup {
    std::string group_id;
    std::vector<Address> addresses; // sorted, unique, size >= 1

    bool contains(const Address& a) const;
    std::size_t size() const { return addresses.size(); }
};

class PriceTable {
public:
    void add(const std::string& token, Date date, double close_usd); // close_usd > 0
    double lookup(const std::string& token, Date date) const;        // throws Error(MissingPrice)
    bool has(const std::string& token, Date date) const;
    std::size_t size() const { return entries_.size(); }

    static PriceTable load_csv(const std::string& path); // header: token,date,close_usd

private:
    std::map<std::pair<std::string, std::string>, double> entries_;
};

enum class LedgerFormat { csv, jsonl };

/// CSV header (exact, ordered):
/// tx_hash,from,to,src_chain,dst_chain,token,amount,amount_usd,timestamp,gas_fee_native,transfer_fee_native
Ledger load_transactions(const std::string& path, LedgerFormat format);

std::vector<AttackerGroup> load_groups(const std::string& path); // JSON [{group_id, addresses[]}]

double price_lookup(const PriceTable& table, const std::string& token, Date date);

/// Writers for the same schemas (used by synth emission and the CLI).
void write_transactions_csv(const std::string& path, const Ledger& ledger);
void write_transactions_jsonl(const std::string& path, const Ledger& ledger);
void write_groups_json(const std::string& path, const std::vector<AttackerGroup>& groups);
void write_prices_csv(const std::string& path, const std::vector<std::tuple<std::string, Date, double>>& rows);

} // namespace airdrop
