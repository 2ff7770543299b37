#include "airdrop/ledger.hpp"

#include "airdrop/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

namespace airdrop {

using nlohmann::json;

Address Address::parse(std::string_view text) {
    if (text.size() != 42 || text[0] != '0' || (text[1] != 'x' && text[1] != 'X'))
        throw Error(ErrorCode::DomainError, "malformed address: " + std::string(text));
    std::string normalized = "0x";
    normalized.reserve(42);
    for (std::size_t i = 2; i < text.size(); ++i) {
        char c = static_cast<char>(std::tolower(static_cast<unsigned char>(text[i])));
        bool hex = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
        if (!hex) throw Error(ErrorCode::DomainError, "malformed address: " + std::string(text));
        normalized.push_back(c);
    }
    return Address(std::move(normalized));
}

ChainId ChainId::parse(std::string_view name) {
    std::string lower;
    for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "ethereum") return {Kind::ethereum, {}};
    if (lower == "optimism") return {Kind::optimism, {}};
    if (lower == "arbitrum") return {Kind::arbitrum, {}};
    if (lower == "polygon") return {Kind::polygon, {}};
    if (lower == "xdai") return {Kind::xdai, {}};
    if (lower.empty()) throw Error(ErrorCode::DomainError, "empty chain name");
    return {Kind::other, lower};
}

std::string ChainId::name() const {
    switch (kind) {
        case Kind::ethereum: return "ethereum";
        case Kind::optimism: return "optimism";
        case Kind::arbitrum: return "arbitrum";
        case Kind::polygon: return "polygon";
        case Kind::xdai: return "xdai";
        case Kind::other: return label;
    }
    return label;
}

std::string ChainId::native_token() const {
    switch (kind) {
        case Kind::ethereum:
        case Kind::optimism:
        case Kind::arbitrum: return "ETH";
        case Kind::polygon: return "MATIC";
        case Kind::xdai: return "XDAI";
        case Kind::other: break;
    }
    std::string upper;
    for (char c : label) upper.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    return upper;
}

bool operator==(const Transaction& a, const Transaction& b) {
    return a.tx_hash == b.tx_hash && a.from == b.from && a.to == b.to && a.src_chain == b.src_chain &&
           a.dst_chain == b.dst_chain && a.token == b.token && a.amount == b.amount &&
           a.amount_usd == b.amount_usd && a.timestamp == b.timestamp &&
           a.gas_fee_native == b.gas_fee_native && a.transfer_fee_native == b.transfer_fee_native;
}

Ledger Ledger::from_transactions(std::vector<Transaction> txs) {
    std::stable_sort(txs.begin(), txs.end(), [](const Transaction& a, const Transaction& b) {
        if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
        return a.tx_hash < b.tx_hash;
    });
    std::unordered_set<std::string> seen;
    Ledger ledger;
    for (std::size_t i = 0; i < txs.size(); ++i) {
        const Transaction& t = txs[i];
        if (!seen.insert(t.tx_hash).second)
            throw Error(ErrorCode::DuplicateTxHash, t.tx_hash);
        if (!t.amount.is_positive())
            throw Error(ErrorCode::NonPositiveAmount, "tx " + t.tx_hash);
        if (t.timestamp <= 0)
            throw Error(ErrorCode::DomainError, "non-positive timestamp in tx " + t.tx_hash);
        ledger.by_sender_[t.from.str()].push_back(i);
        ledger.by_receiver_[t.to.str()].push_back(i);
    }
    ledger.txs_ = std::move(txs);
    return ledger;
}

const std::vector<std::size_t>& Ledger::sent_by(const Address& a) const {
    static const std::vector<std::size_t> kEmpty;
    auto it = by_sender_.find(a.str());
    return it == by_sender_.end() ? kEmpty : it->second;
}

const std::vector<std::size_t>& Ledger::received_by(const Address& a) const {
    static const std::vector<std::size_t> kEmpty;
    auto it = by_receiver_.find(a.str());
    return it == by_receiver_.end() ? kEmpty : it->second;
}

bool Ledger::operator==(const Ledger& other) const { return txs_ == other.txs_; }

bool AttackerGroup::contains(const Address& a) const {
    return std::binary_search(addresses.begin(), addresses.end(), a);
}

void PriceTable::add(const std::string& token, Date date, double close_usd) {
    if (!(close_usd > 0.0))
        throw Error(ErrorCode::DomainError, "non-positive price for " + token + " " + to_string(date));
    entries_[{token, to_string(date)}] = close_usd;
}

bool PriceTable::has(const std::string& token, Date date) const {
    return entries_.count({token, to_string(date)}) > 0;
}

double PriceTable::lookup(const std::string& token, Date date) const {
    auto it = entries_.find({token, to_string(date)});
    if (it == entries_.end())
        throw Error(ErrorCode::MissingPrice, token + " @ " + to_string(date));
    return it->second;
}

double price_lookup(const PriceTable& table, const std::string& token, Date date) {
    return table.lookup(token, date);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

constexpr const char* kCsvHeader =
    "tx_hash,from,to,src_chain,dst_chain,token,amount,amount_usd,timestamp,gas_fee_native,transfer_fee_native";

std::int64_t parse_timestamp(const std::string& text, std::size_t line) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || value <= 0)
        throw Error(ErrorCode::SchemaError, "line " + std::to_string(line) + ", field timestamp");
    return value;
}

Transaction row_to_transaction(const std::vector<std::string>& f, std::size_t line) {
    auto field = [&](const char* name, auto parser, std::size_t idx) {
        try {
            return parser(f[idx]);
        } catch (const Error&) {
            throw Error(ErrorCode::SchemaError, "line " + std::to_string(line) + ", field " + name);
        }
    };
    Transaction t;
    t.tx_hash = f[0];
    if (t.tx_hash.empty())
        throw Error(ErrorCode::SchemaError, "line " + std::to_string(line) + ", field tx_hash");
    t.from = field("from", [](const std::string& s) { return Address::parse(s); }, 1);
    t.to = field("to", [](const std::string& s) { return Address::parse(s); }, 2);
    t.src_chain = field("src_chain", [](const std::string& s) { return ChainId::parse(s); }, 3);
    t.dst_chain = field("dst_chain", [](const std::string& s) { return ChainId::parse(s); }, 4);
    t.token = f[5];
    if (t.token.empty())
        throw Error(ErrorCode::SchemaError, "line " + std::to_string(line) + ", field token");
    t.amount = field("amount", [](const std::string& s) { return Decimal::parse(s); }, 6);
    if (!t.amount.is_positive())
        throw Error(ErrorCode::NonPositiveAmount, "line " + std::to_string(line));
    if (!f[7].empty())
        t.amount_usd = field("amount_usd", [](const std::string& s) { return Decimal::parse(s); }, 7);
    if (t.amount_usd && t.amount_usd->is_negative())
        throw Error(ErrorCode::SchemaError, "line " + std::to_string(line) + ", field amount_usd");
    t.timestamp = parse_timestamp(f[8], line);
    t.gas_fee_native = field("gas_fee_native", [](const std::string& s) { return Decimal::parse(s); }, 9);
    t.transfer_fee_native =
        field("transfer_fee_native", [](const std::string& s) { return Decimal::parse(s); }, 10);
    if (t.gas_fee_native.is_negative() || t.transfer_fee_native.is_negative())
        throw Error(ErrorCode::SchemaError, "line " + std::to_string(line) + ", field fee");
    return t;
}

Transaction json_to_transaction(const json& row, std::size_t line) {
    std::vector<std::string> f(11);
    auto get = [&](const char* key, std::size_t idx, bool required = true) {
        if (!row.contains(key)) {
            if (required)
                throw Error(ErrorCode::SchemaError, "line " + std::to_string(line) + ", field " + key);
            return;
        }
        const json& v = row.at(key);
        if (v.is_string())
            f[idx] = v.get<std::string>();
        else if (v.is_number_integer())
            f[idx] = std::to_string(v.get<std::int64_t>());
        else if (v.is_null() && !required)
            f[idx] = "";
        else
            throw Error(ErrorCode::SchemaError, "line " + std::to_string(line) + ", field " + key);
    };
    get("tx_hash", 0);
    get("from", 1);
    get("to", 2);
    get("src_chain", 3);
    get("dst_chain", 4);
    get("token", 5);
    get("amount", 6);
    get("amount_usd", 7, false);
    get("timestamp", 8);
    get("gas_fee_native", 9);
    get("transfer_fee_native", 10);
    return row_to_transaction(f, line);
}

} // namespace

Ledger load_transactions(const std::string& path, LedgerFormat format) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::MissingFile, path);

    std::vector<Transaction> txs;
    std::string line;
    std::size_t line_no = 0;
    if (format == LedgerFormat::csv) {
        if (!std::getline(in, line)) throw Error(ErrorCode::SchemaError, "empty file " + path);
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line != kCsvHeader)
            throw Error(ErrorCode::SchemaError, "line 0, unexpected CSV header");
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line == "\r") continue;
            auto fields = split_csv_line(line);
            if (fields.size() != 11)
                throw Error(ErrorCode::SchemaError,
                            "line " + std::to_string(line_no) + ", expected 11 fields, got " +
                                std::to_string(fields.size()));
            txs.push_back(row_to_transaction(fields, line_no));
        }
    } else {
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line == "\r") continue;
            json row;
            try {
                row = json::parse(line);
            } catch (const json::exception&) {
                throw Error(ErrorCode::SchemaError, "line " + std::to_string(line_no) + ", invalid JSON");
            }
            txs.push_back(json_to_transaction(row, line_no));
        }
    }
    return Ledger::from_transactions(std::move(txs));
}

std::vector<AttackerGroup> load_groups(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::MissingFile, path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception&) {
        throw Error(ErrorCode::SchemaError, "invalid groups JSON in " + path);
    }
    if (!doc.is_array()) throw Error(ErrorCode::SchemaError, "groups file must be a JSON array");

    std::vector<AttackerGroup> groups;
    std::set<std::string> ids;
    for (const json& entry : doc) {
        if (!entry.is_object() || !entry.contains("group_id") || !entry.contains("addresses"))
            throw Error(ErrorCode::SchemaError, "group entry missing group_id or addresses");
        AttackerGroup g;
        g.group_id = entry.at("group_id").get<std::string>();
        if (!ids.insert(g.group_id).second) throw Error(ErrorCode::DuplicateGroupId, g.group_id);
        for (const json& a : entry.at("addresses")) {
            try {
                g.addresses.push_back(Address::parse(a.get<std::string>()));
            } catch (const Error&) {
                throw Error(ErrorCode::SchemaError, "bad address in group " + g.group_id);
            }
        }
        std::sort(g.addresses.begin(), g.addresses.end());
        g.addresses.erase(std::unique(g.addresses.begin(), g.addresses.end()), g.addresses.end());
        if (g.addresses.empty()) throw Error(ErrorCode::EmptyGroup, g.group_id);
        groups.push_back(std::move(g));
    }
    return groups;
}

PriceTable PriceTable::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::MissingFile, path);
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::SchemaError, "empty price file " + path);
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line != "token,date,close_usd")
        throw Error(ErrorCode::SchemaError, "unexpected price CSV header");
    PriceTable table;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 3)
            throw Error(ErrorCode::SchemaError, "price line " + std::to_string(line_no));
        try {
            table.add(fields[0], parse_date(fields[1]), std::stod(fields[2]));
        } catch (const Error&) {
            throw Error(ErrorCode::SchemaError, "price line " + std::to_string(line_no));
        } catch (const std::exception&) {
            throw Error(ErrorCode::SchemaError, "price line " + std::to_string(line_no));
        }
    }
    return table;
}

namespace {

std::string tx_csv_row(const Transaction& t) {
    std::ostringstream out;
    out << t.tx_hash << ',' << t.from.str() << ',' << t.to.str() << ',' << t.src_chain.name() << ','
        << t.dst_chain.name() << ',' << t.token << ',' << t.amount.to_string() << ','
        << (t.amount_usd ? t.amount_usd->to_string() : "") << ',' << t.timestamp << ','
        << t.gas_fee_native.to_string() << ',' << t.transfer_fee_native.to_string();
    return out.str();
}

} // namespace

void write_transactions_csv(const std::string& path, const Ledger& ledger) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::MissingFile, "cannot write " + path);
    out << kCsvHeader << '\n';
    for (const Transaction& t : ledger.transactions()) out << tx_csv_row(t) << '\n';
}

void write_transactions_jsonl(const std::string& path, const Ledger& ledger) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::MissingFile, "cannot write " + path);
    for (const Transaction& t : ledger.transactions()) {
        json row{{"tx_hash", t.tx_hash},
                 {"from", t.from.str()},
                 {"to", t.to.str()},
                 {"src_chain", t.src_chain.name()},
                 {"dst_chain", t.dst_chain.name()},
                 {"token", t.token},
                 {"amount", t.amount.to_string()},
                 {"timestamp", t.timestamp},
                 {"gas_fee_native", t.gas_fee_native.to_string()},
                 {"transfer_fee_native", t.transfer_fee_native.to_string()}};
        if (t.amount_usd) row["amount_usd"] = t.amount_usd->to_string();
        out << row.dump() << '\n';
    }
}

void write_groups_json(const std::string& path, const std::vector<AttackerGroup>& groups) {
    json doc = json::array();
    for (const AttackerGroup& g : groups) {
        json addresses = json::array();
        for (const Address& a : g.addresses) addresses.push_back(a.str());
        doc.push_back({{"group_id", g.group_id}, {"addresses", addresses}});
    }
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::MissingFile, "cannot write " + path);
    out << doc.dump(2) << '\n';
}

void write_prices_csv(const std::string& path,
                      const std::vector<std::tuple<std::string, Date, double>>& rows) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::MissingFile, "cannot write " + path);
    out << "token,date,close_usd\n";
    char buf[64];
    for (const auto& [token, date, price] : rows) {
        std::snprintf(buf, sizeof(buf), "%.10g", price);
        out << token << ',' << to_string(date) << ',' << buf << '\n';
    }
}

} // namespace airdrop
