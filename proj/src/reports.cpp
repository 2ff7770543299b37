#include "airdrop/reports.hpp"

#include "airdrop/errors.hpp"
#include "airdrop/io_util.hpp"

#include <json.hpp>

#include <algorithm>

namespace airdrop {

using ordered_json = nlohmann::ordered_json;

DetectionReport run_detectors(const Ledger& ledger, const AttackerGroup& group,
                              const DetectorConfig& cfg) {
    cfg.validate();
    DetectionReport report;
    report.group_id = group.group_id;
    report.funder_receiver = detect_funder_receiver(ledger, group);
    report.chains = detect_sequential_transfers(ledger, group, cfg);
    report.coverage = sequential_coverage(report.chains, group);
    try {
        report.uniformity = compute_uniformity(ledger, group, cfg);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::EmptyActivity) throw;
    }
    report.timeline = sequential_timeline(report.chains);
    return report;
}

namespace {

ordered_json endpoint_json(const std::optional<std::pair<Address, double>>& entry,
                           const char* pct_key) {
    if (!entry) return nullptr;
    ordered_json j;
    j["address"] = entry->first.str();
    j[pct_key] = entry->second;
    return j;
}

ordered_json chain_json(const TransferChain& chain) {
    ordered_json j;
    ordered_json hashes = ordered_json::array();
    for (const Transaction& t : chain.transactions) hashes.push_back(t.tx_hash);
    j["tx_hashes"] = std::move(hashes);
    j["start_address"] = chain.start_address().str();
    j["end_address"] = chain.end_address().str();
    j["start_value"] = chain.start_value().to_string();
    j["end_value"] = chain.end_value().to_string();
    j["start_timestamp"] = chain.start_timestamp();
    j["end_timestamp"] = chain.end_timestamp();
    j["hop_count"] = chain.hop_count();
    return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

} // namespace

std::string detection_report_json(const DetectionReport& report) {
    ordered_json j;
    j["group_id"] = report.group_id;
    j["funder"] = endpoint_json(report.funder_receiver.funder, "percent_funded");
    j["receiver"] = endpoint_json(report.funder_receiver.receiver, "percent_received");
    ordered_json chains = ordered_json::array();
    for (const TransferChain& chain : report.chains) chains.push_back(chain_json(chain));
    j["chains"] = std::move(chains);
    j["coverage"] = {{"covered_fraction", report.coverage.covered_fraction},
                     {"avg_transfers_per_covered_address",
                      report.coverage.avg_transfers_per_covered_address}};
    if (report.uniformity)
        j["uniformity"] = {{"u_count", report.uniformity->u_count},
                           {"u_volume", report.uniformity->u_volume}};
    else
        j["uniformity"] = nullptr;
    ordered_json timeline = ordered_json::array();
    for (const TimelineBucket& bucket : report.timeline)
        timeline.push_back({{"bucket_start", bucket.bucket_start},
                            {"chain_count", bucket.chain_count},
                            {"avg_value", bucket.avg_value}});
    j["timeline"] = std::move(timeline);
    return dump(j);
}

std::string profit_report_json(const ProfitReport& report) {
    ordered_json j;
    j["group_id"] = report.group_id;
    ordered_json rows = ordered_json::array();
    for (const ProfitRow& row : report.rows)
        rows.push_back({{"address", row.address.str()},
                        {"V_usd", row.volume_usd},
                        {"m_e", row.early_multiplier},
                        {"m_v", row.volume_multiplier},
                        {"reward_usd", row.reward_usd},
                        {"fees_usd", row.fees_usd},
                        {"net_profit_usd", row.net_profit_usd}});
    j["rows"] = std::move(rows);
    j["total_reward_usd"] = report.total_reward_usd;
    j["total_fees_usd"] = report.total_fees_usd;
    j["total_net_profit_usd"] = report.total_net_profit_usd;
    j["mean_reward_per_address"] = report.mean_reward_per_address;
    return dump(j);
}

namespace {

const char* clamp_flag_name(mech::ClampFlag flag) {
    switch (flag) {
    case mech::ClampFlag::interior: return "interior";
    case mech::ClampFlag::at_lower_bound: return "at_lower_bound";
    case mech::ClampFlag::at_upper_bound: return "at_upper_bound";
    }
    return "interior";
}

ordered_json clamped_json(const mech::ClampedValue& v) {
    return {{"value", v.value}, {"unclamped", v.unclamped}, {"flag", clamp_flag_name(v.flag)}};
}

} // namespace

std::string mechanism_solution_json(const mech::MechanismSolution& solution) {
    ordered_json j;
    j["pi_s_star"] = clamped_json(solution.self_report_ratio);
    j["sigma_star"] = clamped_json(solution.sigma);
    j["expected_undetected_stage1"] = solution.expected_undetected_stage1;
    ordered_json menu = ordered_json::array();
    for (const mech::Contract& c : solution.menu)
        menu.push_back({{"task_complexity", c.task_complexity},
                        {"reward", c.reward},
                        {"reward_ratio", c.reward_ratio},
                        {"detection_prob", c.detection_prob}});
    j["menu"] = std::move(menu);
    j["lambda"] = solution.lambda;
    j["expected_undetected_stage3"] = solution.expected_undetected_stage3;
    j["organizer_utility"] = solution.organizer_utility;
    j["gamma"] = solution.gamma;
    j["hunters_M"] = solution.hunters;
    j["detection_set_size"] = solution.detection_set_size;
    return dump(j);
}

std::string ground_truth_json(const synth::GroundTruth& truth) {
    ordered_json j;
    j["generator_id"] = truth.generator_id;
    j["seed"] = truth.seed;
    ordered_json groups = ordered_json::array();
    for (const synth::GroupTruth& g : truth.groups) {
        ordered_json gj;
        gj["group_id"] = g.group_id;
        gj["funder"] = g.funder ? ordered_json(g.funder->str()) : ordered_json(nullptr);
        gj["receiver"] = g.receiver ? ordered_json(g.receiver->str()) : ordered_json(nullptr);
        ordered_json chains = ordered_json::array();
        for (const synth::PlantedChain& chain : g.chains) chains.push_back(chain.tx_hashes);
        gj["chains"] = std::move(chains);
        groups.push_back(std::move(gj));
    }
    j["groups"] = std::move(groups);
    return dump(j);
}

std::string profit_report_csv(const ProfitReport& report) {
    std::string out = "address,V_usd,m_e,m_v,reward_usd,fees_usd,net_profit_usd\n";
    for (const ProfitRow& row : report.rows) {
        out += row.address.str();
        out += ',' + fmt_double(row.volume_usd);
        out += ',' + fmt_double(row.early_multiplier);
        out += ',' + std::to_string(row.volume_multiplier);
        out += ',' + fmt_double(row.reward_usd);
        out += ',' + fmt_double(row.fees_usd);
        out += ',' + fmt_double(row.net_profit_usd);
        out += '\n';
    }
    return out;
}

std::string timeline_csv(const std::vector<TimelineBucket>& timeline) {
    std::string out = "bucket_start,chain_count,avg_value\n";
    for (const TimelineBucket& bucket : timeline) {
        out += std::to_string(bucket.bucket_start);
        out += ',' + std::to_string(bucket.chain_count);
        out += ',' + fmt_double(bucket.avg_value);
        out += '\n';
    }
    return out;
}

std::string fig1_csv(const std::vector<DetectionReport>& reports) {
    std::string out = "group_id,pct_funded,pct_received\n";
    for (const DetectionReport& r : reports) {
        const double funded = r.funder_receiver.funder ? r.funder_receiver.funder->second : 0.0;
        const double received =
            r.funder_receiver.receiver ? r.funder_receiver.receiver->second : 0.0;
        out += r.group_id + ',' + fmt_double(funded) + ',' + fmt_double(received) + '\n';
    }
    return out;
}

std::string fig3_csv(const std::vector<DetectionReport>& reports) {
    std::string out = "group_id,bucket_start,chain_count,avg_value\n";
    for (const DetectionReport& r : reports)
        for (const TimelineBucket& bucket : r.timeline) {
            out += r.group_id;
            out += ',' + std::to_string(bucket.bucket_start);
            out += ',' + std::to_string(bucket.chain_count);
            out += ',' + fmt_double(bucket.avg_value);
            out += '\n';
        }
    return out;
}

std::string fig8_csv(const std::vector<ProfitReport>& reports) {
    std::vector<const ProfitReport*> ranked;
    ranked.reserve(reports.size());
    for (const ProfitReport& r : reports) ranked.push_back(&r);
    std::stable_sort(ranked.begin(), ranked.end(), [](const ProfitReport* a, const ProfitReport* b) {
        if (a->total_net_profit_usd != b->total_net_profit_usd)
            return a->total_net_profit_usd > b->total_net_profit_usd;
        return a->group_id < b->group_id;
    });
    std::string out = "rank,group_id,total_reward_usd,total_fees_usd,total_net_profit_usd\n";
    int rank = 1;
    for (const ProfitReport* r : ranked) {
        out += std::to_string(rank++);
        out += ',' + r->group_id;
        out += ',' + fmt_double(r->total_reward_usd);
        out += ',' + fmt_double(r->total_fees_usd);
        out += ',' + fmt_double(r->total_net_profit_usd);
        out += '\n';
    }
    return out;
}

std::string sweep_csv(const mech::OrganizerParams& params, double mean_reward, double step) {
    if (!(step > 0.0 && step <= 1.0)) throw Error(ErrorCode::DomainError, "sweep step out of (0,1]");
    std::string out = "pi_s,sigma,U_o\n";
    const auto steps = static_cast<long>(1.0 / step);
    for (long i = 0; i <= steps; ++i) {
        const double pi_s = std::min(1.0, static_cast<double>(i) * step);
        const double sigma = mech::equilibrium_sigma(params, pi_s).value;
        const double u = mech::organizer_utility(params, pi_s, sigma, mean_reward);
        out += fmt_double(pi_s) + ',' + fmt_double(sigma) + ',' + fmt_double(u) + '\n';
    }
    return out;
}

namespace {

double require_number(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw Error(ErrorCode::SchemaError, std::string("missing numeric field '") + key + "'");
    return j.at(key).get<double>();
}

/// Accepts an ASCII alias alongside the primary key (kappa for the detection
/// cost, phi for the externality coefficient).
double number_with_alias(const nlohmann::json& j, const char* key, const char* alias) {
    if (j.contains(key)) return require_number(j, key);
    return require_number(j, alias);
}

} // namespace

SolveParams load_solve_params(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::SchemaError, std::string("params parse error: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::SchemaError, "params file must hold a JSON object");

    SolveParams out;
    out.organizer.value_per_reduction = require_number(j, "a");
    out.organizer.total_tokens = require_number(j, "T");
    out.organizer.total_addresses = static_cast<int>(require_number(j, "N"));
    out.organizer.detection_cost = number_with_alias(j, "kappa", "\xce\xba");
    out.organizer.baseline_detection = require_number(j, "p_o");
    out.organizer.externality = number_with_alias(j, "phi", "\xcf\x86");
    out.organizer.expected_hunters = require_number(j, "expected_hunters");

    out.gamma = require_number(j, "gamma");
    out.mean_reward = require_number(j, "mean_reward");
    if (!j.contains("types") || !j.at("types").is_array() || j.at("types").empty())
        throw Error(ErrorCode::SchemaError, "params file needs a non-empty 'types' array");
    for (const auto& tj : j.at("types")) {
        mech::HunterType t;
        t.capability = require_number(tj, "capability");
        t.variable_cost = require_number(tj, "variable_cost");
        t.fixed_cost = tj.contains("fixed_cost") ? require_number(tj, "fixed_cost") : 0.0;
        out.types.push_back(t);
    }
    out.hunters = j.contains("hunters") ? static_cast<int>(require_number(j, "hunters"))
                                        : static_cast<int>(out.types.size());
    if (j.contains("detected_rewards")) {
        if (!j.at("detected_rewards").is_array())
            throw Error(ErrorCode::SchemaError, "'detected_rewards' must be an array");
        for (const auto& v : j.at("detected_rewards")) {
            if (!v.is_number())
                throw Error(ErrorCode::SchemaError, "'detected_rewards' entries must be numbers");
            out.detected_rewards.push_back(v.get<double>());
        }
    }
    return out;
}

} // namespace airdrop
