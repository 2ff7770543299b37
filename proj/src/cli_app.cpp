#include "airdrop/cli_app.hpp"

#include "airdrop/errors.hpp"
#include "airdrop/io_util.hpp"
#include "airdrop/oracles.hpp"
#include "airdrop/reports.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cctype>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <functional>
#include <iostream>
#include <mutex>
#include <set>
#include <thread>

namespace airdrop::cli {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

constexpr const char* kVersion = "1.0.0";

std::string upper(std::string s) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int default_jobs() {
    if (const char* env = std::getenv("AIRDROP_FORGE_JOBS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

/// Run f(i) for i in [0, count) on up to `jobs` worker threads. Exceptions
/// propagate; results land in index order so output stays deterministic.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& f) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    const int n_threads = std::min<int>(jobs, static_cast<int>(count));
    threads.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);
}

struct Manifest {
    std::string command;
    ordered_json parameters = ordered_json::object();
    ordered_json inputs = ordered_json::object();

    void add_input(const std::string& path) { inputs[path] = sha256_file(path); }

    void write(const fs::path& out_dir) const {
        ordered_json j;
        j["tool"] = "airdrop_forge";
        j["version"] = kVersion;
        j["command"] = command;
        j["timestamp"] = utc_timestamp();
        j["parameters"] = parameters;
        j["inputs"] = inputs;
        atomic_write((out_dir / "run_manifest.json").string(), j.dump(2) + "\n");
    }
};

fs::path prepare_out_dir(const std::string& out) {
    fs::path dir(out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::MissingFile, "cannot create output directory " + out);
    return dir;
}

LedgerFormat parse_format(const std::string& name) {
    if (name == "csv") return LedgerFormat::csv;
    if (name == "jsonl") return LedgerFormat::jsonl;
    throw Error(ErrorCode::SchemaError, "unknown ledger format '" + name + "'");
}

// --- detect ---

struct DetectArgs {
    std::string ledger_path;
    std::string groups_path;
    std::string format = "csv";
    std::string out = "out";
    DetectorConfig cfg;
    int jobs = default_jobs();
};

int run_detect(const DetectArgs& args, std::ostream& out) {
    args.cfg.validate();
    const Ledger ledger = load_transactions(args.ledger_path, parse_format(args.format));
    const std::vector<AttackerGroup> groups = load_groups(args.groups_path);
    const fs::path dir = prepare_out_dir(args.out);

    std::vector<DetectionReport> reports(groups.size());
    parallel_for(groups.size(), args.jobs,
                 [&](std::size_t i) { reports[i] = run_detectors(ledger, groups[i], args.cfg); });

    for (const DetectionReport& report : reports) {
        atomic_write((dir / ("detect_" + report.group_id + ".json")).string(),
                     detection_report_json(report));
        atomic_write((dir / ("timeline_" + report.group_id + ".csv")).string(),
                     timeline_csv(report.timeline));
    }
    atomic_write((dir / "fig1.csv").string(), fig1_csv(reports));
    atomic_write((dir / "fig3.csv").string(), fig3_csv(reports));

    Manifest manifest;
    manifest.command = "detect";
    manifest.parameters["ledger_format"] = args.format;
    manifest.parameters["value_tolerance"] = args.cfg.value_tolerance;
    manifest.parameters["time_window"] = args.cfg.time_window;
    manifest.parameters["count_threshold"] = args.cfg.count_threshold;
    manifest.parameters["volume_threshold"] = args.cfg.volume_threshold;
    manifest.add_input(args.ledger_path);
    manifest.add_input(args.groups_path);
    manifest.write(dir);

    out << "detect: " << groups.size() << " group(s) -> " << dir.string() << "\n";
    return 0;
}

// --- profit ---

struct ProfitArgs {
    std::string ledger_path;
    std::string groups_path;
    std::string prices_path;
    std::string format = "csv";
    std::string out = "out";
    RewardParams params;
    std::string earliest_date;
    std::string latest_date;
    int jobs = default_jobs();
};

int run_profit(const ProfitArgs& args, std::ostream& out) {
    RewardParams params = args.params;
    if (!args.earliest_date.empty()) params.earliest_date = parse_date(args.earliest_date);
    if (!args.latest_date.empty()) params.latest_date = parse_date(args.latest_date);
    params.validate();

    const Ledger ledger = load_transactions(args.ledger_path, parse_format(args.format));
    const std::vector<AttackerGroup> groups = load_groups(args.groups_path);
    const PriceTable prices = PriceTable::load_csv(args.prices_path);
    const fs::path dir = prepare_out_dir(args.out);

    std::vector<ProfitReport> reports(groups.size());
    parallel_for(groups.size(), args.jobs, [&](std::size_t i) {
        reports[i] = group_profit_report(ledger, groups[i], params, prices);
    });

    for (const ProfitReport& report : reports) {
        atomic_write((dir / ("profit_" + report.group_id + ".json")).string(),
                     profit_report_json(report));
        atomic_write((dir / ("profit_" + report.group_id + ".csv")).string(),
                     profit_report_csv(report));
    }
    atomic_write((dir / "fig8.csv").string(), fig8_csv(reports));

    Manifest manifest;
    manifest.command = "profit";
    manifest.parameters["ledger_format"] = args.format;
    manifest.parameters["base_amount"] = params.base_amount;
    manifest.parameters["token_price"] = params.token_price;
    manifest.parameters["earliest_date"] = to_string(params.earliest_date);
    manifest.parameters["latest_date"] = to_string(params.latest_date);
    manifest.parameters["eligibility_min_txs"] = params.eligibility_min_txs;
    manifest.parameters["eligibility_min_volume_usd"] = params.eligibility_min_volume_usd;
    manifest.add_input(args.ledger_path);
    manifest.add_input(args.groups_path);
    manifest.add_input(args.prices_path);
    manifest.write(dir);

    out << "profit: " << groups.size() << " group(s) -> " << dir.string() << "\n";
    return 0;
}

// --- solve ---

struct SolveArgs {
    std::string params_path;
    std::string out = "out";
    double sweep_step = 0.0; // 0 disables the sweep
};

int run_solve(const SolveArgs& args, std::ostream& out) {
    SolveParams params = load_solve_params(args.params_path);
    if (params.detected_rewards.empty()) {
        // Default detected-rewards pool: every hunter's detection set carries
        // the mean self-report reward per member.
        const double pi_s =
            mech::optimal_self_report_ratio(params.organizer, params.mean_reward).value;
        const double sigma = mech::equilibrium_sigma(params.organizer, pi_s).value;
        const double undetected = mech::expected_undetected_stage1(params.organizer, sigma);
        params.detected_rewards.assign(
            params.types.size(),
            params.mean_reward * undetected / static_cast<double>(params.hunters));
    }
    const mech::MechanismSolution solution =
        mech::end_to_end_solve(params.organizer, params.types, params.hunters, params.gamma,
                               params.mean_reward, params.detected_rewards);

    const fs::path dir = prepare_out_dir(args.out);
    atomic_write((dir / "solution.json").string(), mechanism_solution_json(solution));
    if (args.sweep_step > 0.0)
        atomic_write((dir / "sweep.csv").string(),
                     sweep_csv(params.organizer, params.mean_reward, args.sweep_step));

    Manifest manifest;
    manifest.command = "solve";
    manifest.parameters["gamma"] = params.gamma;
    manifest.parameters["hunters"] = params.hunters;
    manifest.parameters["mean_reward"] = params.mean_reward;
    if (args.sweep_step > 0.0) manifest.parameters["sweep_step"] = args.sweep_step;
    manifest.add_input(args.params_path);
    manifest.write(dir);

    out << "solve: pi_s*=" << fmt_double(solution.self_report_ratio.value)
        << " sigma*=" << fmt_double(solution.sigma.value)
        << " U_o=" << fmt_double(solution.organizer_utility) << " -> " << dir.string() << "\n";
    return 0;
}

// --- gen ---

struct GenArgs {
    synth::SynthSpec spec;
    std::string out = "out";
};

double token_price_for(const std::string& token) {
    if (token == "ETH") return 2000.0;
    return 1.0;
}

int run_gen(const GenArgs& args, std::ostream& out) {
    const synth::SynthOutput generated = synth::generate(args.spec);
    const fs::path dir = prepare_out_dir(args.out);

    write_transactions_csv((dir / "ledger.csv").string(), generated.ledger);
    write_transactions_jsonl((dir / "ledger.jsonl").string(), generated.ledger);
    write_groups_json((dir / "groups.json").string(), generated.groups);
    atomic_write((dir / "truth.json").string(), ground_truth_json(generated.truth));

    std::set<std::pair<std::string, Date>> needed;
    for (const Transaction& t : generated.ledger.transactions()) {
        const Date date = date_from_unix(t.timestamp);
        needed.insert({t.token, date});
        needed.insert({t.src_chain.native_token(), date});
    }
    std::vector<std::tuple<std::string, Date, double>> price_rows;
    for (const auto& [token, date] : needed)
        price_rows.emplace_back(token, date, token_price_for(token));
    write_prices_csv((dir / "prices.csv").string(), price_rows);

    Manifest manifest;
    manifest.command = "gen";
    manifest.parameters["generator_id"] = synth::SplitMix64::kGeneratorId;
    manifest.parameters["seed"] = args.spec.seed;
    manifest.parameters["n_groups"] = args.spec.n_groups;
    manifest.parameters["addresses_per_group"] = args.spec.addresses_per_group;
    manifest.parameters["funder_fanout_fraction"] = args.spec.funder_fanout_fraction;
    manifest.parameters["receiver_fanin_fraction"] = args.spec.receiver_fanin_fraction;
    manifest.parameters["seq_chain_length"] = args.spec.seq_chain_length;
    manifest.parameters["value_base"] = args.spec.value_base;
    manifest.parameters["value_jitter_fraction"] = args.spec.value_jitter_fraction;
    manifest.parameters["time_jitter_seconds"] = args.spec.time_jitter_seconds;
    manifest.parameters["uniform_tx_count"] = args.spec.uniform_tx_count;
    manifest.parameters["uniform_volume"] = args.spec.uniform_volume;
    manifest.parameters["background_tx_count"] = args.spec.background_tx_count;
    manifest.write(dir);

    out << "gen: " << generated.ledger.transactions().size() << " transactions, "
        << generated.groups.size() << " group(s) -> " << dir.string() << "\n";
    return 0;
}

// --- verify ---

struct VerifyArgs {
    std::string params_path; // optional extra end-to-end consistency check
};

int run_verify(const VerifyArgs& args, std::ostream& out) {
    std::vector<oracle::CheckResult> results = oracle::run_all();

    if (!args.params_path.empty()) {
        oracle::CheckResult extra{"params_consistency", false, ""};
        try {
            SolveParams params = load_solve_params(args.params_path);
            if (params.detected_rewards.empty())
                params.detected_rewards.assign(params.types.size(), params.mean_reward);
            const auto solution =
                mech::end_to_end_solve(params.organizer, params.types, params.hunters,
                                       params.gamma, params.mean_reward, params.detected_rewards);
            double worst = 0.0;
            for (std::size_t j = 0; j < solution.menu.size(); ++j) {
                const double w = static_cast<double>(solution.menu.size() - j) *
                                 params.types[j].variable_cost;
                const double p = solution.menu[j].detection_prob;
                worst = std::max(worst, std::abs((params.gamma / solution.hunters) * p * (1.0 - p) -
                                                 solution.lambda * w));
            }
            extra.pass = worst <= 1e-8;
            extra.detail = "worst stationarity residual " + fmt_double(worst);
        } catch (const Error& e) {
            extra.detail = e.what();
        }
        results.push_back(std::move(extra));
    }

    bool all_pass = true;
    for (const auto& r : results) {
        out << (r.pass ? "PASS" : "FAIL") << " " << r.name << ": " << r.detail << "\n";
        all_pass = all_pass && r.pass;
    }
    out << (all_pass ? "verify: all checks passed\n" : "verify: some checks failed\n");
    return all_pass ? 0 : 2;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"airdrop hunter detection, profit, and mechanism-design toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    DetectArgs detect_args;
    CLI::App* detect = app.add_subcommand("detect", "run pattern detectors per group");
    detect->add_option("--ledger", detect_args.ledger_path, "transaction file")->required();
    detect->add_option("--groups", detect_args.groups_path, "groups JSON")->required();
    detect->add_option("--format", detect_args.format, "ledger format: csv|jsonl");
    detect->add_option("--out", detect_args.out, "output directory");
    detect->add_option("--value-tolerance", detect_args.cfg.value_tolerance);
    detect->add_option("--time-window", detect_args.cfg.time_window);
    detect->add_option("--count-threshold", detect_args.cfg.count_threshold);
    detect->add_option("--volume-threshold", detect_args.cfg.volume_threshold);
    detect->add_option("--jobs", detect_args.jobs, "worker threads");

    ProfitArgs profit_args;
    CLI::App* profit = app.add_subcommand("profit", "compute rewards and net profits per group");
    profit->add_option("--ledger", profit_args.ledger_path)->required();
    profit->add_option("--groups", profit_args.groups_path)->required();
    profit->add_option("--prices", profit_args.prices_path, "daily close prices CSV")->required();
    profit->add_option("--format", profit_args.format, "ledger format: csv|jsonl");
    profit->add_option("--out", profit_args.out);
    profit->add_option("--base-amount", profit_args.params.base_amount);
    profit->add_option("--token-price", profit_args.params.token_price);
    profit->add_option("--earliest-date", profit_args.earliest_date, "YYYY-MM-DD");
    profit->add_option("--latest-date", profit_args.latest_date, "YYYY-MM-DD");
    profit->add_option("--min-txs", profit_args.params.eligibility_min_txs);
    profit->add_option("--min-volume", profit_args.params.eligibility_min_volume_usd);
    profit->add_option("--jobs", profit_args.jobs, "worker threads");

    SolveArgs solve_args;
    CLI::App* solve = app.add_subcommand("solve", "solve the four-stage bounty game");
    solve->add_option("--params", solve_args.params_path, "parameter JSON")->required();
    solve->add_option("--out", solve_args.out);
    solve->add_option("--sweep-step", solve_args.sweep_step, "emit sweep.csv with this pi_s step");

    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen", "generate a labeled synthetic ledger");
    gen->add_option("--seed", gen_args.spec.seed);
    gen->add_option("--groups-count", gen_args.spec.n_groups);
    gen->add_option("--addresses", gen_args.spec.addresses_per_group);
    gen->add_option("--fanout", gen_args.spec.funder_fanout_fraction);
    gen->add_option("--fanin", gen_args.spec.receiver_fanin_fraction);
    gen->add_option("--chain-length", gen_args.spec.seq_chain_length);
    gen->add_option("--value-base", gen_args.spec.value_base);
    gen->add_option("--value-jitter", gen_args.spec.value_jitter_fraction);
    gen->add_option("--time-jitter", gen_args.spec.time_jitter_seconds);
    gen->add_option("--uniform-txs", gen_args.spec.uniform_tx_count);
    gen->add_option("--uniform-volume", gen_args.spec.uniform_volume);
    gen->add_option("--background", gen_args.spec.background_tx_count);
    gen->add_option("--out", gen_args.out);

    VerifyArgs verify_args;
    CLI::App* verify = app.add_subcommand("verify", "run the brute-force oracle suite");
    verify->add_option("--params", verify_args.params_path, "optional end-to-end parameter JSON");

    std::vector<std::string> cli_args(args.rbegin(), args.rend()); // CLI11 wants reversed argv
    try {
        app.parse(cli_args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (detect->parsed()) return run_detect(detect_args, out);
        if (profit->parsed()) return run_profit(profit_args, out);
        if (solve->parsed()) return run_solve(solve_args, out);
        if (gen->parsed()) return run_gen(gen_args, out);
        return run_verify(verify_args, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        err << "error_code=" << upper(error_code_name(e.code())) << "\n";
        return is_solver_error(e.code()) ? 2 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        err << "error_code=INTERNAL\n";
        return 1;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

} // namespace airdrop::cli
