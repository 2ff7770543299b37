#include "airdrop/cli_app.hpp"
#include "airdrop/errors.hpp"
#include "airdrop/ledger.hpp"
#include "airdrop/mechanism.hpp"
#include "airdrop/oracles.hpp"
#include "airdrop/profit.hpp"
#include "airdrop/reports.hpp"
#include "airdrop/synth.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace airdrop;

namespace {

py::tuple run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
}

std::vector<std::string> detect(const std::string& ledger_path, const std::string& groups_path,
                                const std::string& format, double value_tolerance,
                                std::int64_t time_window, double count_threshold,
                                double volume_threshold) {
    const Ledger ledger = load_transactions(
        ledger_path, format == "jsonl" ? LedgerFormat::jsonl : LedgerFormat::csv);
    DetectorConfig cfg;
    cfg.value_tolerance = value_tolerance;
    cfg.time_window = time_window;
    cfg.count_threshold = count_threshold;
    cfg.volume_threshold = volume_threshold;
    cfg.validate();
    std::vector<std::string> reports;
    for (const AttackerGroup& group : load_groups(groups_path))
        reports.push_back(detection_report_json(run_detectors(ledger, group, cfg)));
    return reports;
}

std::vector<std::string> profit(const std::string& ledger_path, const std::string& groups_path,
                                const std::string& prices_path, const std::string& format) {
    const Ledger ledger = load_transactions(
        ledger_path, format == "jsonl" ? LedgerFormat::jsonl : LedgerFormat::csv);
    const PriceTable prices = PriceTable::load_csv(prices_path);
    const RewardParams params;
    std::vector<std::string> reports;
    for (const AttackerGroup& group : load_groups(groups_path))
        reports.push_back(profit_report_json(group_profit_report(ledger, group, params, prices)));
    return reports;
}

std::string solve(const std::string& params_path) {
    SolveParams params = load_solve_params(params_path);
    if (params.detected_rewards.empty()) {
        const double pi_s =
            mech::optimal_self_report_ratio(params.organizer, params.mean_reward).value;
        const double sigma = mech::equilibrium_sigma(params.organizer, pi_s).value;
        const double undetected = mech::expected_undetected_stage1(params.organizer, sigma);
        params.detected_rewards.assign(
            params.types.size(),
            params.mean_reward * undetected / static_cast<double>(params.hunters));
    }
    return mechanism_solution_json(mech::end_to_end_solve(params.organizer, params.types,
                                                          params.hunters, params.gamma,
                                                          params.mean_reward,
                                                          params.detected_rewards));
}

std::vector<py::tuple> verify() {
    std::vector<py::tuple> results;
    for (const auto& r : oracle::run_all()) results.push_back(py::make_tuple(r.name, r.pass, r.detail));
    return results;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "airdrop hunter detection, profit, and mechanism-design toolkit";
    m.attr("__version__") = "1.0.0";

    py::register_exception<Error>(m, "AirdropError");

    m.def("run_cli", &run_cli, py::arg("args"),
          "Run a CLI command; returns (exit_code, stdout, stderr).");

    m.def(
        "compute_reward",
        [](double early_mult, int volume_mult, double base, double price) {
            RewardParams params;
            params.base_amount = base;
            params.token_price = price;
            return compute_reward(early_mult, volume_mult, params);
        },
        py::arg("early_mult"), py::arg("volume_mult"), py::arg("base") = 330.4883,
        py::arg("price") = 0.1321);

    m.def(
        "volume_multiplier",
        [](double volume_usd) { return volume_multiplier(volume_usd, RewardParams{}); },
        py::arg("volume_usd"));

    m.def(
        "early_bird_multiplier",
        [](const std::string& first_date) {
            return early_bird_multiplier(parse_date(first_date), RewardParams{});
        },
        py::arg("first_date"));

    m.def("detect", &detect, py::arg("ledger_path"), py::arg("groups_path"),
          py::arg("format") = "csv", py::arg("value_tolerance") = 0.01,
          py::arg("time_window") = 1800, py::arg("count_threshold") = 2.0,
          py::arg("volume_threshold") = 300.0,
          "Per-group detection reports as JSON strings.");

    m.def("profit", &profit, py::arg("ledger_path"), py::arg("groups_path"),
          py::arg("prices_path"), py::arg("format") = "csv",
          "Per-group profit reports as JSON strings.");

    m.def("solve", &solve, py::arg("params_path"),
          "Solve the four-stage game from a parameter file; returns solution JSON.");

    m.def("verify", &verify, "Run the oracle suite; returns (name, pass, detail) tuples.");
}
