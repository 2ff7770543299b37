#include <doctest.h>

#include "airdrop/cli_app.hpp"
#include "airdrop/errors.hpp"
#include "airdrop/reports.hpp"
#include "test_util.hpp"

#include <json.hpp>

#include <sstream>

using namespace airdrop;
using testutil::TempDir;
using testutil::slurp;

namespace {

const char* kParamsJson = R"({
  "a": 1.0, "T": 1000, "N": 1000, "kappa": 0.1, "p_o": 0.2, "phi": 0.8,
  "expected_hunters": 100, "gamma": 1.0, "mean_reward": 5.0,
  "types": [
    {"capability": 5.0, "variable_cost": 0.5},
    {"capability": 4.5, "variable_cost": 1.0}
  ]
})";

int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

} // namespace

TEST_CASE("detection report json shape") {
    synth::SynthSpec spec;
    spec.seed = 99;
    const auto generated = synth::generate(spec);
    DetectorConfig cfg;
    cfg.time_window = spec.time_jitter_seconds;
    cfg.value_tolerance = spec.value_jitter_fraction;
    const auto report = run_detectors(generated.ledger, generated.groups[0], cfg);

    const auto j = nlohmann::json::parse(detection_report_json(report));
    CHECK(j.at("group_id") == "g1");
    CHECK(j.at("funder").at("percent_funded") == doctest::Approx(1.0));
    CHECK(j.at("receiver").at("percent_received") == doctest::Approx(1.0));
    REQUIRE(j.at("chains").size() == 2);
    const auto& chain = j.at("chains").at(0);
    CHECK(chain.at("tx_hashes").size() == 3);
    CHECK(chain.at("hop_count") == 2);
    CHECK(chain.contains("start_address"));
    CHECK(chain.contains("start_value"));
    CHECK(j.at("coverage").contains("covered_fraction"));
    CHECK(j.at("uniformity").contains("u_count"));
    CHECK(j.at("timeline").is_array());
    CHECK(detection_report_json(report).back() == '\n');
}

TEST_CASE("detection report with no activity serializes nulls") {
    AttackerGroup g;
    g.group_id = "quiet";
    g.addresses = {Address::parse("0x" + std::string(40, '1'))};
    const auto report = run_detectors(Ledger{}, g, DetectorConfig{});
    const auto j = nlohmann::json::parse(detection_report_json(report));
    CHECK(j.at("funder").is_null());
    CHECK(j.at("receiver").is_null());
    CHECK(j.at("uniformity").is_null());
    CHECK(j.at("chains").empty());
}

TEST_CASE("profit csv header and fig8 ranking") {
    ProfitReport small;
    small.group_id = "g2";
    small.total_reward_usd = 10.0;
    small.total_fees_usd = 5.0;
    small.total_net_profit_usd = 5.0;
    ProfitReport big = small;
    big.group_id = "g1";
    big.total_net_profit_usd = 50.0;
    ProfitReport tied = small;
    tied.group_id = "g3"; // same net profit as g2: tie breaks by id

    CHECK(profit_report_csv(small).rfind(
              "address,V_usd,m_e,m_v,reward_usd,fees_usd,net_profit_usd\n", 0) == 0);

    const std::string fig8 = fig8_csv({small, big, tied});
    std::istringstream lines(fig8);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "rank,group_id,total_reward_usd,total_fees_usd,total_net_profit_usd");
    std::getline(lines, line);
    CHECK(line == "1,g1,10,5,50");
    std::getline(lines, line);
    CHECK(line == "2,g2,10,5,5");
    std::getline(lines, line);
    CHECK(line == "3,g3,10,5,5");
}

TEST_CASE("sweep csv rows") {
    mech::OrganizerParams p;
    p.value_per_reduction = 1.0;
    p.total_tokens = 1000.0;
    p.total_addresses = 1000;
    p.detection_cost = 0.1;
    p.baseline_detection = 0.2;
    p.externality = 0.8;
    p.expected_hunters = 100.0;
    const std::string csv = sweep_csv(p, 5.0, 0.5);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "pi_s,sigma,U_o");
    int rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 3); // pi_s = 0, 0.5, 1
    CHECK_THROWS_AS(sweep_csv(p, 5.0, 0.0), Error);
}

TEST_CASE("solve params loading with aliases and defaults") {
    TempDir dir;
    const auto params = load_solve_params(dir.file("p.json", kParamsJson));
    CHECK(params.organizer.detection_cost == 0.1);
    CHECK(params.organizer.externality == 0.8);
    CHECK(params.hunters == 2); // defaults to |types|
    CHECK(params.detected_rewards.empty());
    CHECK(params.mean_reward == 5.0);

    const char* unicode = R"({
      "a": 1.0, "T": 1000, "N": 1000, "κ": 0.25, "p_o": 0.2, "φ": 0.6,
      "expected_hunters": 100, "gamma": 1.0, "mean_reward": 5.0,
      "hunters": 1, "detected_rewards": [7.5],
      "types": [{"capability": 5.0, "variable_cost": 0.5, "fixed_cost": 0.1}]
    })";
    const auto uni = load_solve_params(dir.file("u.json", unicode));
    CHECK(uni.organizer.detection_cost == 0.25);
    CHECK(uni.organizer.externality == 0.6);
    CHECK(uni.hunters == 1);
    CHECK(uni.types[0].fixed_cost == 0.1);
    REQUIRE(uni.detected_rewards.size() == 1);
    CHECK(uni.detected_rewards[0] == 7.5);

    try {
        load_solve_params(dir.file("bad.json", R"({"a": 1.0})"));
        FAIL("expected SchemaError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SchemaError);
    }
    CHECK_THROWS_AS(load_solve_params(dir.file("junk.json", "not json")), Error);
}

TEST_CASE("mechanism solution json shape") {
    TempDir dir;
    const auto params = load_solve_params(dir.file("p.json", kParamsJson));
    const auto solution = mech::end_to_end_solve(params.organizer, params.types, params.hunters,
                                                 params.gamma, params.mean_reward, {10.0, 10.0});
    const auto j = nlohmann::json::parse(mechanism_solution_json(solution));
    CHECK(j.at("pi_s_star").contains("value"));
    CHECK(j.at("pi_s_star").contains("unclamped"));
    CHECK(j.at("pi_s_star").contains("flag"));
    CHECK(j.at("sigma_star").contains("value"));
    REQUIRE(j.at("menu").size() == 2);
    CHECK(j.at("menu").at(0).contains("task_complexity"));
    CHECK(j.at("menu").at(0).contains("reward_ratio"));
    CHECK(j.contains("lambda"));
    CHECK(j.contains("expected_undetected_stage3"));
    CHECK(j.contains("organizer_utility"));
    CHECK(j.at("hunters_M") == 2);
}

TEST_CASE("cli pipeline: gen, detect, profit, solve") {
    TempDir dir;
    const std::string gen_dir = dir.sub("gen");
    std::string out;
    CHECK(run_cli({"gen", "--seed", "77", "--background", "10", "--out", gen_dir}, &out) == 0);
    CHECK(out.find("gen:") == 0);

    const std::string det_dir = dir.sub("det");
    CHECK(run_cli({"detect", "--ledger", gen_dir + "/ledger.csv", "--groups",
                   gen_dir + "/groups.json", "--out", det_dir}) == 0);
    CHECK_FALSE(slurp(det_dir + "/detect_g1.json").empty());
    CHECK(slurp(det_dir + "/fig1.csv").rfind("group_id,pct_funded,pct_received\n", 0) == 0);
    const auto manifest = nlohmann::json::parse(slurp(det_dir + "/run_manifest.json"));
    CHECK(manifest.at("tool") == "airdrop_forge");
    CHECK(manifest.at("command") == "detect");
    CHECK(manifest.at("inputs").size() == 2);

    const std::string prof_dir = dir.sub("prof");
    CHECK(run_cli({"profit", "--ledger", gen_dir + "/ledger.csv", "--groups",
                   gen_dir + "/groups.json", "--prices", gen_dir + "/prices.csv", "--out",
                   prof_dir}) == 0);
    CHECK_FALSE(slurp(prof_dir + "/fig8.csv").empty());
    CHECK_FALSE(slurp(prof_dir + "/profit_g1.csv").empty());

    const std::string solve_dir = dir.sub("solve");
    const auto params_path = dir.file("params.json", kParamsJson);
    CHECK(run_cli({"solve", "--params", params_path, "--out", solve_dir, "--sweep-step", "0.1"},
                  &out) == 0);
    CHECK(out.find("pi_s*=") != std::string::npos);
    CHECK_FALSE(slurp(solve_dir + "/solution.json").empty());
    CHECK(slurp(solve_dir + "/sweep.csv").rfind("pi_s,sigma,U_o\n", 0) == 0);
}

TEST_CASE("cli gen output is byte-deterministic") {
    TempDir dir;
    const std::string a = dir.sub("a");
    const std::string b = dir.sub("b");
    REQUIRE(run_cli({"gen", "--seed", "123", "--out", a}) == 0);
    REQUIRE(run_cli({"gen", "--seed", "123", "--out", b}) == 0);
    CHECK(slurp(a + "/ledger.csv") == slurp(b + "/ledger.csv"));
    CHECK(slurp(a + "/ledger.jsonl") == slurp(b + "/ledger.jsonl"));
    CHECK(slurp(a + "/groups.json") == slurp(b + "/groups.json"));
    CHECK(slurp(a + "/truth.json") == slurp(b + "/truth.json"));
    CHECK(slurp(a + "/prices.csv") == slurp(b + "/prices.csv"));

    REQUIRE(run_cli({"gen", "--seed", "124", "--out", dir.sub("c")}) == 0);
    CHECK_FALSE(slurp(dir.sub("c") + "/ledger.csv") == slurp(a + "/ledger.csv"));
}

TEST_CASE("cli error reporting and exit codes") {
    TempDir dir;
    std::string err;

    CHECK(run_cli({"detect", "--ledger", dir.sub("nope.csv"), "--groups", dir.sub("nope.json")},
                  nullptr, &err) == 1);
    CHECK(err.find("error_code=MISSINGFILE") != std::string::npos);

    // hunters != |types| violates the J = M precondition
    const char* mismatched = R"({
      "a": 1.0, "T": 1000, "N": 1000, "kappa": 0.1, "p_o": 0.2, "phi": 0.8,
      "expected_hunters": 100, "gamma": 1.0, "mean_reward": 5.0, "hunters": 3,
      "types": [{"capability": 5.0, "variable_cost": 0.5}]
    })";
    CHECK(run_cli({"solve", "--params", dir.file("m.json", mismatched), "--out", dir.sub("s")},
                  nullptr, &err) == 1);
    CHECK(err.find("error_code=PRECONDITION") != std::string::npos);

    CHECK(run_cli({"frobnicate"}, nullptr, &err) == 1);
    CHECK(run_cli({}, nullptr, &err) == 1); // a subcommand is required
}
