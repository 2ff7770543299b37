#pragma once

#include "airdrop/detectors.hpp"
#include "airdrop/mechanism.hpp"
#include "airdrop/profit.hpp"
#include "airdrop/synth.hpp"

#include <optional>
#include <string>
#include <vector>

namespace airdrop {

struct DetectionReport {
    std::string group_id;
    FunderReceiverReport funder_receiver;
    std::vector<TransferChain> chains;
    SequentialCoverage coverage;
    std::optional<UniformityScore> uniformity; // absent when the group has no in-group activity
    std::vector<TimelineBucket> timeline;
};

DetectionReport run_detectors(const Ledger& ledger, const AttackerGroup& group,
                              const DetectorConfig& cfg);

// JSON renderings (stable key order, 2-space indent, trailing newline).
std::string detection_report_json(const DetectionReport& report);
std::string profit_report_json(const ProfitReport& report);
std::string mechanism_solution_json(const mech::MechanismSolution& solution);
std::string ground_truth_json(const synth::GroundTruth& truth);

// CSV renderings.
std::string profit_report_csv(const ProfitReport& report);
std::string timeline_csv(const std::vector<TimelineBucket>& timeline);
std::string fig1_csv(const std::vector<DetectionReport>& reports);
std::string fig3_csv(const std::vector<DetectionReport>& reports);
std::string fig8_csv(const std::vector<ProfitReport>& reports); // ranked by net profit, descending
std::string sweep_csv(const mech::OrganizerParams& params, double mean_reward, double step);

/// Full Stage 1-4 parameter file.
struct SolveParams {
    mech::OrganizerParams organizer;
    std::vector<mech::HunterType> types;
    int hunters = 0;
    double gamma = 1.0;
    double mean_reward = 0.0;
    std::vector<double> detected_rewards; // per type; defaults to mean_reward * |D_j|
};

SolveParams load_solve_params(const std::string& path); // throws Error(SchemaError)

} // namespace airdrop
