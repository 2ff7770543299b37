#pragma once

#include <string>
#include <vector>

namespace airdrop::oracle {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Reference-value and closed-form-vs-brute-force checks. Each is
// deterministic (fixed seeds) and self-contained.
CheckResult check_reference_rewards();
CheckResult check_volume_boundaries();
CheckResult check_self_report_stationarity();
CheckResult check_nash_soundness();
CheckResult check_reward_menu_minimality();
CheckResult check_task_complexity_stationarity();
CheckResult check_reward_ratio_roundtrip();
CheckResult check_planted_recovery();
CheckResult check_uniformity_monotonicity();

/// Every check except the golden-file comparison (which needs CLI plumbing).
std::vector<CheckResult> run_all();

} // namespace airdrop::oracle
