#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace airdrop::mech {

struct OrganizerParams {
    double value_per_reduction = 1.0; // a
    double total_tokens = 1000.0;     // T
    int total_addresses = 1000;       // N
    double detection_cost = 0.1;      // kappa, per non-self-reporting account
    double baseline_detection = 0.2;  // p_o in [0,1)
    double externality = 0.6;         // phi > 0
    double expected_hunters = 100.0;  // E[N_h]

    void validate() const; // throws Error(DomainError)
};

struct AttackerProfile {
    double reward = 0.0; // R_i
    double cost = 0.0;   // c_i
};

struct HunterType {
    double capability = 0.0;   // theta_j, strictly decreasing across types
    double variable_cost = 1.0; // c_j > 0
    double fixed_cost = 0.0;    // d_j >= 0

    double task_cost(double alpha) const { return variable_cost * alpha + fixed_cost; }
};

struct Contract {
    double task_complexity = 0.0; // alpha
    double reward = 0.0;          // r
    double reward_ratio = 0.0;    // pi_b
    double detection_prob = 0.0;  // sigmoid(theta - gamma*alpha)
};

enum class ClampFlag { interior, at_lower_bound, at_upper_bound };

struct ClampedValue {
    double value = 0.0;     // clamped into [0,1]
    double unclamped = 0.0; // raw formula value
    ClampFlag flag = ClampFlag::interior;
};

struct BestResponseResult {
    std::vector<int> profile;
    double sigma = 0.0;
    bool converged = false;
    int rounds = 0;
};

struct FeasibilityVerdict {
    bool feasible = true;
    std::string first_violation; // empty when feasible
};

struct TypeSolution {
    double task_complexity = 0.0;
    double detection_prob = 0.0;
    double reward = 0.0;
};

struct TaskComplexitySolution {
    double lambda = 0.0;
    std::vector<TypeSolution> types;
    double objective = 0.0; // U/V at the solution
    double undetected_factor = 0.0; // U
    double weighted_complexity = 0.0; // V
};

struct MechanismSolution {
    ClampedValue self_report_ratio; // pi_s*
    ClampedValue sigma;             // equilibrium self-report rate
    double expected_undetected_stage1 = 0.0;
    std::vector<Contract> menu;
    double lambda = 0.0;
    double expected_undetected_stage3 = 0.0;
    double organizer_utility = 0.0;
    double gamma = 0.0;
    int hunters = 0;                // M (= J)
    double detection_set_size = 0.0; // |D_j| = E[N_u^(1)] / M
};

// --- Stage 1 ---

double expected_undetected_stage1(const OrganizerParams& p, double sigma);

double organizer_utility(const OrganizerParams& p, double pi_s, double sigma, double mean_reward);

/// Closed form pi_s* = (1 - p_o - (a(1-p_o)T - kappa*N) / (Rbar*N)) / 2, clamped to [0,1].
ClampedValue optimal_self_report_ratio(const OrganizerParams& p, double mean_reward);

// --- Stage 2 ---

/// Indifference point Sigma = (1 - pi_s - p_o) / phi, clamped to [0,1].
ClampedValue equilibrium_sigma(const OrganizerParams& p, double pi_s);

/// 1 iff p_o + phi*sigma >= 1 - pi_s (ties self-report).
int attacker_best_response(const AttackerProfile& profile, const OrganizerParams& p, double pi_s,
                           double sigma);

BestResponseResult best_response_dynamics(const std::vector<AttackerProfile>& profiles,
                                          const OrganizerParams& p, double pi_s,
                                          const std::vector<int>& start);

/// Exhaustive 2^N pure-Nash enumeration (N <= 20).
std::vector<std::vector<int>> enumerate_pure_ne(const std::vector<AttackerProfile>& profiles,
                                                const OrganizerParams& p, double pi_s);

/// Stage-2 utility of one attacker at a full profile (used by the enumeration
/// and the supermodularity checks).
double attacker_utility(int action, double sum_others, const AttackerProfile& profile,
                        const OrganizerParams& p, double pi_s);

// --- Stages 3 & 4 ---

double detection_probability(double theta, double gamma, double alpha);

/// Telescoped minimal-cost rewards for ordered task complexities.
std::vector<double> optimal_rewards(const std::vector<HunterType>& types,
                                    const std::vector<double>& alphas);

FeasibilityVerdict check_feasibility(const std::vector<HunterType>& types,
                                     const std::vector<std::pair<double, double>>& menu);

double optimal_reward_ratio(double reward, double theta, double gamma, double alpha,
                            double detected_rewards_sum);

TaskComplexitySolution solve_task_complexities(const std::vector<HunterType>& types, int hunters,
                                               double gamma, double expected_undetected_stage1);

double expected_undetected_stage3(double expected_undetected_stage1,
                                  const std::vector<double>& detection_probs, int hunters);

/// Exhaustive minimal-total feasible reward search on a grid (J <= 3).
std::vector<double> brute_force_contract_oracle(const std::vector<HunterType>& types,
                                                const std::vector<double>& alphas, double grid_step);

MechanismSolution end_to_end_solve(const OrganizerParams& p, const std::vector<HunterType>& types,
                                   int hunters, double gamma, double mean_reward,
                                   const std::vector<double>& detected_rewards);

} // namespace airdrop::mech
