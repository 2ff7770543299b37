#include "airdrop/mechanism.hpp"

#include "airdrop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace airdrop::mech {

namespace {

constexpr double kLambdaFloor = 1e-12;
constexpr double kBisectionTol = 1e-12;
constexpr int kBisectionMaxIter = 200;

ClampedValue clamp_unit(double raw) {
    if (raw < 0.0) return {0.0, raw, ClampFlag::at_lower_bound};
    if (raw > 1.0) return {1.0, raw, ClampFlag::at_upper_bound};
    return {raw, raw, ClampFlag::interior};
}

void require(bool ok, const char* message) {
    if (!ok) throw Error(ErrorCode::DomainError, message);
}

void validate_types(const std::vector<HunterType>& types) {
    require(!types.empty(), "at least one hunter type required");
    for (std::size_t j = 0; j < types.size(); ++j) {
        require(types[j].variable_cost > 0.0, "variable cost must be positive");
        require(types[j].fixed_cost >= 0.0, "fixed cost must be non-negative");
        if (j > 0)
            require(types[j - 1].capability > types[j].capability,
                    "capabilities must be strictly decreasing");
    }
}

} // namespace

void OrganizerParams::validate() const {
    require(value_per_reduction > 0.0, "a must be positive");
    require(total_tokens > 0.0, "T must be positive");
    require(total_addresses > 0, "N must be positive");
    require(detection_cost > 0.0, "kappa must be positive");
    require(baseline_detection >= 0.0 && baseline_detection < 1.0, "p_o must be in [0,1)");
    require(externality > 0.0, "phi must be positive");
    require(expected_hunters > 0.0 && expected_hunters <= static_cast<double>(total_addresses),
            "expected hunters must be in (0, N]");
}

double expected_undetected_stage1(const OrganizerParams& p, double sigma) {
    p.validate();
    require(sigma >= 0.0 && sigma <= 1.0, "sigma must be in [0,1]");
    return (1.0 - p.baseline_detection) * p.expected_hunters * (1.0 - sigma);
}

double organizer_utility(const OrganizerParams& p, double pi_s, double sigma, double mean_reward) {
    p.validate();
    require(pi_s >= 0.0 && pi_s <= 1.0, "pi_s must be in [0,1]");
    require(sigma >= 0.0 && sigma <= 1.0, "sigma must be in [0,1]");
    const double n = static_cast<double>(p.total_addresses);
    const double undetected = expected_undetected_stage1(p, sigma);
    const double self_reporters = sigma * p.expected_hunters;
    return p.value_per_reduction * (1.0 - undetected / n) * p.total_tokens -
           pi_s * self_reporters * mean_reward - p.detection_cost * (n - self_reporters);
}

ClampedValue optimal_self_report_ratio(const OrganizerParams& p, double mean_reward) {
    p.validate();
    require(mean_reward > 0.0, "mean self-report reward must be positive");
    const double n = static_cast<double>(p.total_addresses);
    const double raw =
        0.5 * (1.0 - p.baseline_detection -
               (p.value_per_reduction * (1.0 - p.baseline_detection) * p.total_tokens -
                p.detection_cost * n) /
                   (mean_reward * n));
    return clamp_unit(raw);
}

ClampedValue equilibrium_sigma(const OrganizerParams& p, double pi_s) {
    p.validate();
    require(pi_s >= 0.0 && pi_s <= 1.0, "pi_s must be in [0,1]");
    return clamp_unit((1.0 - pi_s - p.baseline_detection) / p.externality);
}

int attacker_best_response(const AttackerProfile&, const OrganizerParams& p, double pi_s,
                           double sigma) {
    require(pi_s >= 0.0 && pi_s <= 1.0, "pi_s must be in [0,1]");
    // The reward and cost cancel in the comparison; ties self-report.
    return p.baseline_detection + p.externality * sigma >= 1.0 - pi_s ? 1 : 0;
}

double attacker_utility(int action, double sum_others, const AttackerProfile& profile,
                        const OrganizerParams& p, double pi_s) {
    const double sigma = (static_cast<double>(action) + sum_others) / p.expected_hunters;
    if (action == 1) return pi_s * profile.reward - profile.cost;
    const double perceived = p.baseline_detection + p.externality * sigma;
    return (1.0 - perceived) * profile.reward - profile.cost;
}

BestResponseResult best_response_dynamics(const std::vector<AttackerProfile>& profiles,
                                          const OrganizerParams& p, double pi_s,
                                          const std::vector<int>& start) {
    p.validate();
    require(!profiles.empty(), "at least one attacker required");
    require(start.size() == profiles.size(), "start profile size mismatch");

    const int max_rounds = 10 * static_cast<int>(profiles.size());
    std::vector<int> current = start;
    BestResponseResult result;
    for (int round = 1; round <= max_rounds; ++round) {
        const double total = std::accumulate(current.begin(), current.end(), 0.0);
        std::vector<int> next(current.size());
        for (std::size_t i = 0; i < current.size(); ++i) {
            // Own action only changes the no-report payoff through Sigma, so the
            // best response depends on the opponents' reporting mass.
            const double sigma_others =
                (total - static_cast<double>(current[i])) / p.expected_hunters;
            next[i] = attacker_best_response(profiles[i], p, pi_s, sigma_others);
        }
        const bool fixed = next == current;
        current = std::move(next);
        result.rounds = round;
        if (fixed) {
            result.converged = true;
            break;
        }
    }
    result.sigma = std::accumulate(current.begin(), current.end(), 0.0) / p.expected_hunters;
    result.profile = std::move(current);
    return result;
}

std::vector<std::vector<int>> enumerate_pure_ne(const std::vector<AttackerProfile>& profiles,
                                                const OrganizerParams& p, double pi_s) {
    p.validate();
    const std::size_t n = profiles.size();
    if (n == 0 || n > 20) throw Error(ErrorCode::SizeLimit, "enumeration limited to 1..20 attackers");

    std::vector<std::vector<int>> equilibria;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> profile(n);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            profile[i] = (mask >> i) & 1u;
            total += profile[i];
        }
        bool is_ne = true;
        for (std::size_t i = 0; i < n && is_ne; ++i) {
            const double others = total - static_cast<double>(profile[i]);
            const double stay = attacker_utility(profile[i], others, profiles[i], p, pi_s);
            const double deviate = attacker_utility(1 - profile[i], others, profiles[i], p, pi_s);
            if (deviate > stay) is_ne = false;
        }
        if (is_ne) equilibria.push_back(std::move(profile));
    }
    return equilibria;
}

double detection_probability(double theta, double gamma, double alpha) {
    return 1.0 / (1.0 + std::exp(-(theta - gamma * alpha)));
}

std::vector<double> optimal_rewards(const std::vector<HunterType>& types,
                                    const std::vector<double>& alphas) {
    validate_types(types);
    if (alphas.size() != types.size())
        throw Error(ErrorCode::DomainError, "one task complexity per type required");
    for (std::size_t j = 0; j + 1 < alphas.size(); ++j) {
        if (alphas[j] < alphas[j + 1])
            throw Error(ErrorCode::OrderingViolation, "task complexities must be non-increasing");
    }
    if (alphas.back() < 0.0)
        throw Error(ErrorCode::OrderingViolation, "task complexities must be non-negative");

    const std::size_t j_last = types.size() - 1;
    std::vector<double> rewards(types.size());
    rewards[j_last] = types[j_last].task_cost(alphas[j_last]);
    for (std::size_t j = j_last; j-- > 0;) {
        // r_j = C_j(alpha_j) + r_{j+1} - C_j(alpha_{j+1})
        rewards[j] = types[j].task_cost(alphas[j]) + rewards[j + 1] - types[j].task_cost(alphas[j + 1]);
    }
    return rewards;
}

FeasibilityVerdict check_feasibility(const std::vector<HunterType>& types,
                                     const std::vector<std::pair<double, double>>& menu) {
    validate_types(types);
    if (menu.size() != types.size())
        throw Error(ErrorCode::DomainError, "one contract per type required");
    const std::size_t j_last = types.size() - 1;
    constexpr double kTol = 1e-9;

    // (a) IR of the lowest type.
    if (menu[j_last].second - types[j_last].task_cost(menu[j_last].first) < -kTol)
        return {false, "condition (a): lowest type utility negative"};

    // (b) monotone rewards and task complexities.
    for (std::size_t j = 0; j + 1 < menu.size(); ++j) {
        if (menu[j].second < menu[j + 1].second - kTol)
            return {false, "condition (b): rewards not non-increasing"};
        if (menu[j].first < menu[j + 1].first - kTol)
            return {false, "condition (b): task complexities not non-increasing"};
    }
    if (menu[j_last].second < -kTol) return {false, "condition (b): negative reward"};

    // (c) adjacent sandwich: C_j(a_j) - C_j(a_{j+1}) <= r_j - r_{j+1}
    //                        <= C_{j+1}(a_j) - C_{j+1}(a_{j+1})
    // (downward IC of type j, upward IC of type j+1).
    for (std::size_t j = 0; j + 1 < menu.size(); ++j) {
        const double gap = menu[j].second - menu[j + 1].second;
        const double lower = types[j].task_cost(menu[j].first) - types[j].task_cost(menu[j + 1].first);
        const double upper =
            types[j + 1].task_cost(menu[j].first) - types[j + 1].task_cost(menu[j + 1].first);
        if (gap < lower - kTol || gap > upper + kTol)
            return {false, "condition (c): adjacent sandwich violated"};
    }

    // Direct pairwise IC / IR.
    for (std::size_t j = 0; j < menu.size(); ++j) {
        const double own = menu[j].second - types[j].task_cost(menu[j].first);
        if (own < -kTol) return {false, "IR violated for type " + std::to_string(j + 1)};
        for (std::size_t k = 0; k < menu.size(); ++k) {
            if (k == j) continue;
            const double mimic = menu[k].second - types[j].task_cost(menu[k].first);
            if (mimic > own + kTol)
                return {false, "IC violated: type " + std::to_string(j + 1) + " prefers contract " +
                                   std::to_string(k + 1)};
        }
    }
    return {true, ""};
}

double optimal_reward_ratio(double reward, double theta, double gamma, double alpha,
                            double detected_rewards_sum) {
    if (detected_rewards_sum <= 0.0)
        throw Error(ErrorCode::DomainError, "detected rewards sum must be positive");
    return reward * (1.0 + std::exp(-(theta - gamma * alpha))) / detected_rewards_sum;
}

namespace {

struct LambdaEval {
    std::vector<double> probs;
    std::vector<double> alphas;
    double undetected_factor; // U
    double weighted_complexity; // V
    double residual;          // lambda*V - U
};

LambdaEval evaluate_lambda(double lambda, const std::vector<HunterType>& types, int hunters,
                           double gamma) {
    const std::size_t j_count = types.size();
    LambdaEval eval;
    eval.probs.resize(j_count);
    eval.alphas.resize(j_count);
    double prob_sum = 0.0;
    eval.weighted_complexity = 0.0;
    for (std::size_t j = 0; j < j_count; ++j) {
        const double weight = static_cast<double>(j_count - j) * types[j].variable_cost;
        const double a_j = lambda * static_cast<double>(hunters) * weight / gamma;
        const double disc = std::max(0.0, 1.0 - 4.0 * a_j);
        const double p = 0.5 * (1.0 - std::sqrt(disc));
        eval.probs[j] = p;
        eval.alphas[j] = (types[j].capability + std::log((1.0 - p) / p)) / gamma;
        prob_sum += p;
        eval.weighted_complexity += weight * eval.alphas[j];
    }
    eval.undetected_factor = 1.0 - prob_sum / static_cast<double>(hunters);
    eval.residual = lambda * eval.weighted_complexity - eval.undetected_factor;
    return eval;
}

} // namespace

TaskComplexitySolution solve_task_complexities(const std::vector<HunterType>& types, int hunters,
                                               double gamma, double expected_undetected) {
    validate_types(types);
    require(gamma > 0.0, "gamma must be positive");
    require(expected_undetected >= 0.0, "expected undetected count must be non-negative");
    if (hunters != static_cast<int>(types.size()))
        throw Error(ErrorCode::Precondition, "one registered hunter per type required (J = M)");

    // a_j <= 1/4 for all j bounds lambda from above.
    double max_weight = 0.0;
    for (std::size_t j = 0; j < types.size(); ++j)
        max_weight = std::max(max_weight,
                              static_cast<double>(types.size() - j) * types[j].variable_cost);
    const double lambda_max = gamma / (4.0 * static_cast<double>(hunters) * max_weight);

    double lo = kLambdaFloor;
    double hi = lambda_max;
    double g_lo = evaluate_lambda(lo, types, hunters, gamma).residual;
    double g_hi = evaluate_lambda(hi, types, hunters, gamma).residual;
    if (g_lo > 0.0 || g_hi < 0.0) {
        // Scan for an interior sign change before giving up.
        bool bracketed = false;
        double prev = lo;
        double g_prev = g_lo;
        for (int k = 1; k <= 1024 && !bracketed; ++k) {
            const double x = lo + (hi - lo) * static_cast<double>(k) / 1024.0;
            const double g_x = evaluate_lambda(x, types, hunters, gamma).residual;
            if ((g_prev <= 0.0 && g_x >= 0.0) || (g_prev >= 0.0 && g_x <= 0.0)) {
                lo = prev;
                hi = x;
                g_lo = g_prev;
                bracketed = true;
            }
            prev = x;
            g_prev = g_x;
        }
        if (!bracketed)
            throw Error(ErrorCode::NoRoot, "no stationary lambda in (0, gamma/(4*M*max weight)]");
    }

    for (int iter = 0; iter < kBisectionMaxIter && hi - lo > kBisectionTol; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double g_mid = evaluate_lambda(mid, types, hunters, gamma).residual;
        if ((g_lo <= 0.0) == (g_mid <= 0.0)) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    const double lambda = 0.5 * (lo + hi);
    const LambdaEval eval = evaluate_lambda(lambda, types, hunters, gamma);

    for (std::size_t j = 0; j + 1 < eval.alphas.size(); ++j) {
        if (eval.alphas[j] < eval.alphas[j + 1])
            throw Error(ErrorCode::InfeasibleOrdering,
                        "stationary point violates the task-complexity ordering");
    }
    if (eval.alphas.back() < 0.0)
        throw Error(ErrorCode::InfeasibleOrdering, "stationary task complexity is negative");

    const std::vector<double> rewards = optimal_rewards(types, eval.alphas);
    TaskComplexitySolution solution;
    solution.lambda = lambda;
    solution.undetected_factor = eval.undetected_factor;
    solution.weighted_complexity = eval.weighted_complexity;
    solution.objective = eval.undetected_factor / eval.weighted_complexity;
    for (std::size_t j = 0; j < types.size(); ++j)
        solution.types.push_back({eval.alphas[j], eval.probs[j], rewards[j]});
    return solution;
}

double expected_undetected_stage3(double expected_undetected_stage1,
                                  const std::vector<double>& detection_probs, int hunters) {
    require(expected_undetected_stage1 >= 0.0, "stage-1 undetected count must be non-negative");
    if (hunters != static_cast<int>(detection_probs.size()))
        throw Error(ErrorCode::DomainError, "one detection probability per hunter required");
    double sum = 0.0;
    for (double p : detection_probs) {
        require(p > 0.0 && p < 1.0, "detection probabilities must be in (0,1)");
        sum += p;
    }
    return expected_undetected_stage1 * (1.0 - sum / static_cast<double>(hunters));
}

std::vector<double> brute_force_contract_oracle(const std::vector<HunterType>& types,
                                                const std::vector<double>& alphas,
                                                double grid_step) {
    validate_types(types);
    const std::size_t j_count = types.size();
    if (j_count > 3) throw Error(ErrorCode::SizeLimit, "oracle limited to J <= 3");
    if (!(grid_step > 0.0 && grid_step <= 0.01))
        throw Error(ErrorCode::DomainError, "grid step must be in (0, 0.01]");

    const std::vector<double> telescoped = optimal_rewards(types, alphas);
    double bound = 0.0;
    for (double r : telescoped) bound = std::max(bound, r);
    const auto steps = static_cast<long>(std::ceil(2.0 * bound / grid_step)) + 1;

    auto feasible = [&](const std::vector<double>& rewards) {
        for (std::size_t j = 0; j < j_count; ++j) {
            const double own = rewards[j] - types[j].task_cost(alphas[j]);
            if (own < 0.0) return false;
            for (std::size_t k = 0; k < j_count; ++k) {
                if (k != j && rewards[k] - types[j].task_cost(alphas[k]) > own) return false;
            }
        }
        return true;
    };

    std::vector<double> best;
    double best_total = std::numeric_limits<double>::infinity();
    std::vector<double> rewards(j_count);
    // Condition (b) makes r_1 >= ... >= r_J necessary, which prunes the grid.
    for (long i1 = 0; i1 <= steps; ++i1) {
        rewards[0] = static_cast<double>(i1) * grid_step;
        if (rewards[0] >= best_total) break;
        if (j_count == 1) {
            if (feasible(rewards) && rewards[0] < best_total) {
                best_total = rewards[0];
                best = rewards;
            }
            continue;
        }
        for (long i2 = 0; i2 <= i1; ++i2) {
            rewards[1] = static_cast<double>(i2) * grid_step;
            if (rewards[0] + rewards[1] >= best_total) break;
            if (j_count == 2) {
                if (feasible(rewards)) {
                    best_total = rewards[0] + rewards[1];
                    best = rewards;
                }
                continue;
            }
            for (long i3 = 0; i3 <= i2; ++i3) {
                rewards[2] = static_cast<double>(i3) * grid_step;
                const double total = rewards[0] + rewards[1] + rewards[2];
                if (total >= best_total) break;
                if (feasible(rewards)) {
                    best_total = total;
                    best = rewards;
                }
            }
        }
    }
    if (best.empty()) throw Error(ErrorCode::NoRoot, "no feasible reward tuple on the grid");
    return best;
}

MechanismSolution end_to_end_solve(const OrganizerParams& p, const std::vector<HunterType>& types,
                                   int hunters, double gamma, double mean_reward,
                                   const std::vector<double>& detected_rewards) {
    p.validate();
    validate_types(types);
    if (hunters != static_cast<int>(types.size()))
        throw Error(ErrorCode::Precondition, "J = M violated");
    if (detected_rewards.size() != types.size())
        throw Error(ErrorCode::Precondition, "one detected-rewards sum per type required");

    MechanismSolution solution;
    solution.gamma = gamma;
    solution.hunters = hunters;
    solution.self_report_ratio = optimal_self_report_ratio(p, mean_reward);
    solution.sigma = equilibrium_sigma(p, solution.self_report_ratio.value);
    solution.expected_undetected_stage1 = expected_undetected_stage1(p, solution.sigma.value);
    solution.organizer_utility =
        organizer_utility(p, solution.self_report_ratio.value, solution.sigma.value, mean_reward);
    solution.detection_set_size =
        solution.expected_undetected_stage1 / static_cast<double>(hunters);

    const TaskComplexitySolution tasks =
        solve_task_complexities(types, hunters, gamma, solution.expected_undetected_stage1);
    solution.lambda = tasks.lambda;

    std::vector<double> probs;
    for (std::size_t j = 0; j < types.size(); ++j) {
        const TypeSolution& t = tasks.types[j];
        Contract c;
        c.task_complexity = t.task_complexity;
        c.detection_prob = t.detection_prob;
        c.reward = t.reward;
        c.reward_ratio = optimal_reward_ratio(t.reward, types[j].capability, gamma,
                                              t.task_complexity, detected_rewards[j]);
        probs.push_back(t.detection_prob);
        solution.menu.push_back(c);
    }
    solution.expected_undetected_stage3 =
        expected_undetected_stage3(solution.expected_undetected_stage1, probs, hunters);
    return solution;
}

} // namespace airdrop::mech
