#include "airdrop/oracles.hpp"

#include "airdrop/detectors.hpp"
#include "airdrop/errors.hpp"
#include "airdrop/io_util.hpp"
#include "airdrop/mechanism.hpp"
#include "airdrop/profit.hpp"
#include "airdrop/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace airdrop::oracle {

using synth::SplitMix64;

CheckResult check_reference_rewards() {
    const RewardParams params;
    struct Row {
        double m_e;
        int m_v;
        double expected;
    };
    const Row rows[] = {{2.6045, 3, 341.1181}, {2.5109, 3, 328.8595}, {2.4967, 3, 327.0050}};
    double worst = 0.0;
    for (const Row& row : rows)
        worst = std::max(worst, std::abs(compute_reward(row.m_e, row.m_v, params) - row.expected));
    CheckResult result{"reference_rewards", worst <= 0.005,
                       "max reward deviation " + fmt_double(worst) + " USD (tol 0.005)"};
    return result;
}

CheckResult check_volume_boundaries() {
    const RewardParams params;
    const std::pair<double, int> cases[] = {{999.99, 0}, {1000.0, 1}, {1999.99, 1},
                                            {2000.0, 2}, {2999.99, 2}, {3000.0, 3}};
    int bad = 0;
    for (const auto& [volume, expected] : cases)
        if (volume_multiplier(volume, params) != expected) ++bad;
    return {"volume_boundaries", bad == 0, std::to_string(bad) + " boundary mismatches of 6"};
}

CheckResult check_self_report_stationarity() {
    SplitMix64 rng(0x51a710);
    constexpr int kSets = 100;
    constexpr double kStep = 1e-5;
    constexpr double kTol = 1e-4;

    int accepted = 0;
    int mismatches = 0;
    double worst = 0.0;
    int guard = 0;
    while (accepted < kSets && ++guard < 100000) {
        mech::OrganizerParams p;
        p.baseline_detection = rng.next_range(0.05, 0.35);
        p.externality = rng.next_range(0.5, 1.5);
        p.total_addresses = 200 + static_cast<int>(rng.next_below(1800));
        p.total_tokens = rng.next_range(500.0, 5000.0);
        p.expected_hunters = rng.next_range(0.05, 0.3) * p.total_addresses;
        p.value_per_reduction = rng.next_range(0.1, 2.0);
        p.detection_cost = rng.next_range(0.01, 1.0);
        const double mean_reward = rng.next_range(1.0, 50.0);

        const mech::ClampedValue closed = mech::optimal_self_report_ratio(p, mean_reward);
        if (closed.flag != mech::ClampFlag::interior || closed.value < 0.02 || closed.value > 0.98)
            continue;
        ++accepted;

        double best_pi = 0.0;
        double best_u = -1e300;
        const long steps = static_cast<long>(std::llround(1.0 / kStep));
        for (long i = 0; i <= steps; ++i) {
            const double pi_s = static_cast<double>(i) * kStep;
            const double sigma = mech::equilibrium_sigma(p, pi_s).value;
            const double u = mech::organizer_utility(p, pi_s, sigma, mean_reward);
            if (u > best_u) {
                best_u = u;
                best_pi = pi_s;
            }
        }
        const double diff = std::abs(best_pi - closed.value);
        worst = std::max(worst, diff);
        if (diff > kTol) ++mismatches;
    }
    return {"self_report_stationarity", mismatches == 0,
            std::to_string(mismatches) + "/" + std::to_string(accepted) +
                " grid argmax mismatches, worst |pi_grid - pi_closed| = " + fmt_double(worst)};
}

CheckResult check_nash_soundness() {
    SplitMix64 rng(0x4a5e);
    int fixed_point_misses = 0;
    int supermod_violations = 0;
    int instances = 0;

    for (int inst = 0; inst < 50; ++inst) {
        const std::size_t n = 2 + rng.next_below(11); // <= 12
        mech::OrganizerParams p;
        p.baseline_detection = rng.next_range(0.05, 0.3);
        p.externality = rng.next_range(0.5, 1.5);
        p.total_addresses = static_cast<int>(n) + static_cast<int>(rng.next_below(100));
        p.expected_hunters = static_cast<double>(n);
        const double pi_s = rng.next_range(0.05, 0.6);

        std::vector<mech::AttackerProfile> profiles(n);
        for (auto& profile : profiles) {
            profile.reward = rng.next_range(1.0, 100.0);
            profile.cost = rng.next_range(0.0, 5.0);
        }
        ++instances;

        const auto equilibria = mech::enumerate_pure_ne(profiles, p, pi_s);
        auto contains = [&](const std::vector<int>& x) {
            return std::find(equilibria.begin(), equilibria.end(), x) != equilibria.end();
        };

        std::vector<std::vector<int>> starts = {std::vector<int>(n, 0), std::vector<int>(n, 1)};
        for (int s = 0; s < 3; ++s) {
            std::vector<int> random_start(n);
            for (auto& x : random_start) x = static_cast<int>(rng.next_below(2));
            starts.push_back(std::move(random_start));
        }
        for (const auto& start : starts) {
            const auto result = mech::best_response_dynamics(profiles, p, pi_s, start);
            if (result.converged && !contains(result.profile)) ++fixed_point_misses;
        }

        // Increasing differences on sampled ordered profile pairs.
        for (int s = 0; s < 1000; ++s) {
            const std::uint32_t low = static_cast<std::uint32_t>(rng.next_below(1u << n));
            const std::uint32_t high = low | static_cast<std::uint32_t>(rng.next_below(1u << n));
            const std::size_t i = rng.next_below(n);
            auto others_mass = [&](std::uint32_t mask) {
                double total = 0.0;
                for (std::size_t k = 0; k < n; ++k)
                    if (k != i) total += (mask >> k) & 1u;
                return total;
            };
            const double s_low = others_mass(low);
            const double s_high = others_mass(high);
            const double d_low = mech::attacker_utility(1, s_low, profiles[i], p, pi_s) -
                                 mech::attacker_utility(0, s_low, profiles[i], p, pi_s);
            const double d_high = mech::attacker_utility(1, s_high, profiles[i], p, pi_s) -
                                  mech::attacker_utility(0, s_high, profiles[i], p, pi_s);
            if (d_high - d_low < -1e-12) ++supermod_violations;
        }
    }
    return {"nash_soundness", fixed_point_misses == 0 && supermod_violations == 0,
            std::to_string(fixed_point_misses) + " fixed points outside the enumeration, " +
                std::to_string(supermod_violations) + " increasing-difference violations over " +
                std::to_string(instances) + " instances"};
}

CheckResult check_reward_menu_minimality() {
    SplitMix64 rng(0x1e77a2);
    constexpr double kStep = 0.01;
    int increment_misses = 0;
    int component_misses = 0;
    int infeasible = 0;

    for (int inst = 0; inst < 20; ++inst) {
        const std::size_t j_count = 1 + rng.next_below(3);
        std::vector<mech::HunterType> types(j_count);
        std::vector<double> alphas(j_count);
        double theta = rng.next_range(3.0, 5.0);
        double cost = rng.next_range(0.05, 0.15);
        double alpha = rng.next_range(1.2, 2.0);
        for (std::size_t j = 0; j < j_count; ++j) {
            types[j].capability = theta;
            // Feasibility needs variable costs increasing across types and
            // enough incentive-window width to absorb grid rounding.
            types[j].variable_cost = cost;
            types[j].fixed_cost = rng.next_range(0.0, 0.2);
            alphas[j] = alpha;
            theta -= rng.next_range(0.3, 0.8);
            cost += rng.next_range(0.1, 0.3);
            alpha -= rng.next_range(0.3, 0.5);
        }

        const std::vector<double> closed = mech::optimal_rewards(types, alphas);
        const std::vector<double> grid = mech::brute_force_contract_oracle(types, alphas, kStep);

        for (std::size_t j = 0; j < j_count; ++j) {
            const double closed_inc = j + 1 < j_count ? closed[j] - closed[j + 1] : closed[j];
            const double grid_inc = j + 1 < j_count ? grid[j] - grid[j + 1] : grid[j];
            if (std::abs(grid_inc - closed_inc) > kStep + 1e-9) ++increment_misses;
            if (std::abs(grid[j] - closed[j]) >
                static_cast<double>(j_count) * kStep + 1e-9)
                ++component_misses;
        }

        std::vector<std::pair<double, double>> menu;
        for (std::size_t j = 0; j < j_count; ++j) menu.emplace_back(alphas[j], closed[j]);
        if (!mech::check_feasibility(types, menu).feasible) ++infeasible;
    }
    return {"reward_menu_minimality",
            increment_misses == 0 && component_misses == 0 && infeasible == 0,
            std::to_string(increment_misses) + " increments beyond one grid step, " +
                std::to_string(component_misses) + " components beyond J steps, " +
                std::to_string(infeasible) + " infeasible menus"};
}

CheckResult check_task_complexity_stationarity() {
    SplitMix64 rng(0xa146);
    constexpr double kTol = 1e-8;
    int residual_misses = 0;
    int ordering_misses = 0;

    for (int inst = 0; inst < 20; ++inst) {
        const int j_count = 1 + static_cast<int>(rng.next_below(5));
        const double gamma = rng.next_range(0.5, 2.0);
        // Equal per-type weights keep the stationarity root inside the
        // admissible lambda interval for capabilities above 2.
        const double weight = rng.next_range(0.2, 1.0);
        std::vector<mech::HunterType> types(static_cast<std::size_t>(j_count));
        double theta = rng.next_range(5.0, 6.0);
        for (int j = 0; j < j_count; ++j) {
            types[static_cast<std::size_t>(j)].capability = theta;
            types[static_cast<std::size_t>(j)].variable_cost =
                weight / static_cast<double>(j_count - j);
            types[static_cast<std::size_t>(j)].fixed_cost = rng.next_range(0.0, 0.1);
            theta -= rng.next_range(0.1, 0.4);
        }

        const auto solution = mech::solve_task_complexities(types, j_count, gamma, 10.0);
        double v = 0.0;
        double u = 1.0;
        for (int j = 0; j < j_count; ++j) {
            const auto& t = solution.types[static_cast<std::size_t>(j)];
            const double w = static_cast<double>(j_count - j) *
                             types[static_cast<std::size_t>(j)].variable_cost;
            const double residual =
                (gamma / j_count) * t.detection_prob * (1.0 - t.detection_prob) -
                solution.lambda * w;
            if (std::abs(residual) > kTol) ++residual_misses;
            const double a_j = solution.lambda * j_count * w / gamma;
            if (a_j > 0.25 + 1e-12) ++ordering_misses;
            if (j > 0 && solution.types[static_cast<std::size_t>(j - 1)].task_complexity <
                             t.task_complexity - 1e-12)
                ++ordering_misses;
            v += w * t.task_complexity;
            u -= t.detection_prob / j_count;
        }
        if (std::abs(solution.lambda * v - u) > kTol) ++residual_misses;
    }
    return {"task_complexity_stationarity", residual_misses == 0 && ordering_misses == 0,
            std::to_string(residual_misses) + " residuals above 1e-8, " +
                std::to_string(ordering_misses) + " ordering/bound violations"};
}

CheckResult check_reward_ratio_roundtrip() {
    SplitMix64 rng(0x707e);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double reward = rng.next_range(0.1, 100.0);
        const double theta = rng.next_range(-2.0, 6.0);
        const double gamma = rng.next_range(0.1, 3.0);
        const double alpha = rng.next_range(0.0, 5.0);
        const double pool = rng.next_range(1.0, 1000.0);
        const double ratio = mech::optimal_reward_ratio(reward, theta, gamma, alpha, pool);
        const double p = mech::detection_probability(theta, gamma, alpha);
        worst = std::max(worst, std::abs(ratio * p * pool - reward));
    }
    return {"reward_ratio_roundtrip", worst <= 1e-10,
            "worst |pi*p*sum(R) - r| = " + fmt_double(worst) + " (tol 1e-10)"};
}

CheckResult check_planted_recovery() {
    int recovery_misses = 0;
    int specificity_misses = 0;

    for (int k = 0; k < 20; ++k) {
        synth::SynthSpec spec;
        spec.seed = 9000 + static_cast<std::uint64_t>(k);
        spec.n_groups = 1 + k % 2;
        spec.addresses_per_group = 8 + 4 * (k % 3);
        spec.seq_chain_length = 3;
        spec.value_jitter_fraction = 0.004 + 0.0005 * (k % 4);
        spec.time_jitter_seconds = 600 + 150 * (k % 3);

        DetectorConfig cfg;
        cfg.value_tolerance = spec.value_jitter_fraction;
        cfg.time_window = spec.time_jitter_seconds;

        const auto exact = synth::generate(spec);
        for (std::size_t g = 0; g < exact.groups.size(); ++g) {
            const auto report = detect_funder_receiver(exact.ledger, exact.groups[g]);
            const auto chains = detect_sequential_transfers(exact.ledger, exact.groups[g], cfg);
            const auto match = synth::label_match(report, chains, exact.truth.groups[g]);
            if (match.funder.precision != 1.0 || match.funder.recall != 1.0 ||
                match.receiver.precision != 1.0 || match.receiver.recall != 1.0 ||
                match.chains.precision != 1.0 || match.chains.recall != 1.0)
                ++recovery_misses;
        }

        synth::SynthSpec loose = spec;
        loose.value_jitter_fraction = 2.0 * cfg.value_tolerance;
        loose.time_jitter_seconds = 2 * cfg.time_window;
        const auto noisy = synth::generate(loose);
        for (const auto& group : noisy.groups)
            if (!detect_sequential_transfers(noisy.ledger, group, cfg).empty())
                ++specificity_misses;
    }
    return {"planted_recovery", recovery_misses == 0 && specificity_misses == 0,
            std::to_string(recovery_misses) + " groups below exact recovery, " +
                std::to_string(specificity_misses) + " groups with detections at 2x jitter"};
}

CheckResult check_uniformity_monotonicity() {
    int violations = 0;
    const double count_sweep[] = {0.0, 1.0, 2.0, 5.0, 10.0};
    const double volume_sweep[] = {0.0, 50.0, 100.0, 300.0, 1000.0};

    for (int k = 0; k < 6; ++k) {
        synth::SynthSpec spec;
        spec.seed = 400 + static_cast<std::uint64_t>(k);
        spec.n_groups = 2;
        spec.addresses_per_group = 6 + 2 * k;
        spec.uniform_tx_count = 2 + k % 3;
        const auto out = synth::generate(spec);
        for (const auto& group : out.groups) {
            DetectorConfig cfg;
            double prev_count = -1.0;
            for (double eps : count_sweep) {
                cfg.count_threshold = eps;
                const double u = compute_uniformity(out.ledger, group, cfg).u_count;
                if (u < prev_count - 1e-12) ++violations;
                prev_count = u;
            }
            cfg = DetectorConfig{};
            double prev_volume = -1.0;
            for (double eps : volume_sweep) {
                cfg.volume_threshold = eps;
                const double u = compute_uniformity(out.ledger, group, cfg).u_volume;
                if (u < prev_volume - 1e-12) ++violations;
                prev_volume = u;
            }
        }
    }
    return {"uniformity_monotonicity", violations == 0,
            std::to_string(violations) + " monotonicity violations across threshold sweeps"};
}

std::vector<CheckResult> run_all() {
    return {check_reference_rewards(),
            check_volume_boundaries(),
            check_self_report_stationarity(),
            check_nash_soundness(),
            check_reward_menu_minimality(),
            check_task_complexity_stationarity(),
            check_reward_ratio_roundtrip(),
            check_planted_recovery(),
            check_uniformity_monotonicity()};
}

} // namespace airdrop::oracle
