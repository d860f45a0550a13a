#include "skirent/pi_solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "skirent/hedge.hpp"

namespace skirent {

CoverGrid build_cover(const SkiInstance& inst, double eps,
                      std::optional<double> pitch_override) {
    inst.validate();
    if (!(eps > 0.0)) throw std::invalid_argument("build_cover: eps must be positive");
    if (!(inst.prior_floor < 1.0)) throw std::invalid_argument("build_cover: delta must be < 1");

    const int T = inst.horizon;
    const double B = inst.stop_cost;
    const double delta = inst.prior_floor;

    CoverGrid grid;
    const double theoretical =
        eps / (8.0 * (B + 1.0) * (B + 1.0) * (T + 1.0) * (T + 1.0) * T);
    grid.bar_eps = pitch_override.value_or(theoretical);
    if (!(grid.bar_eps > 0.0)) throw std::invalid_argument("build_cover: pitch must be positive");

    // Interval right endpoints: (B-1)/(T-1) for the always-continue range,
    // then (B-1)/(T-k-1) capped at 1.
    if (inst.trivial() || T == 1) {
        grid.segment_bounds = {1.0};
    } else {
        grid.segment_bounds.push_back((B - 1.0) / (T - 1));
        const int kmax = std::min(static_cast<int>(std::ceil(T - B)), T - 1);
        for (int k = 1; k <= kmax; ++k) {
            const double right =
                (T - k - 1 <= 0) ? 1.0 : std::min((B - 1.0) / (T - k - 1), 1.0);
            grid.segment_bounds.push_back(right);
            if (right >= 1.0) break;
        }
    }

    double left = delta;
    bool first_interval = true;
    for (std::size_t seg = 0; seg < grid.segment_bounds.size(); ++seg) {
        const double right = grid.segment_bounds[seg];
        if (right < delta) {
            left = right;
            continue;
        }
        const double lo = std::max(left, delta);
        // The first covered interval is closed on the left; later intervals
        // are open there (the seam belongs to the interval on its left).
        double x = first_interval ? lo : lo + grid.bar_eps;
        while (x < right - 1e-15) {
            grid.points.push_back(x);
            grid.interval_of.push_back(static_cast<int>(seg));
            x += grid.bar_eps;
        }
        grid.points.push_back(right);
        grid.interval_of.push_back(static_cast<int>(seg));
        left = right;
        first_interval = false;
    }
    return grid;
}

namespace {

std::string policy_key(const InfoSymmetricPolicy& policy) {
    std::string key;
    key.reserve(static_cast<std::size_t>(policy.horizon()) * policy.horizon() / 2);
    for (int t = 1; t <= policy.horizon(); ++t)
        for (int k = 0; k < t; ++k) key.push_back(policy.stops(t, k) ? '1' : '0');
    return key;
}

}  // namespace

PiSolution solve_pi(const SkiInstance& inst, double eps, const SolveOptions& options) {
    inst.validate();
    if (!(eps > 0.0)) throw std::invalid_argument("solve_pi: eps must be positive");

    PiSolution sol;
    sol.grid = build_cover(inst, eps, options.pitch_override);
    if (inst.trivial()) {
        sol.policies = {InfoSymmetricPolicy(inst.horizon)};  // always continue
        sol.policy_weights = {1.0};
        sol.adversary = MixedStrategy::uniform(sol.grid.points.size());
        sol.value = 1.0;
        sol.certified_gap = 0.0;
        sol.rounds = 0;
        sol.converged = true;
        return sol;
    }

    const CoverGrid& grid = sol.grid;
    const std::size_t m = grid.points.size();
    std::vector<double> opt_cost(m);
    for (std::size_t j = 0; j < m; ++j) opt_cost[j] = bayes_opt_cost(inst, grid.points[j]);

    const double u_bar = (inst.stop_cost + 1.0) * (inst.horizon + 1.0);

    // The loop re-evaluates the same few support policies against every grid
    // point each round; memoize whole utility rows per policy, with a
    // last-policy fast path since calls arrive grouped by policy.
    std::map<std::string, std::vector<double>> utility_rows;
    InfoSymmetricPolicy last_policy(inst.horizon);
    const std::vector<double>* last_row = nullptr;
    std::function<double(const InfoSymmetricPolicy&, std::size_t)> payoff =
        [&](const InfoSymmetricPolicy& policy, std::size_t j) {
            if (last_row == nullptr || !(policy == last_policy)) {
                const std::string key = policy_key(policy);
                auto it = utility_rows.find(key);
                if (it == utility_rows.end()) {
                    std::vector<double> row(m);
                    for (std::size_t c = 0; c < m; ++c)
                        row[c] = policy_cost(policy, inst, grid.points[c]).total / opt_cost[c];
                    it = utility_rows.emplace(key, std::move(row)).first;
                }
                last_policy = policy;
                last_row = &it->second;
            }
            return (*last_row)[j];
        };
    std::function<InfoSymmetricPolicy(const MixedStrategy&)> respond =
        [&](const MixedStrategy& adv) {
            // Far-out grid weights can underflow to exact zeros late in a
            // run; zero-weight atoms carry no influence, so drop them.
            DiscretePrior prior;
            for (std::size_t j = 0; j < adv.weights.size(); ++j) {
                if (adv.weights[j] > 0.0) {
                    prior.support.push_back(grid.points[j]);
                    prior.weights.push_back(adv.weights[j]);
                }
            }
            return best_response(prior, inst);
        };

    LearningOutcome<InfoSymmetricPolicy> outcome = run_br_loop<InfoSymmetricPolicy>(
        m, payoff, respond, u_bar, eps / 4.0, options.max_rounds, options.trace);

    // Merge the per-round responses into a weighted support, in order of
    // first appearance; a key map keeps the merge linear-ish.
    std::map<std::string, std::size_t> seen;
    for (const InfoSymmetricPolicy& policy : outcome.best_responses) {
        const std::string key = policy_key(policy);
        auto it = seen.find(key);
        if (it == seen.end()) {
            seen.emplace(key, sol.policies.size());
            sol.policies.push_back(policy);
            sol.policy_weights.push_back(1.0);
        } else {
            sol.policy_weights[it->second] += 1.0;
        }
    }
    for (double& w : sol.policy_weights) w /= static_cast<double>(outcome.rounds_used);

    // Re-certify on the realized finite game.
    std::vector<std::vector<double>> rows;
    rows.reserve(sol.policies.size());
    for (const InfoSymmetricPolicy& policy : sol.policies) {
        std::vector<double> row(m);
        for (std::size_t j = 0; j < m; ++j) row[j] = payoff(policy, j);
        rows.push_back(std::move(row));
    }
    const PayoffTable realized = PayoffTable::from_rows(std::move(rows));
    const MixedStrategy row_mix{sol.policy_weights};
    const NashGaps gaps = eps_nash_gap(row_mix, outcome.avg_adversary, realized);

    double value = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < sol.policies.size(); ++i)
            col += sol.policy_weights[i] * realized.u[i][j];
        value = std::max(value, col);
    }

    sol.adversary = outcome.avg_adversary;
    sol.value = value;
    sol.certified_gap = gaps.max_gap();
    sol.rounds = outcome.rounds_used;
    sol.converged = outcome.converged;
    sol.gap_trace = std::move(outcome.gap_trace);
    return sol;
}

WorstPrior evaluate_against_worst_prior(const std::vector<InfoSymmetricPolicy>& policies,
                                        const std::vector<double>& weights,
                                        const CoverGrid& grid, const SkiInstance& inst) {
    if (policies.empty() || policies.size() != weights.size())
        throw std::invalid_argument("evaluate_against_worst_prior: empty or mismatched mixture");
    if (grid.points.empty()) throw std::invalid_argument("evaluate_against_worst_prior: empty grid");

    std::vector<double> ratios(grid.points.size());
    for (std::size_t j = 0; j < grid.points.size(); ++j) {
        const double p = grid.points[j];
        double cost = 0.0;
        for (std::size_t i = 0; i < policies.size(); ++i)
            cost += weights[i] * policy_cost(policies[i], inst, p).total;
        ratios[j] = cost / bayes_opt_cost(inst, p);
    }
    const double best = *std::max_element(ratios.begin(), ratios.end());
    // The ratio curve can be exactly flat over a stretch of priors; prefer
    // the largest prior among near-maximizers.
    WorstPrior out{grid.points.front(), best};
    for (std::size_t j = 0; j < grid.points.size(); ++j)
        if (ratios[j] >= best - 1e-12) out.worst_p = grid.points[j];
    return out;
}

nlohmann::json pi_solution_to_json(const PiSolution& solution, const SkiInstance& inst,
                                   const std::optional<std::string>& trace_csv_path) {
    nlohmann::json adversary = nlohmann::json::array();
    for (std::size_t j = 0; j < solution.adversary.weights.size(); ++j)
        adversary.push_back({solution.grid.points[j], solution.adversary.weights[j]});

    nlohmann::json policies = nlohmann::json::array();
    for (std::size_t i = 0; i < solution.policies.size(); ++i)
        policies.push_back({{"weight", solution.policy_weights[i]},
                            {"policy", policy_to_json(solution.policies[i])}});

    nlohmann::json j{{"instance",
                      {{"T", inst.horizon}, {"B", inst.stop_cost}, {"delta", inst.prior_floor}}},
                     {"value", solution.value},
                     {"certified_gap", solution.certified_gap},
                     {"rounds", solution.rounds},
                     {"converged", solution.converged},
                     {"adversary", adversary},
                     {"policies", policies}};
    if (trace_csv_path) j["trace_csv_path"] = *trace_csv_path;
    return j;
}

}  // namespace skirent
