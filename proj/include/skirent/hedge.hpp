#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <ostream>
#include <utility>
#include <vector>

#include "skirent/game.hpp"

namespace skirent {

/// Hedge (multiplicative weights) learner state for a maximizing player.
struct LearnerState {
    std::vector<double> log_weights;
    std::vector<double> cumulative_utility;
    double step_size = 0.0;
    double payoff_bound = 1.0;  // utilities must lie in [0, payoff_bound]
    int round = 0;

    static LearnerState start(std::size_t num_actions, double payoff_bound);

    /// Current mixture: softmax of log_weights, computed with a max shift.
    std::vector<double> probabilities() const;
};

/// Anytime step size sqrt(8 ln m / t) / u_bar for round t >= 1.
double hedge_step_size(std::size_t num_actions, int round, double payoff_bound);

/// One multiplicative-weights step: log_weights_i += step_size * utilities_i.
/// Throws std::invalid_argument naming the offending action if a utility
/// falls outside [0, payoff_bound].
LearnerState hedge_update(LearnerState state, const std::vector<double>& utilities);

/// Result of the best-response learning loop. The averaged adversary mixture
/// and the uniform mixture over per-round best responses form an approximate
/// Nash pair whose duality gap is final_gap.
template <typename Alg>
struct LearningOutcome {
    MixedStrategy avg_adversary;
    std::vector<Alg> best_responses;  // one per round, uniform-weighted
    double value_estimate = 0.0;
    std::vector<double> gap_trace;
    int rounds_used = 0;
    double final_gap = 0.0;
    bool converged = false;
};

/// Merge duplicate best responses (requires Alg::operator==); weights are the
/// merged uniform round weights, in order of first appearance.
template <typename Alg>
std::pair<std::vector<Alg>, std::vector<double>> merge_best_responses(
    const std::vector<Alg>& responses) {
    std::vector<Alg> unique;
    std::vector<double> weights;
    for (const Alg& a : responses) {
        bool found = false;
        for (std::size_t i = 0; i < unique.size(); ++i) {
            if (unique[i] == a) {
                weights[i] += 1.0;
                found = true;
                break;
            }
        }
        if (!found) {
            unique.push_back(a);
            weights.push_back(1.0);
        }
    }
    const double total = static_cast<double>(responses.size());
    for (double& w : weights) w /= total;
    return {std::move(unique), std::move(weights)};
}

/// Zero-sum learning loop: the adversary (maximizer, m actions) plays Hedge,
/// the algorithm player best-responds each round, and the adversary observes
/// the full utility vector of that best response.
///
/// Terminates when the empirical duality gap of the averaged pair,
///   max_j avg_t u(A^t, j)  -  min_A u(A, avg adversary mixture),
/// drops to eps, or after max_rounds (then converged = false and the final
/// gap is surfaced; callers decide how to proceed).
///
/// If trace is non-null, emits CSV lines "round,gap,value_estimate".
template <typename Alg>
LearningOutcome<Alg> run_br_loop(
    std::size_t num_adv_actions,
    const std::function<double(const Alg&, std::size_t)>& payoff,
    const std::function<Alg(const MixedStrategy&)>& best_response,
    double payoff_bound, double eps, int max_rounds,
    std::ostream* trace = nullptr) {
    if (eps <= 0.0) throw std::invalid_argument("run_br_loop: eps must be positive");
    if (num_adv_actions == 0) throw std::invalid_argument("run_br_loop: no adversary actions");
    if (max_rounds < 1) throw std::invalid_argument("run_br_loop: max_rounds must be >= 1");

    const std::size_t m = num_adv_actions;
    LearnerState state = LearnerState::start(m, payoff_bound);
    std::vector<double> mixture_sum(m, 0.0);

    LearningOutcome<Alg> out;
    out.best_responses.reserve(16);

    for (int t = 1; t <= max_rounds; ++t) {
        const std::vector<double> probs = state.probabilities();
        for (std::size_t j = 0; j < m; ++j) mixture_sum[j] += probs[j];

        Alg br = best_response(MixedStrategy{probs});
        std::vector<double> utilities(m);
        for (std::size_t j = 0; j < m; ++j) utilities[j] = payoff(br, j);
        out.best_responses.push_back(std::move(br));

        state.step_size = hedge_step_size(m, t, payoff_bound);
        state = hedge_update(std::move(state), utilities);

        MixedStrategy avg_adv{mixture_sum};
        for (double& w : avg_adv.weights) w /= static_cast<double>(t);

        double upper = 0.0;
        for (std::size_t j = 0; j < m; ++j)
            upper = std::max(upper, state.cumulative_utility[j] / static_cast<double>(t));

        const Alg responder = best_response(avg_adv);
        double lower = 0.0;
        for (std::size_t j = 0; j < m; ++j)
            lower += avg_adv.weights[j] * payoff(responder, j);

        const double gap = std::max(upper - lower, 0.0);
        out.gap_trace.push_back(gap);
        out.avg_adversary = std::move(avg_adv);
        out.value_estimate = upper;
        out.rounds_used = t;
        out.final_gap = gap;
        if (trace) *trace << t << ',' << gap << ',' << upper << '\n';
        if (gap <= eps) {
            out.converged = true;
            break;
        }
    }
    return out;
}

}  // namespace skirent
