#include "skirent/hedge.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace skirent {

LearnerState LearnerState::start(std::size_t num_actions, double payoff_bound) {
    if (num_actions == 0) throw std::invalid_argument("LearnerState: empty action set");
    if (!(payoff_bound > 0.0)) throw std::invalid_argument("LearnerState: payoff bound must be positive");
    LearnerState s;
    s.log_weights.assign(num_actions, 0.0);
    s.cumulative_utility.assign(num_actions, 0.0);
    s.payoff_bound = payoff_bound;
    return s;
}

std::vector<double> LearnerState::probabilities() const {
    double shift = log_weights.front();
    for (double w : log_weights) shift = std::max(shift, w);
    std::vector<double> probs(log_weights.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < log_weights.size(); ++i) {
        probs[i] = std::exp(log_weights[i] - shift);
        sum += probs[i];
    }
    for (double& p : probs) p /= sum;
    return probs;
}

double hedge_step_size(std::size_t num_actions, int round, double payoff_bound) {
    const double m = static_cast<double>(num_actions < 2 ? 2 : num_actions);
    return std::sqrt(8.0 * std::log(m) / static_cast<double>(round)) / payoff_bound;
}

LearnerState hedge_update(LearnerState state, const std::vector<double>& utilities) {
    if (utilities.size() != state.log_weights.size())
        throw std::invalid_argument("hedge_update: utility vector size mismatch");
    for (std::size_t i = 0; i < utilities.size(); ++i) {
        const double u = utilities[i];
        if (!std::isfinite(u) || u < 0.0 || u > state.payoff_bound)
            throw std::invalid_argument("hedge_update: utility for action " + std::to_string(i) +
                                        " outside [0, " + std::to_string(state.payoff_bound) + "]");
    }
    for (std::size_t i = 0; i < utilities.size(); ++i) {
        state.log_weights[i] += state.step_size * utilities[i];
        state.cumulative_utility[i] += utilities[i];
    }
    state.round += 1;
    return state;
}

}  // namespace skirent
