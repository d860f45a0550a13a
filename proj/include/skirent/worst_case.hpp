#pragma once

#include <vector>

namespace skirent {

/// Finite-horizon ski-rental instance. Continuation on a good day costs 1
/// (the paper normalization behind B > 1); stopping costs B once. The prior
/// floor delta only matters to the Bayesian and prior-independent layers.
struct SkiInstance {
    int horizon = 1;          // T
    double stop_cost = 2.0;   // B
    double prior_floor = 1e-3;  // delta

    void validate() const;  // T >= 1, B > 1, delta in (0, 1]

    /// Stopping can never beat continuing for all T days.
    bool trivial() const { return stop_cost >= static_cast<double>(horizon); }
};

/// Mixture over good-day-count thresholds: with probability probs[i] play the
/// algorithm that continues through the first support[i] good days and stops
/// on the next one (threshold T never stops). value is the competitive ratio
/// guaranteed by the mixture.
struct ThresholdMixture {
    std::vector<int> support;
    std::vector<double> probs;
    double value = 1.0;
};

/// Conditional stop probabilities: eta[k] is the probability of stopping on
/// the k-th contiguous good day given the algorithm continued so far.
/// Indexed 1..T; eta[0] is unused.
struct StopSchedule {
    std::vector<double> eta;
    int effective_horizon = 0;
};

/// Adversary payoff in the reduced game: threshold l against the input with
/// k leading good days. (l+B)/min(k,B) when the algorithm stops (k > l),
/// else k/min(k,B).
double reduced_payoff(int l, int k, const SkiInstance& inst);

/// Worst-case optimal mixture over thresholds and the game value.
ThresholdMixture worst_case_mixture(const SkiInstance& inst);

/// Value of the reduced game: the competitive ratio of the instance.
double competitive_ratio(const SkiInstance& inst);

StopSchedule conditional_stop_probs(const SkiInstance& inst);

/// Expected cost of the mixture on a fixed weather sequence (1 = good).
double wc_cost_on_sequence(const ThresholdMixture& mix,
                           const std::vector<int>& sequence,
                           const SkiInstance& inst);

/// Cost of the pure threshold-l algorithm on a sequence.
double threshold_cost_on_sequence(int l, const std::vector<int>& sequence,
                                  const SkiInstance& inst);

/// min(#good days, B): the optimal hindsight cost of a sequence.
double hindsight_opt_cost(const std::vector<int>& sequence, const SkiInstance& inst);

/// x^e for integer e >= 0 by repeated multiplication.
double ipow(double x, int e);

}  // namespace skirent
