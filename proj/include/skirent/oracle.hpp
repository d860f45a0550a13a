#pragma once

#include <string>
#include <vector>

#include "skirent/bayes.hpp"
#include "skirent/game.hpp"
#include "skirent/subgame.hpp"
#include "skirent/worst_case.hpp"

// Brute-force ground truth used by the test suites. Everything here is
// computed by enumeration or certified self-play and never calls into the
// closed-form or DP solver operations it is meant to check.
namespace skirent::oracle {

struct DenseGame {
    PayoffTable payoff;
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
};

struct MinimaxResult {
    double value = 0.0;
    MixedStrategy row_mix;
    MixedStrategy col_mix;
    double certified_gap = 0.0;
    int iterations = 0;
};

struct BestResponseSearch {
    InfoSymmetricPolicy policy;
    double objective = 0.0;
};

/// Expected policy cost as the explicit sum over all 2^T weather sequences.
/// Guarded at T <= 20.
double enumerate_policy_cost(const InfoSymmetricPolicy& policy, const SkiInstance& inst,
                             double p);

/// Expected behavioral-policy cost by the same full enumeration.
double enumerate_behavioral_cost(const BehavioralPolicy& policy, const SkiInstance& inst,
                                 double p);

/// Exhaustive minimization of E_prior[cost/opt] over every valid decision
/// table (bad days and the last day fixed to Continue); the optimal cost in
/// the denominator is itself found by exhaustive search. Guarded at T <= 6.
BestResponseSearch enumerate_best_response(const DiscretePrior& prior,
                                           const SkiInstance& inst);

/// Certified minimax of the reduced threshold-vs-good-run game
/// (rows: thresholds 0..T, cols: good-day counts 1..T). Solved by Hedge
/// self-play with a support-polish refinement; the returned profile is
/// re-certified through eps_nash_gap and the call throws if the gap target
/// cannot be met. Guarded at T <= 12.
MinimaxResult brute_minimax_reduced(const SkiInstance& inst);

/// Same certified procedure on an arbitrary table (at most 200x200).
MinimaxResult brute_minimax_dense(const DenseGame& game);

}  // namespace skirent::oracle
