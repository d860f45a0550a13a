#pragma once

#include <string>
#include <vector>

#include "skirent/worst_case.hpp"

namespace skirent {

/// Randomized behavioral policy given by per-state stop probabilities.
/// A state is (day t in 1..T, good-day count k including the current day,
/// current-day weather). Stop probability is 0 on bad days; good-weather
/// probabilities are stored in a triangular table over (t, k), k in 1..t.
class BehavioralPolicy {
  public:
    BehavioralPolicy(SkiInstance inst, std::vector<double> good_stop_prob);

    int horizon() const { return inst_.horizon; }
    double stop_cost() const { return inst_.stop_cost; }
    const SkiInstance& instance() const { return inst_; }

    /// Throws std::invalid_argument for structurally impossible states
    /// (t outside 1..T, k > t, or a good-weather state with k = 0).
    double stop_prob(int day, int good_count, bool good_weather) const;

    /// Triangular index of the good-weather state (day, good_count).
    static std::size_t state_index(int day, int good_count);
    static std::size_t table_size(int horizon);

  private:
    SkiInstance inst_;
    std::vector<double> good_stop_prob_;
};

/// Subgame-optimal policy: each observed bad day shrinks the effective
/// horizon, and on a good day the policy stops with the conditional
/// probability of the worst-case optimum at that effective horizon.
BehavioralPolicy subgame_policy(const SkiInstance& inst);

/// Expected cost of a behavioral policy on a fixed sequence, walking the
/// survival probability through the days.
double policy_cost_on_sequence(const BehavioralPolicy& policy,
                               const std::vector<int>& sequence);

/// Exact expected cost under i.i.d. good-day probability p, by dynamic
/// programming over (day, good count) survival states.
double policy_expected_cost(const BehavioralPolicy& policy, double p);

/// Worst-case ratio of the worst-case optimal algorithm against the
/// subgame-optimal benchmark; equals the value of the game.
double sg_benchmark_ratio(const SkiInstance& inst);

/// JSON object mapping "t,k" to the stop probability of good-weather states
/// (bad-weather states omitted, implied 0).
std::string policy_dump_json(const BehavioralPolicy& policy);

}  // namespace skirent
