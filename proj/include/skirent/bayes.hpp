#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "skirent/worst_case.hpp"

namespace skirent {

enum class Decision : std::uint8_t { Continue = 0, Stop = 1 };

/// Deterministic stop/continue table indexed by (day t in 1..T, good-day
/// count k in 0..t-1 among the first t-1 days, current weather). The class is
/// restricted: never stop on bad weather, always continue on the last day.
/// Only good-weather decisions are stored.
class InfoSymmetricPolicy {
  public:
    explicit InfoSymmetricPolicy(int horizon);  // all-continue

    int horizon() const { return horizon_; }

    /// Decision at (day, good_count, weather); bad weather is always Continue.
    Decision decision(int day, int good_count, bool good_weather) const;

    /// Set the good-weather decision. Throws for day == horizon (the last day
    /// must continue) or out-of-range states.
    void set_stop(int day, int good_count, bool stop);

    bool stops(int day, int good_count) const {
        return decision(day, good_count, true) == Decision::Stop;
    }

    bool operator==(const InfoSymmetricPolicy& other) const {
        return horizon_ == other.horizon_ && stop_ == other.stop_;
    }

  private:
    std::size_t index(int day, int good_count) const;
    int horizon_;
    std::vector<std::uint8_t> stop_;  // triangular over (day, good_count)
};

/// Discrete distribution over good-day probabilities in [delta, 1].
struct DiscretePrior {
    std::vector<double> support;  // distinct, ascending
    std::vector<double> weights;  // positive, sum to 1

    void validate(double prior_floor) const;
};

/// Expected cost of a policy together with its per-state continuation costs.
struct CostBreakdown {
    double total = 0.0;
    // Continuation cost from state (day, good_count, weather), triangular
    // layout matching InfoSymmetricPolicy.
    std::vector<double> cont_good;
    std::vector<double> cont_bad;
    int horizon = 0;

    double continuation_cost(int good_count, int day, bool good_weather) const;
};

/// The p-known optimal policy: stop on a good day at index t iff
/// p >= (B-1)/(T-t) and t is within the stopping window; never stop on bad
/// days. Requires p in [delta, 1].
InfoSymmetricPolicy bayes_threshold_policy(const SkiInstance& inst, double p);

/// Closed-form expected cost of the p-known optimum.
double bayes_opt_cost(const SkiInstance& inst, double p);

/// Exact expected cost of a policy under i.i.d.-p weather via backward
/// dynamic programming over (good_count, day, weather) states.
CostBreakdown policy_cost(const InfoSymmetricPolicy& policy, const SkiInstance& inst,
                          double p);

/// Ratio of the policy's expected cost to the p-known optimal cost.
/// Requires p >= delta so the denominator is bounded away from zero.
double pi_utility(const InfoSymmetricPolicy& policy, const SkiInstance& inst, double p);

/// Backwards induction minimizing E_{p ~ prior}[cost(A, p) / opt_cost(p)].
/// Exact ties at a state resolve to Continue.
InfoSymmetricPolicy best_response(const DiscretePrior& prior, const SkiInstance& inst);

/// True iff stopping at count k implies stopping at count k+1, for every day.
bool is_thresholding(const InfoSymmetricPolicy& policy);

/// Render the good-day-count threshold algorithm as a policy table: stop on a
/// good day iff at least l good days were already seen (never on the last
/// day, where continuing dominates).
InfoSymmetricPolicy threshold_as_policy(const SkiInstance& inst, int l);

nlohmann::json policy_to_json(const InfoSymmetricPolicy& policy);
InfoSymmetricPolicy policy_from_json(const nlohmann::json& j);

}  // namespace skirent
