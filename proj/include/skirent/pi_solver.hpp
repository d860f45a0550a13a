#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "skirent/bayes.hpp"
#include "skirent/game.hpp"
#include "skirent/worst_case.hpp"

namespace skirent {

/// Discretization of the prior space [delta, 1], split at the breakpoints
/// where the p-known optimal policy changes. Every interval's right endpoint
/// (including 1.0) and delta itself are grid points; each point is owned by
/// exactly one interval.
struct CoverGrid {
    std::vector<double> points;          // ascending
    std::vector<int> interval_of;        // owning interval index per point
    std::vector<double> segment_bounds;  // interval right endpoints, ending at 1.0
    double bar_eps = 0.0;                // pitch actually used
};

/// Certified approximate equilibrium of the prior-independent game.
struct PiSolution {
    std::vector<InfoSymmetricPolicy> policies;  // distinct support policies
    std::vector<double> policy_weights;
    CoverGrid grid;
    MixedStrategy adversary;  // over grid.points
    double value = 1.0;
    double certified_gap = 0.0;
    int rounds = 0;
    bool converged = true;
    std::vector<double> gap_trace;
};

struct SolveOptions {
    std::optional<double> pitch_override;
    int max_rounds = 200000;
    std::ostream* trace = nullptr;  // per-round CSV lines "round,gap,value"
};

/// Build the grid at pitch eps / (8 (B+1)^2 (T+1)^2 T), or at the override
/// pitch when one is supplied (the theoretical pitch is far finer than
/// needed in practice).
CoverGrid build_cover(const SkiInstance& inst, double eps,
                      std::optional<double> pitch_override = std::nullopt);

/// No-regret loop against the backwards-induction best response over the
/// cover grid, run to duality gap eps/4 (or max_rounds, flagged in the
/// result). The certified gap is recomputed on the realized finite game
/// whose rows are the distinct best responses.
PiSolution solve_pi(const SkiInstance& inst, double eps, const SolveOptions& options = {});

struct WorstPrior {
    double worst_p = 0.0;
    double ratio = 0.0;
};

/// Max over grid points of the mixture's expected cost over the p-known
/// optimal cost. Ties within 1e-12 resolve to the largest prior.
WorstPrior evaluate_against_worst_prior(const std::vector<InfoSymmetricPolicy>& policies,
                                        const std::vector<double>& weights,
                                        const CoverGrid& grid, const SkiInstance& inst);

nlohmann::json pi_solution_to_json(const PiSolution& solution, const SkiInstance& inst,
                                   const std::optional<std::string>& trace_csv_path = std::nullopt);

}  // namespace skirent
