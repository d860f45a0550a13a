#pragma once

#include <cstddef>
#include <vector>

namespace skirent {

/// Probability vector over a finite pure-strategy set.
struct MixedStrategy {
    std::vector<double> weights;

    static MixedStrategy uniform(std::size_t n);
    static MixedStrategy point_mass(std::size_t n, std::size_t index);

    std::size_t size() const { return weights.size(); }

    // Throws std::invalid_argument unless weights are nonnegative and
    // sum to 1 within 1e-12.
    void validate() const;
};

/// Payoff matrix of a two-player zero-sum game, from the adversary's side.
/// Rows index algorithm pure strategies, columns adversary pure strategies.
struct PayoffTable {
    std::vector<std::vector<double>> u;
    double u_max = 0.0;

    static PayoffTable from_rows(std::vector<std::vector<double>> rows);

    std::size_t rows() const { return u.size(); }
    std::size_t cols() const { return u.empty() ? 0 : u.front().size(); }

    // Throws unless rectangular with finite entries in [0, u_max].
    void validate() const;
};

/// Bilinear payoff sum_i sum_j alg_i * adv_j * u_ij.
double expected_payoff(const MixedStrategy& alg, const MixedStrategy& adv,
                       const PayoffTable& table);

struct NashGaps {
    double alg_gap = 0.0;
    double adv_gap = 0.0;

    double max_gap() const { return alg_gap > adv_gap ? alg_gap : adv_gap; }
};

/// Deviation gains for each player at the profile (alg, adv):
///   adv_gap = max over columns of payoff against alg, minus expected payoff;
///   alg_gap = expected payoff minus min over rows of payoff against adv.
/// The profile is an eps-Nash equilibrium iff max(alg_gap, adv_gap) <= eps.
/// Tiny negative values from rounding are clamped to zero.
NashGaps eps_nash_gap(const MixedStrategy& alg, const MixedStrategy& adv,
                      const PayoffTable& table);

/// Minmax suboptimality guaranteed by an eps-Nash profile: 2 * gap.
double certify_minmax(double gap);

}  // namespace skirent
