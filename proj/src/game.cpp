#include "skirent/game.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace skirent {

namespace {
constexpr double kNormTol = 1e-12;
}

MixedStrategy MixedStrategy::uniform(std::size_t n) {
    if (n == 0) throw std::invalid_argument("MixedStrategy::uniform: empty action set");
    return MixedStrategy{std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

MixedStrategy MixedStrategy::point_mass(std::size_t n, std::size_t index) {
    if (index >= n) throw std::invalid_argument("MixedStrategy::point_mass: index out of range");
    MixedStrategy s{std::vector<double>(n, 0.0)};
    s.weights[index] = 1.0;
    return s;
}

void MixedStrategy::validate() const {
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("MixedStrategy: negative weight");
        sum += w;
    }
    if (std::fabs(sum - 1.0) > kNormTol)
        throw std::invalid_argument("MixedStrategy: weights sum to " + std::to_string(sum));
}

PayoffTable PayoffTable::from_rows(std::vector<std::vector<double>> rows) {
    PayoffTable t;
    t.u = std::move(rows);
    t.u_max = 0.0;
    for (const auto& row : t.u)
        for (double v : row) t.u_max = std::max(t.u_max, v);
    t.validate();
    return t;
}

void PayoffTable::validate() const {
    if (u.empty() || u.front().empty())
        throw std::invalid_argument("PayoffTable: empty");
    const std::size_t m = u.front().size();
    for (const auto& row : u) {
        if (row.size() != m) throw std::invalid_argument("PayoffTable: ragged rows");
        for (double v : row) {
            if (!std::isfinite(v) || v < 0.0 || v > u_max)
                throw std::invalid_argument("PayoffTable: entry outside [0, u_max]");
        }
    }
}

double expected_payoff(const MixedStrategy& alg, const MixedStrategy& adv,
                       const PayoffTable& table) {
    if (alg.size() != table.rows() || adv.size() != table.cols())
        throw std::invalid_argument("expected_payoff: dimension mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < table.rows(); ++i) {
        if (alg.weights[i] == 0.0) continue;
        double row_val = 0.0;
        for (std::size_t j = 0; j < table.cols(); ++j)
            row_val += adv.weights[j] * table.u[i][j];
        total += alg.weights[i] * row_val;
    }
    return total;
}

NashGaps eps_nash_gap(const MixedStrategy& alg, const MixedStrategy& adv,
                      const PayoffTable& table) {
    if (alg.size() != table.rows() || adv.size() != table.cols())
        throw std::invalid_argument("eps_nash_gap: dimension mismatch");
    const double value = expected_payoff(alg, adv, table);

    double best_col = -1.0;
    for (std::size_t j = 0; j < table.cols(); ++j) {
        double col_val = 0.0;
        for (std::size_t i = 0; i < table.rows(); ++i)
            col_val += alg.weights[i] * table.u[i][j];
        best_col = std::max(best_col, col_val);
    }

    double best_row = table.u_max + 1.0;
    for (std::size_t i = 0; i < table.rows(); ++i) {
        double row_val = 0.0;
        for (std::size_t j = 0; j < table.cols(); ++j)
            row_val += adv.weights[j] * table.u[i][j];
        best_row = std::min(best_row, row_val);
    }

    NashGaps g;
    g.adv_gap = std::max(best_col - value, 0.0);
    g.alg_gap = std::max(value - best_row, 0.0);
    return g;
}

double certify_minmax(double gap) {
    if (gap < 0.0) throw std::invalid_argument("certify_minmax: negative gap");
    return 2.0 * gap;
}

}  // namespace skirent
