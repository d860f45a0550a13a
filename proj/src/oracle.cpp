#include "skirent/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>

namespace skirent::oracle {

namespace {

constexpr double kGapTarget = 1e-8;
constexpr double kCertBound = 1e-7;
constexpr int kHardIterationCap = 400000;
constexpr int kCheckEvery = 200;

double sequence_probability(unsigned bits, int T, double p) {
    double pr = 1.0;
    for (int t = 0; t < T; ++t) pr *= (bits >> t & 1u) ? p : (1.0 - p);
    return pr;
}

double table_cost_on_sequence(const InfoSymmetricPolicy& policy, unsigned bits, int T,
                              double B) {
    int goods = 0;
    double cost = 0.0;
    for (int t = 1; t <= T; ++t) {
        if (!(bits >> (t - 1) & 1u)) continue;
        if (policy.stops(t, goods)) return cost + B;
        cost += 1.0;
        ++goods;
    }
    return cost;
}

double behavioral_cost_on_sequence(const BehavioralPolicy& policy, unsigned bits, int T,
                                   double B) {
    int goods = 0;
    double survival = 1.0;
    double cost = 0.0;
    for (int t = 1; t <= T; ++t) {
        if (!(bits >> (t - 1) & 1u)) continue;
        ++goods;
        const double q = policy.stop_prob(t, goods, true);
        cost += survival * (q * B + (1.0 - q));
        survival *= 1.0 - q;
    }
    return cost;
}

// Weights on a candidate support that equalize the opposing supported
// payoffs: least squares over (weights, game value), negatives clipped.
// Members whose weight collapses are pruned from the support in place.
bool solve_support_weights(const PayoffTable& table, std::vector<int>& own,
                           const std::vector<int>& other, bool own_is_rows,
                           std::vector<double>* out_weights) {
    const int no = static_cast<int>(own.size());
    const int nc = static_cast<int>(other.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nc + 1, no + 1);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(nc + 1);
    for (int a = 0; a < nc; ++a) {
        for (int i = 0; i < no; ++i)
            A(a, i) = own_is_rows ? table.u[own[i]][other[a]] : table.u[other[a]][own[i]];
        A(a, no) = -1.0;
    }
    for (int i = 0; i < no; ++i) A(nc, i) = 1.0;
    b(nc) = 1.0;
    const Eigen::VectorXd sol = A.colPivHouseholderQr().solve(b);

    std::vector<int> kept;
    std::vector<double> weights;
    double sum = 0.0;
    for (int i = 0; i < no; ++i) {
        const double w = sol(i);
        if (w > 1e-12) {
            kept.push_back(own[i]);
            weights.push_back(w);
            sum += w;
        }
    }
    if (kept.empty() || !(sum > 0.0)) return false;
    for (double& w : weights) w /= sum;
    own = std::move(kept);
    *out_weights = std::move(weights);
    return true;
}

// Try the exact solve on one support pair; certifies against the full table.
bool try_support_pair(const PayoffTable& table, std::vector<int> rows, std::vector<int> cols,
                      double target, MixedStrategy* out_x, MixedStrategy* out_y,
                      NashGaps* out_gaps) {
    std::vector<double> xw, yw;
    if (!solve_support_weights(table, rows, cols, true, &xw)) return false;
    if (!solve_support_weights(table, cols, rows, false, &yw)) return false;
    MixedStrategy x{std::vector<double>(table.rows(), 0.0)};
    for (std::size_t i = 0; i < rows.size(); ++i) x.weights[rows[i]] = xw[i];
    MixedStrategy y{std::vector<double>(table.cols(), 0.0)};
    for (std::size_t j = 0; j < cols.size(); ++j) y.weights[cols[j]] = yw[j];
    const NashGaps gaps = eps_nash_gap(x, y, table);
    if (gaps.max_gap() > target) return false;
    *out_x = std::move(x);
    *out_y = std::move(y);
    *out_gaps = gaps;
    return true;
}

// Exact equilibria live on square support pairs whose payoff submatrix
// equalizes both sides; enumerate small square subsets of the candidate
// pools. This covers degenerate games where tied columns hide the support
// from greedy refinement.
bool enumerate_kernels(const PayoffTable& table, const std::vector<int>& pool_rows,
                       const std::vector<int>& pool_cols, double target,
                       MixedStrategy* out_x, MixedStrategy* out_y, NashGaps* out_gaps) {
    const int max_size = 6;
    const long attempt_cap = 100000;
    long attempts = 0;
    const int nr = static_cast<int>(pool_rows.size());
    const int nc = static_cast<int>(pool_cols.size());
    for (int k = 1; k <= std::min({max_size, nr, nc}); ++k) {
        std::vector<int> ri(k), ci(k);
        for (int i = 0; i < k; ++i) ri[i] = i;
        while (true) {
            for (int j = 0; j < k; ++j) ci[j] = j;
            while (true) {
                if (++attempts > attempt_cap) return false;
                std::vector<int> rows(k), cols(k);
                for (int i = 0; i < k; ++i) rows[i] = pool_rows[ri[i]];
                for (int j = 0; j < k; ++j) cols[j] = pool_cols[ci[j]];
                if (try_support_pair(table, rows, cols, target, out_x, out_y, out_gaps))
                    return true;
                int pos = k - 1;
                while (pos >= 0 && ci[pos] == nc - k + pos) --pos;
                if (pos < 0) break;
                ++ci[pos];
                for (int j = pos + 1; j < k; ++j) ci[j] = ci[j - 1] + 1;
            }
            int pos = k - 1;
            while (pos >= 0 && ri[pos] == nr - k + pos) --pos;
            if (pos < 0) break;
            ++ri[pos];
            for (int i = pos + 1; i < k; ++i) ri[i] = ri[i - 1] + 1;
        }
    }
    return false;
}

// Equalize payoffs over candidate supports, pruning collapsed members and
// admitting violated strategies until the profile certifies.
bool polish_supports(const PayoffTable& table, std::vector<int> rows, std::vector<int> cols,
                     double target, MixedStrategy* out_x, MixedStrategy* out_y,
                     NashGaps* out_gaps) {
    const int n = static_cast<int>(table.rows());
    const int m = static_cast<int>(table.cols());
    for (int pass = 0; pass < 40; ++pass) {
        std::vector<double> xw, yw;
        if (!solve_support_weights(table, rows, cols, true, &xw)) return false;
        if (!solve_support_weights(table, cols, rows, false, &yw)) return false;

        MixedStrategy x{std::vector<double>(n, 0.0)};
        for (std::size_t i = 0; i < rows.size(); ++i) x.weights[rows[i]] = xw[i];
        MixedStrategy y{std::vector<double>(m, 0.0)};
        for (std::size_t j = 0; j < cols.size(); ++j) y.weights[cols[j]] = yw[j];

        const NashGaps gaps = eps_nash_gap(x, y, table);
        if (gaps.max_gap() <= target) {
            *out_x = std::move(x);
            *out_y = std::move(y);
            *out_gaps = gaps;
            return true;
        }

        // Admit the strategies the current profile fails against.
        int best_row = 0;
        double best_row_val = table.u_max + 1.0;
        for (int i = 0; i < n; ++i) {
            double v = 0.0;
            for (int j = 0; j < m; ++j) v += y.weights[j] * table.u[i][j];
            if (v < best_row_val) {
                best_row_val = v;
                best_row = i;
            }
        }
        int best_col = 0;
        double best_col_val = -1.0;
        for (int j = 0; j < m; ++j) {
            double v = 0.0;
            for (int i = 0; i < n; ++i) v += x.weights[i] * table.u[i][j];
            if (v > best_col_val) {
                best_col_val = v;
                best_col = j;
            }
        }
        bool grew = false;
        if (std::find(rows.begin(), rows.end(), best_row) == rows.end()) {
            rows.push_back(best_row);
            std::sort(rows.begin(), rows.end());
            grew = true;
        }
        if (std::find(cols.begin(), cols.end(), best_col) == cols.end()) {
            cols.push_back(best_col);
            std::sort(cols.begin(), cols.end());
            grew = true;
        }
        if (!grew) return false;
    }
    return false;
}

MinimaxResult certified_minimax(const PayoffTable& table) {
    table.validate();
    const int n = static_cast<int>(table.rows());
    const int m = static_cast<int>(table.cols());

    double lo = table.u[0][0], hi = table.u[0][0];
    for (const auto& row : table.u)
        for (double v : row) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    const double range = hi > lo ? hi - lo : 1.0;

    std::vector<double> lw_row(n, 0.0), lw_col(m, 0.0);
    std::vector<double> sum_x(n, 0.0), sum_y(m, 0.0);
    std::vector<double> x(n), y(m);

    auto softmax = [](const std::vector<double>& lw, std::vector<double>& out) {
        double shift = lw[0];
        for (double w : lw) shift = std::max(shift, w);
        double sum = 0.0;
        for (std::size_t i = 0; i < lw.size(); ++i) {
            out[i] = std::exp(lw[i] - shift);
            sum += out[i];
        }
        for (double& v : out) v /= sum;
    };

    for (int t = 1; t <= kHardIterationCap; ++t) {
        softmax(lw_row, x);
        softmax(lw_col, y);
        for (int i = 0; i < n; ++i) sum_x[i] += x[i];
        for (int j = 0; j < m; ++j) sum_y[j] += y[j];

        const double er = std::sqrt(8.0 * std::log(std::max(n, 2)) / t);
        const double ec = std::sqrt(8.0 * std::log(std::max(m, 2)) / t);
        for (int i = 0; i < n; ++i) {
            double v = 0.0;
            for (int j = 0; j < m; ++j) v += y[j] * table.u[i][j];
            lw_row[i] += er * (1.0 - (v - lo) / range);  // row player minimizes
        }
        for (int j = 0; j < m; ++j) {
            double v = 0.0;
            for (int i = 0; i < n; ++i) v += x[i] * table.u[i][j];
            lw_col[j] += ec * (v - lo) / range;
        }

        if (t % kCheckEvery != 0 && t != kHardIterationCap) continue;

        MixedStrategy ax{sum_x}, ay{sum_y};
        for (double& w : ax.weights) w /= t;
        for (double& w : ay.weights) w /= t;
        NashGaps gaps = eps_nash_gap(ax, ay, table);
        if (gaps.max_gap() <= kGapTarget) {
            return {expected_payoff(ax, ay, table), ax, ay, gaps.max_gap(), t};
        }

        // Candidate supports, two ways: strategies the averaged mixtures put
        // visible weight on, and near-best responses against the averaged
        // profile (these localize crisp supports long before the averaged
        // weights concentrate). The polish prunes and grows from there.
        std::vector<double> row_payoff(n), col_payoff(m);
        double row_min = table.u_max + 1.0, col_max = -1.0;
        for (int i = 0; i < n; ++i) {
            double v = 0.0;
            for (int j = 0; j < m; ++j) v += ay.weights[j] * table.u[i][j];
            row_payoff[i] = v;
            row_min = std::min(row_min, v);
        }
        for (int j = 0; j < m; ++j) {
            double v = 0.0;
            for (int i = 0; i < n; ++i) v += ax.weights[i] * table.u[i][j];
            col_payoff[j] = v;
            col_max = std::max(col_max, v);
        }
        const double g = std::max(gaps.max_gap(), 1e-9);
        std::vector<std::pair<std::vector<int>, std::vector<int>>> candidates;
        for (double tau : {1e-2, 1e-4}) {
            std::vector<int> rows, cols;
            for (int i = 0; i < n; ++i)
                if (ax.weights[i] > tau) rows.push_back(i);
            for (int j = 0; j < m; ++j)
                if (ay.weights[j] > tau) cols.push_back(j);
            candidates.emplace_back(std::move(rows), std::move(cols));
        }
        for (double tol : {2.0 * g, g / 4.0}) {
            std::vector<int> rows, cols;
            for (int i = 0; i < n; ++i)
                if (row_payoff[i] <= row_min + tol) rows.push_back(i);
            for (int j = 0; j < m; ++j)
                if (col_payoff[j] >= col_max - tol) cols.push_back(j);
            candidates.emplace_back(std::move(rows), std::move(cols));
        }
        {
            // Mixed pairing: weight-supported rows against near-best columns.
            std::vector<int> rows, cols;
            for (int i = 0; i < n; ++i)
                if (ax.weights[i] > 1e-3) rows.push_back(i);
            for (int j = 0; j < m; ++j)
                if (col_payoff[j] >= col_max - 2.0 * g) cols.push_back(j);
            candidates.emplace_back(std::move(rows), std::move(cols));
        }
        for (auto& [rows, cols] : candidates) {
            if (rows.empty() || cols.empty()) continue;
            MixedStrategy px, py;
            NashGaps pgaps;
            if (polish_supports(table, rows, cols, kGapTarget, &px, &py, &pgaps)) {
                if (pgaps.max_gap() > kCertBound)
                    throw std::runtime_error("certified_minimax: certification failed");
                return {expected_payoff(px, py, table), px, py, pgaps.max_gap(), t};
            }
        }

        // Fallback for degenerate supports: square-kernel enumeration over
        // pools ranked by averaged weight, including near-best responses.
        {
            std::vector<int> pool_rows, pool_cols;
            std::vector<std::pair<double, int>> ranked_rows, ranked_cols;
            for (int i = 0; i < n; ++i) {
                const bool near = row_payoff[i] <= row_min + 2.0 * g;
                if (ax.weights[i] > 1e-6 || near)
                    ranked_rows.emplace_back(-(ax.weights[i] + (near ? 1e-6 : 0.0)), i);
            }
            for (int j = 0; j < m; ++j) {
                const bool near = col_payoff[j] >= col_max - 2.0 * g;
                if (ay.weights[j] > 1e-6 || near)
                    ranked_cols.emplace_back(-(ay.weights[j] + (near ? 1e-6 : 0.0)), j);
            }
            std::sort(ranked_rows.begin(), ranked_rows.end());
            std::sort(ranked_cols.begin(), ranked_cols.end());
            for (std::size_t i = 0; i < ranked_rows.size() && i < 12; ++i)
                pool_rows.push_back(ranked_rows[i].second);
            for (std::size_t j = 0; j < ranked_cols.size() && j < 12; ++j)
                pool_cols.push_back(ranked_cols[j].second);
            MixedStrategy px, py;
            NashGaps pgaps;
            if (enumerate_kernels(table, pool_rows, pool_cols, kGapTarget, &px, &py, &pgaps)) {
                if (pgaps.max_gap() > kCertBound)
                    throw std::runtime_error("certified_minimax: certification failed");
                return {expected_payoff(px, py, table), px, py, pgaps.max_gap(), t};
            }
        }
    }
    throw std::runtime_error("certified_minimax: gap target unreachable within iteration cap");
}

}  // namespace

double enumerate_policy_cost(const InfoSymmetricPolicy& policy, const SkiInstance& inst,
                             double p) {
    inst.validate();
    if (inst.horizon > 20) throw std::invalid_argument("enumerate_policy_cost: T too large");
    if (policy.horizon() != inst.horizon)
        throw std::invalid_argument("enumerate_policy_cost: horizon mismatch");
    const int T = inst.horizon;
    double total = 0.0;
    for (unsigned bits = 0; bits < (1u << T); ++bits)
        total += table_cost_on_sequence(policy, bits, T, inst.stop_cost) *
                 sequence_probability(bits, T, p);
    return total;
}

double enumerate_behavioral_cost(const BehavioralPolicy& policy, const SkiInstance& inst,
                                 double p) {
    inst.validate();
    if (inst.horizon > 20) throw std::invalid_argument("enumerate_behavioral_cost: T too large");
    if (policy.horizon() != inst.horizon)
        throw std::invalid_argument("enumerate_behavioral_cost: horizon mismatch");
    const int T = inst.horizon;
    double total = 0.0;
    for (unsigned bits = 0; bits < (1u << T); ++bits)
        total += behavioral_cost_on_sequence(policy, bits, T, inst.stop_cost) *
                 sequence_probability(bits, T, p);
    return total;
}

BestResponseSearch enumerate_best_response(const DiscretePrior& prior,
                                           const SkiInstance& inst) {
    inst.validate();
    prior.validate(inst.prior_floor);
    const int T = inst.horizon;
    if (T > 6) throw std::invalid_argument("enumerate_best_response: T too large");

    std::vector<std::pair<int, int>> free_states;  // (day, good count), day < T
    for (int t = 1; t < T; ++t)
        for (int k = 0; k < t; ++k) free_states.emplace_back(t, k);

    const std::size_t n = prior.support.size();
    const unsigned long num_tables = 1ul << free_states.size();

    // Costs of every table at every support point, then the exhaustively
    // optimal cost per point as the denominator.
    std::vector<std::vector<double>> costs(num_tables, std::vector<double>(n));
    for (unsigned long mask = 0; mask < num_tables; ++mask) {
        InfoSymmetricPolicy policy(T);
        for (std::size_t b = 0; b < free_states.size(); ++b)
            if (mask >> b & 1ul) policy.set_stop(free_states[b].first, free_states[b].second, true);
        for (std::size_t i = 0; i < n; ++i)
            costs[mask][i] = enumerate_policy_cost(policy, inst, prior.support[i]);
    }
    std::vector<double> opt(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double best = costs[0][i];
        for (unsigned long mask = 1; mask < num_tables; ++mask)
            best = std::min(best, costs[mask][i]);
        opt[i] = best;
    }

    unsigned long best_mask = 0;
    double best_obj = 0.0;
    for (unsigned long mask = 0; mask < num_tables; ++mask) {
        double obj = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            obj += prior.weights[i] * costs[mask][i] / opt[i];
        if (mask == 0 || obj < best_obj) {
            best_obj = obj;
            best_mask = mask;
        }
    }
    InfoSymmetricPolicy best(T);
    for (std::size_t b = 0; b < free_states.size(); ++b)
        if (best_mask >> b & 1ul) best.set_stop(free_states[b].first, free_states[b].second, true);
    return {best, best_obj};
}

MinimaxResult brute_minimax_reduced(const SkiInstance& inst) {
    inst.validate();
    const int T = inst.horizon;
    if (T > 12) throw std::invalid_argument("brute_minimax_reduced: T too large");
    const double B = inst.stop_cost;

    std::vector<std::vector<double>> rows;
    for (int l = 0; l <= T; ++l) {
        std::vector<double> row(T);
        for (int k = 1; k <= T; ++k) {
            const double opt = std::min(static_cast<double>(k), B);
            row[k - 1] = (k > l) ? (l + B) / opt : k / opt;
        }
        rows.push_back(std::move(row));
    }
    return certified_minimax(PayoffTable::from_rows(std::move(rows)));
}

MinimaxResult brute_minimax_dense(const DenseGame& game) {
    game.payoff.validate();
    if (game.payoff.rows() > 200 || game.payoff.cols() > 200)
        throw std::invalid_argument("brute_minimax_dense: table too large");
    if (!game.row_labels.empty()) {
        if (game.row_labels.size() != game.payoff.rows() ||
            game.col_labels.size() != game.payoff.cols())
            throw std::invalid_argument("brute_minimax_dense: label count mismatch");
        const std::set<std::string> r(game.row_labels.begin(), game.row_labels.end());
        const std::set<std::string> c(game.col_labels.begin(), game.col_labels.end());
        if (r.size() != game.row_labels.size() || c.size() != game.col_labels.size())
            throw std::invalid_argument("brute_minimax_dense: duplicate labels");
    }
    return certified_minimax(game.payoff);
}

}  // namespace skirent::oracle
