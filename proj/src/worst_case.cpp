#include "skirent/worst_case.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace skirent {

void SkiInstance::validate() const {
    if (horizon < 1) throw std::invalid_argument("SkiInstance: horizon must be >= 1");
    if (!(stop_cost > 1.0)) throw std::invalid_argument("SkiInstance: stop cost must exceed 1");
    if (!(prior_floor > 0.0) || prior_floor > 1.0)
        throw std::invalid_argument("SkiInstance: prior floor must lie in (0, 1]");
}

double ipow(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

namespace {

// The closed forms split on ceil(B) + floor(B) vs T + 1; the comparison is
// exact in integer arithmetic.
bool long_horizon_case(int T, double B) {
    const long long cb = static_cast<long long>(std::ceil(B));
    const long long fb = static_cast<long long>(std::floor(B));
    return cb + fb < static_cast<long long>(T) + 1;
}

}  // namespace

double reduced_payoff(int l, int k, const SkiInstance& inst) {
    inst.validate();
    if (l < 0 || l > inst.horizon) throw std::invalid_argument("reduced_payoff: threshold out of range");
    if (k < 1 || k > inst.horizon) throw std::invalid_argument("reduced_payoff: good-day count out of range");
    const double B = inst.stop_cost;
    const double opt = std::min(static_cast<double>(k), B);
    if (k > l) return (static_cast<double>(l) + B) / opt;
    return static_cast<double>(k) / opt;
}

ThresholdMixture worst_case_mixture(const SkiInstance& inst) {
    inst.validate();
    const int T = inst.horizon;
    const double B = inst.stop_cost;

    ThresholdMixture mix;
    if (inst.trivial()) {
        // Always continue: every input costs at most its hindsight optimum.
        mix.support = {T};
        mix.probs = {1.0};
        mix.value = 1.0;
        return mix;
    }

    const int fb = static_cast<int>(std::floor(B));
    const int cb = static_cast<int>(std::ceil(B));
    const double r = B / (B - 1.0);

    if (!long_horizon_case(T, B)) {
        // Support {0, ..., T - floor(B) - 1} plus the never-stop threshold.
        const double beta0 =
            1.0 / (B * fb / (T - B) * ipow(r, T - fb - 1) - (B - 1.0));
        for (int l = 0; l <= T - fb - 1; ++l) {
            mix.support.push_back(l);
            mix.probs.push_back(ipow(r, l) * beta0);
        }
        mix.support.push_back(T);
        mix.probs.push_back((B / (T - B)) * ipow(r, T - fb - 1) * (B + fb - T) * beta0);
        mix.value = 1.0 / (1.0 - (T - B) * (B - 1.0) / (B * fb * ipow(r, T - fb - 1)));
    } else {
        // Support {0, ..., ceil(B) - 1}; the top threshold gets the residual
        // weight from the simultaneous equations.
        const double beta0 =
            1.0 / ((B - 1.0) * (ipow(r, cb - 1) * B / (cb - 1) - 1.0));
        for (int l = 0; l <= cb - 2; ++l) {
            mix.support.push_back(l);
            mix.probs.push_back(ipow(r, l) * beta0);
        }
        mix.support.push_back(cb - 1);
        mix.probs.push_back(ipow(r, cb - 2) * (B + 1.0 - cb) * (B / (cb - 1)) * beta0);
        mix.value = 1.0 / (1.0 - ((cb - 1) / B) * ipow((B - 1.0) / B, cb - 1));
    }
    return mix;
}

double competitive_ratio(const SkiInstance& inst) {
    inst.validate();
    const int T = inst.horizon;
    const double B = inst.stop_cost;
    if (inst.trivial()) return 1.0;
    const int fb = static_cast<int>(std::floor(B));
    const int cb = static_cast<int>(std::ceil(B));
    if (!long_horizon_case(T, B)) {
        const double r = B / (B - 1.0);
        return 1.0 / (1.0 - (T - B) * (B - 1.0) / (B * fb * ipow(r, T - fb - 1)));
    }
    return 1.0 / (1.0 - ((cb - 1) / B) * ipow((B - 1.0) / B, cb - 1));
}

StopSchedule conditional_stop_probs(const SkiInstance& inst) {
    inst.validate();
    const int T = inst.horizon;
    const double B = inst.stop_cost;

    StopSchedule sched;
    sched.effective_horizon = T;
    sched.eta.assign(static_cast<std::size_t>(T) + 1, 0.0);
    if (inst.trivial()) return sched;

    const int fb = static_cast<int>(std::floor(B));
    const int cb = static_cast<int>(std::ceil(B));
    const double r = B / (B - 1.0);

    if (!long_horizon_case(T, B)) {
        for (int k = 1; k <= T - fb; ++k)
            sched.eta[k] = 1.0 / (B * fb / (T - B) * ipow(r, T - fb - k) - (B - 1.0));
    } else {
        for (int k = 1; k <= cb - 1; ++k)
            sched.eta[k] = 1.0 / ((B - 1.0) * ipow(r, cb - k) * (B / (cb - 1)) - (B - 1.0));
        sched.eta[cb] = 1.0;
    }
    return sched;
}

double threshold_cost_on_sequence(int l, const std::vector<int>& sequence,
                                  const SkiInstance& inst) {
    const int T = inst.horizon;
    int good_seen = 0;
    double cost = 0.0;
    for (int t = 0; t < T; ++t) {
        if (sequence[t] == 0) continue;
        if (good_seen == l && l < T) return cost + inst.stop_cost;
        cost += 1.0;
        ++good_seen;
    }
    return cost;
}

double wc_cost_on_sequence(const ThresholdMixture& mix,
                           const std::vector<int>& sequence,
                           const SkiInstance& inst) {
    inst.validate();
    if (static_cast<int>(sequence.size()) != inst.horizon)
        throw std::invalid_argument("wc_cost_on_sequence: sequence length mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < mix.support.size(); ++i)
        total += mix.probs[i] * threshold_cost_on_sequence(mix.support[i], sequence, inst);
    return total;
}

double hindsight_opt_cost(const std::vector<int>& sequence, const SkiInstance& inst) {
    int good = 0;
    for (int w : sequence) good += (w != 0);
    return std::min(static_cast<double>(good), inst.stop_cost);
}

}  // namespace skirent
