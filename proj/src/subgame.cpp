#include "skirent/subgame.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace skirent {

std::size_t BehavioralPolicy::state_index(int day, int good_count) {
    // Row t holds counts 1..t; rows 1..t-1 hold t(t-1)/2 entries.
    return static_cast<std::size_t>(day) * (day - 1) / 2 + (good_count - 1);
}

std::size_t BehavioralPolicy::table_size(int horizon) {
    return static_cast<std::size_t>(horizon) * (horizon + 1) / 2;
}

BehavioralPolicy::BehavioralPolicy(SkiInstance inst, std::vector<double> good_stop_prob)
    : inst_(inst), good_stop_prob_(std::move(good_stop_prob)) {
    inst_.validate();
    if (good_stop_prob_.size() != table_size(inst_.horizon))
        throw std::invalid_argument("BehavioralPolicy: stop table size mismatch");
    for (double q : good_stop_prob_)
        if (!(q >= 0.0) || q > 1.0)
            throw std::invalid_argument("BehavioralPolicy: stop probability outside [0, 1]");
}

double BehavioralPolicy::stop_prob(int day, int good_count, bool good_weather) const {
    const int T = inst_.horizon;
    if (day < 1 || day > T || good_count < 0 || good_count > day)
        throw std::invalid_argument("BehavioralPolicy::stop_prob: impossible state");
    if (!good_weather) return 0.0;
    if (good_count < 1)
        throw std::invalid_argument("BehavioralPolicy::stop_prob: good day with zero good count");
    return good_stop_prob_[state_index(day, good_count)];
}

BehavioralPolicy subgame_policy(const SkiInstance& inst) {
    inst.validate();
    const int T = inst.horizon;
    // One schedule per effective horizon; a state with b bad days so far
    // plays the horizon-(T-b) schedule.
    std::vector<StopSchedule> schedules(static_cast<std::size_t>(T) + 1);
    for (int h = 1; h <= T; ++h) {
        SkiInstance sub = inst;
        sub.horizon = h;
        schedules[h] = conditional_stop_probs(sub);
    }
    std::vector<double> table(BehavioralPolicy::table_size(T), 0.0);
    for (int t = 1; t <= T; ++t) {
        for (int k = 1; k <= t; ++k) {
            const int effective = T - (t - k);
            const StopSchedule& sched = schedules[effective];
            if (k < static_cast<int>(sched.eta.size()))
                table[BehavioralPolicy::state_index(t, k)] = sched.eta[k];
        }
    }
    return BehavioralPolicy(inst, std::move(table));
}

double policy_cost_on_sequence(const BehavioralPolicy& policy,
                               const std::vector<int>& sequence) {
    const int T = policy.horizon();
    if (static_cast<int>(sequence.size()) != T)
        throw std::invalid_argument("policy_cost_on_sequence: sequence length mismatch");
    double survival = 1.0;
    double cost = 0.0;
    int good = 0;
    for (int t = 1; t <= T; ++t) {
        if (sequence[t - 1] == 0) continue;
        ++good;
        const double q = policy.stop_prob(t, good, true);
        cost += survival * (q * policy.stop_cost() + (1.0 - q));
        survival *= (1.0 - q);
    }
    return cost;
}

double policy_expected_cost(const BehavioralPolicy& policy, double p) {
    if (!(p >= 0.0) || p > 1.0)
        throw std::invalid_argument("policy_expected_cost: p outside [0, 1]");
    const int T = policy.horizon();
    const double B = policy.stop_cost();
    // alive[k]: probability of reaching the current day unstopped with k good
    // days seen so far.
    std::vector<double> alive(static_cast<std::size_t>(T) + 1, 0.0);
    alive[0] = 1.0;
    double cost = 0.0;
    for (int t = 1; t <= T; ++t) {
        std::vector<double> next(static_cast<std::size_t>(T) + 1, 0.0);
        for (int k = 0; k < t; ++k) {
            const double mass = alive[k];
            if (mass == 0.0) continue;
            next[k] += mass * (1.0 - p);
            const double q = policy.stop_prob(t, k + 1, true);
            cost += mass * p * (q * B + (1.0 - q));
            next[k + 1] += mass * p * (1.0 - q);
        }
        alive.swap(next);
    }
    return cost;
}

double sg_benchmark_ratio(const SkiInstance& inst) {
    inst.validate();
    if (inst.trivial()) return 1.0;
    const int T = inst.horizon;
    const double B = inst.stop_cost;
    const int fb = static_cast<int>(std::floor(B));
    const int cb = static_cast<int>(std::ceil(B));
    if (static_cast<long long>(cb) + fb >= static_cast<long long>(T) + 1)
        return 1.0 / (1.0 - ((T - B) / fb) * ipow((B - 1.0) / B, T - fb));
    return 1.0 / (1.0 - ((cb - 1) / B) * ipow((B - 1.0) / B, cb - 1));
}

std::string policy_dump_json(const BehavioralPolicy& policy) {
    std::ostringstream os;
    os.precision(17);
    os << "{";
    bool first = true;
    for (int t = 1; t <= policy.horizon(); ++t) {
        for (int k = 1; k <= t; ++k) {
            if (!first) os << ",";
            first = false;
            os << "\"" << t << "," << k << "\":" << policy.stop_prob(t, k, true);
        }
    }
    os << "}";
    return os.str();
}

}  // namespace skirent
