#include "skirent/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace skirent {

namespace {

// Last day index at which stopping can be optimal: min(ceil(T-B), T-1).
int stop_window_end(const SkiInstance& inst) {
    const int T = inst.horizon;
    const int w = static_cast<int>(std::ceil(T - inst.stop_cost));
    return std::min(w, T - 1);
}

void check_probability(double p, double lo, const char* where) {
    if (!(p >= lo) || p > 1.0)
        throw std::invalid_argument(std::string(where) + ": p outside range");
}

}  // namespace

InfoSymmetricPolicy::InfoSymmetricPolicy(int horizon) : horizon_(horizon) {
    if (horizon < 1) throw std::invalid_argument("InfoSymmetricPolicy: horizon must be >= 1");
    stop_.assign(static_cast<std::size_t>(horizon) * (horizon + 1) / 2, 0);
}

std::size_t InfoSymmetricPolicy::index(int day, int good_count) const {
    if (day < 1 || day > horizon_ || good_count < 0 || good_count >= day)
        throw std::invalid_argument("InfoSymmetricPolicy: state out of range");
    return static_cast<std::size_t>(day) * (day - 1) / 2 + good_count;
}

Decision InfoSymmetricPolicy::decision(int day, int good_count, bool good_weather) const {
    const std::size_t i = index(day, good_count);
    if (!good_weather) return Decision::Continue;
    return stop_[i] ? Decision::Stop : Decision::Continue;
}

void InfoSymmetricPolicy::set_stop(int day, int good_count, bool stop) {
    const std::size_t i = index(day, good_count);
    if (stop && day == horizon_)
        throw std::invalid_argument("InfoSymmetricPolicy: last day must continue");
    stop_[i] = stop ? 1 : 0;
}

void DiscretePrior::validate(double prior_floor) const {
    if (support.empty()) throw std::invalid_argument("DiscretePrior: empty support");
    if (support.size() != weights.size())
        throw std::invalid_argument("DiscretePrior: support/weight size mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (!(support[i] >= prior_floor) || support[i] > 1.0)
            throw std::invalid_argument("DiscretePrior: support point outside [delta, 1]");
        if (i > 0 && !(support[i] > support[i - 1]))
            throw std::invalid_argument("DiscretePrior: support must be ascending and distinct");
        if (!(weights[i] > 0.0)) throw std::invalid_argument("DiscretePrior: weights must be positive");
        sum += weights[i];
    }
    if (std::fabs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("DiscretePrior: weights do not sum to 1");
}

double CostBreakdown::continuation_cost(int good_count, int day, bool good_weather) const {
    if (day < 1 || day > horizon || good_count < 0 || good_count >= day)
        throw std::invalid_argument("CostBreakdown: state out of range");
    const std::size_t i = static_cast<std::size_t>(day) * (day - 1) / 2 + good_count;
    return good_weather ? cont_good[i] : cont_bad[i];
}

InfoSymmetricPolicy bayes_threshold_policy(const SkiInstance& inst, double p) {
    inst.validate();
    check_probability(p, inst.prior_floor, "bayes_threshold_policy");
    const int T = inst.horizon;
    const double B = inst.stop_cost;
    InfoSymmetricPolicy policy(T);
    const int last = stop_window_end(inst);
    for (int t = 1; t <= last && t < T; ++t) {
        if (p >= (B - 1.0) / (T - t)) {
            for (int k = 0; k < t; ++k) policy.set_stop(t, k, true);
        }
    }
    return policy;
}

double bayes_opt_cost(const SkiInstance& inst, double p) {
    inst.validate();
    check_probability(p, inst.prior_floor, "bayes_opt_cost");
    const int T = inst.horizon;
    const double B = inst.stop_cost;
    int last_stop = 0;
    const int last = stop_window_end(inst);
    for (int t = 1; t <= last && t < T; ++t)
        if (p >= (B - 1.0) / (T - t)) last_stop = t;
    if (last_stop == 0) return T * p;
    const double q = ipow(1.0 - p, last_stop);
    return B * (1.0 - q) + q * p * (T - last_stop);
}

CostBreakdown policy_cost(const InfoSymmetricPolicy& policy, const SkiInstance& inst,
                          double p) {
    inst.validate();
    if (policy.horizon() != inst.horizon)
        throw std::invalid_argument("policy_cost: policy horizon mismatch");
    if (!(p >= 0.0) || p > 1.0) throw std::invalid_argument("policy_cost: p outside [0, 1]");

    const int T = inst.horizon;
    const double B = inst.stop_cost;
    CostBreakdown out;
    out.horizon = T;
    out.cont_good.assign(static_cast<std::size_t>(T) * (T + 1) / 2, 0.0);
    out.cont_bad.assign(out.cont_good.size(), 0.0);

    auto at = [T](int day, int k) {
        return static_cast<std::size_t>(day) * (day - 1) / 2 + k;
    };

    for (int k = 0; k < T; ++k) {
        out.cont_good[at(T, k)] = policy.stops(T, k) ? B : 1.0;
        out.cont_bad[at(T, k)] = 0.0;
    }
    for (int t = T - 1; t >= 1; --t) {
        for (int k = 0; k < t; ++k) {
            if (policy.stops(t, k)) {
                out.cont_good[at(t, k)] = B;
            } else {
                out.cont_good[at(t, k)] = 1.0 + p * out.cont_good[at(t + 1, k + 1)] +
                                          (1.0 - p) * out.cont_bad[at(t + 1, k + 1)];
            }
            out.cont_bad[at(t, k)] =
                p * out.cont_good[at(t + 1, k)] + (1.0 - p) * out.cont_bad[at(t + 1, k)];
        }
    }
    out.total = p * out.cont_good[at(1, 0)] + (1.0 - p) * out.cont_bad[at(1, 0)];
    return out;
}

double pi_utility(const InfoSymmetricPolicy& policy, const SkiInstance& inst, double p) {
    check_probability(p, inst.prior_floor, "pi_utility");
    return policy_cost(policy, inst, p).total / bayes_opt_cost(inst, p);
}

InfoSymmetricPolicy best_response(const DiscretePrior& prior, const SkiInstance& inst) {
    inst.validate();
    prior.validate(inst.prior_floor);

    const int T = inst.horizon;
    const double B = inst.stop_cost;
    const std::size_t n = prior.support.size();

    // Per-atom normalization 1/opt and power tables for on-the-fly state
    // reach probabilities; binomials come from a Pascal triangle.
    std::vector<double> scale(n);
    std::vector<std::vector<double>> pow_p(n), pow_q(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = prior.support[i];
        scale[i] = prior.weights[i] / bayes_opt_cost(inst, p);
        pow_p[i].resize(static_cast<std::size_t>(T) + 1);
        pow_q[i].resize(static_cast<std::size_t>(T) + 1);
        pow_p[i][0] = pow_q[i][0] = 1.0;
        for (int e = 1; e <= T; ++e) {
            pow_p[i][e] = pow_p[i][e - 1] * p;
            pow_q[i][e] = pow_q[i][e - 1] * (1.0 - p);
        }
    }
    std::vector<std::vector<double>> comb(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
        comb[t].assign(static_cast<std::size_t>(t) + 1, 1.0);
        for (int k = 1; k < t; ++k) comb[t][k] = comb[t - 1][k - 1] + comb[t - 1][k];
    }
    // Weight of reaching (k goods among first t-1 days, weather w today),
    // already scaled by the prior atom and its optimal cost.
    auto state_weight = [&](std::size_t i, int t, int k, bool good) {
        const double reach = comb[t - 1][k] * pow_p[i][k] * pow_q[i][t - 1 - k];
        return reach * (good ? prior.support[i] : 1.0 - prior.support[i]) * scale[i];
    };

    auto at = [](int day, int k) {
        return static_cast<std::size_t>(day) * (day - 1) / 2 + k;
    };
    std::vector<std::vector<double>> cg(n), cb(n);
    for (std::size_t i = 0; i < n; ++i) {
        cg[i].assign(static_cast<std::size_t>(T) * (T + 1) / 2, 0.0);
        cb[i].assign(cg[i].size(), 0.0);
        for (int k = 0; k < T; ++k) cg[i][at(T, k)] = 1.0;
    }

    InfoSymmetricPolicy policy(T);
    for (int t = T - 1; t >= 1; --t) {
        for (int k = 0; k < t; ++k) {
            double stop_cost = 0.0, cont_cost = 0.0;
            std::vector<double> cont(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double w = state_weight(i, t, k, true);
                const double p = prior.support[i];
                cont[i] = 1.0 + p * cg[i][at(t + 1, k + 1)] +
                          (1.0 - p) * cb[i][at(t + 1, k + 1)];
                stop_cost += w * B;
                cont_cost += w * cont[i];
            }
            const bool stop = stop_cost < cont_cost;  // tie -> continue
            policy.set_stop(t, k, stop);
            for (std::size_t i = 0; i < n; ++i) {
                const double p = prior.support[i];
                cg[i][at(t, k)] = stop ? B : cont[i];
                cb[i][at(t, k)] = p * cg[i][at(t + 1, k)] + (1.0 - p) * cb[i][at(t + 1, k)];
            }
        }
    }
    return policy;
}

bool is_thresholding(const InfoSymmetricPolicy& policy) {
    for (int t = 1; t <= policy.horizon(); ++t)
        for (int k = 0; k + 1 < t; ++k)
            if (policy.stops(t, k) && !policy.stops(t, k + 1)) return false;
    return true;
}

InfoSymmetricPolicy threshold_as_policy(const SkiInstance& inst, int l) {
    inst.validate();
    if (l < 0 || l > inst.horizon)
        throw std::invalid_argument("threshold_as_policy: threshold out of range");
    InfoSymmetricPolicy policy(inst.horizon);
    for (int t = 1; t < inst.horizon; ++t)
        for (int k = 0; k < t; ++k)
            if (k >= l) policy.set_stop(t, k, true);
    return policy;
}

nlohmann::json policy_to_json(const InfoSymmetricPolicy& policy) {
    nlohmann::json rows = nlohmann::json::array();
    for (int t = 1; t <= policy.horizon(); ++t)
        for (int k = 0; k < t; ++k)
            rows.push_back({t, k, policy.stops(t, k) ? "stop" : "continue"});
    return {{"T", policy.horizon()}, {"rows", rows}};
}

InfoSymmetricPolicy policy_from_json(const nlohmann::json& j) {
    InfoSymmetricPolicy policy(j.at("T").get<int>());
    for (const auto& row : j.at("rows")) {
        const int t = row.at(0).get<int>();
        const int k = row.at(1).get<int>();
        const bool stop = row.at(2).get<std::string>() == "stop";
        if (stop) policy.set_stop(t, k, true);
    }
    return policy;
}

}  // namespace skirent
