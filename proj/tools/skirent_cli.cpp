// Command-line front end: closed-form worst-case solutions, the subgame
// policy, the prior-independent solver, comparison sweeps, and fixed-sequence
// evaluation. Exit codes: 0 success, 2 argument error, 3 non-convergence.

#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "skirent/bayes.hpp"
#include "skirent/oracle.hpp"
#include "skirent/pi_solver.hpp"
#include "skirent/subgame.hpp"
#include "skirent/worst_case.hpp"

namespace {

using skirent::SkiInstance;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9f", v);
    return buf;
}

int cmd_worst_case(const SkiInstance& inst) {
    const skirent::ThresholdMixture mix = skirent::worst_case_mixture(inst);
    const skirent::StopSchedule sched = skirent::conditional_stop_probs(inst);
    std::cout << "instance: T=" << inst.horizon << " B=" << inst.stop_cost << "\n";
    if (inst.trivial()) std::cout << "note: trivial instance (B >= T, always continue)\n";
    std::cout << "value: " << fmt(mix.value) << "\n";
    std::cout << "mixture:";
    for (std::size_t i = 0; i < mix.support.size(); ++i)
        std::cout << (i ? ", " : " ") << mix.support[i] << ":" << fmt(mix.probs[i]);
    std::cout << "\nstop schedule:";
    for (int k = 1; k <= inst.horizon; ++k)
        std::cout << (k > 1 ? ", " : " ") << "eta_" << k << "=" << fmt(sched.eta[k]);
    std::cout << "\n";
    return 0;
}

int cmd_solve_sg(const SkiInstance& inst, const std::optional<std::string>& out_path) {
    const skirent::BehavioralPolicy policy = skirent::subgame_policy(inst);
    std::cout << "instance: T=" << inst.horizon << " B=" << inst.stop_cost << "\n";
    std::cout << "benchmark ratio: " << fmt(skirent::sg_benchmark_ratio(inst)) << "\n";
    const std::string dump = skirent::policy_dump_json(policy);
    if (out_path) {
        std::ofstream os(*out_path);
        if (!os) throw std::runtime_error("cannot write " + *out_path);
        os << dump << "\n";
        std::cout << "policy written to " << *out_path << "\n";
    } else {
        std::cout << "policy: " << dump << "\n";
    }
    return 0;
}

int cmd_solve_pi(const SkiInstance& inst, double eps, std::optional<double> pitch,
                 int max_rounds, const std::string& out_path,
                 const std::optional<std::string>& trace_path) {
    skirent::SolveOptions options;
    options.pitch_override = pitch;
    options.max_rounds = max_rounds;
    std::ofstream trace_os;
    if (trace_path) {
        trace_os.open(*trace_path);
        if (!trace_os) throw std::runtime_error("cannot write " + *trace_path);
        options.trace = &trace_os;
    }
    const skirent::PiSolution sol = skirent::solve_pi(inst, eps, options);
    std::ofstream os(out_path);
    if (!os) throw std::runtime_error("cannot write " + out_path);
    os << skirent::pi_solution_to_json(sol, inst, trace_path).dump(2) << "\n";
    std::cout << "value: " << fmt(sol.value) << "\n";
    std::cout << "certified gap: " << fmt(sol.certified_gap) << " (target " << fmt(eps / 4.0)
              << ")\n";
    std::cout << "rounds: " << sol.rounds << ", support size: " << sol.policies.size() << "\n";
    std::cout << "solution written to " << out_path << "\n";
    if (!sol.converged) {
        std::cerr << "did not converge within " << max_rounds
                  << " rounds; final gap " << fmt(sol.certified_gap) << "\n";
        return 3;
    }
    return 0;
}

struct SweepRow {
    int T;
    double B;
    std::string algorithm;
    double worst_p;
    double ratio;
};

SweepRow sweep_point(int T, double B, double delta, const std::string& algorithm, double eps,
                     std::optional<double> pitch, int max_rounds) {
    SkiInstance inst{T, B, delta};
    const skirent::CoverGrid grid = skirent::build_cover(inst, eps, pitch);
    SweepRow row{T, B, algorithm, 0.0, 0.0};
    if (algorithm == "wc") {
        const skirent::ThresholdMixture mix = skirent::worst_case_mixture(inst);
        std::vector<skirent::InfoSymmetricPolicy> policies;
        for (int l : mix.support) policies.push_back(skirent::threshold_as_policy(inst, l));
        const skirent::WorstPrior wp =
            skirent::evaluate_against_worst_prior(policies, mix.probs, grid, inst);
        row.worst_p = wp.worst_p;
        row.ratio = wp.ratio;
    } else if (algorithm == "sg") {
        const skirent::BehavioralPolicy policy = skirent::subgame_policy(inst);
        double best = -1.0, best_p = grid.points.front();
        std::vector<double> ratios(grid.points.size());
        for (std::size_t j = 0; j < grid.points.size(); ++j) {
            const double p = grid.points[j];
            ratios[j] = skirent::policy_expected_cost(policy, p) / skirent::bayes_opt_cost(inst, p);
            best = std::max(best, ratios[j]);
        }
        for (std::size_t j = 0; j < grid.points.size(); ++j)
            if (ratios[j] >= best - 1e-12) best_p = grid.points[j];
        row.worst_p = best_p;
        row.ratio = best;
    } else if (algorithm == "pi") {
        skirent::SolveOptions options;
        options.pitch_override = pitch;
        options.max_rounds = max_rounds;
        const skirent::PiSolution sol = skirent::solve_pi(inst, eps, options);
        const skirent::WorstPrior wp = skirent::evaluate_against_worst_prior(
            sol.policies, sol.policy_weights, grid, inst);
        row.worst_p = wp.worst_p;
        row.ratio = wp.ratio;
    } else {
        throw std::invalid_argument("unknown algorithm: " + algorithm);
    }
    return row;
}

int cmd_sweep(const std::vector<int>& t_values, const std::vector<double>& b_values,
              double delta, const std::vector<std::string>& algorithms, double eps,
              std::optional<double> pitch, int max_rounds, const std::string& out_path) {
    // Points are independent; evaluate concurrently but write in config order.
    std::vector<std::future<SweepRow>> futures;
    for (int T : t_values)
        for (double B : b_values)
            for (const std::string& alg : algorithms)
                futures.push_back(std::async(std::launch::async, sweep_point, T, B, delta,
                                             alg, eps, pitch, max_rounds));
    std::ostringstream csv;
    csv << "T,B,algorithm,metric,worst_p,ratio\n";
    for (auto& f : futures) {
        const SweepRow row = f.get();
        csv << row.T << ',' << fmt(row.B) << ',' << row.algorithm << ",pi_framework,"
            << fmt(row.worst_p) << ',' << fmt(row.ratio) << "\n";
    }
    if (out_path == "-") {
        std::cout << csv.str();
    } else {
        std::ofstream os(out_path);
        if (!os) throw std::runtime_error("cannot write " + out_path);
        os << csv.str();
        std::cout << "sweep written to " << out_path << "\n";
    }
    return 0;
}

int cmd_eval_seq(const std::string& algorithm, const std::string& seq_text, double B,
                 std::optional<int> T_flag) {
    std::vector<int> seq;
    for (char c : seq_text) {
        if (c != '0' && c != '1') throw std::invalid_argument("sequence must be 0/1 characters");
        seq.push_back(c - '0');
    }
    if (seq.empty()) throw std::invalid_argument("empty sequence");
    const int T = static_cast<int>(seq.size());
    if (T_flag && *T_flag != T) throw std::invalid_argument("--T disagrees with sequence length");
    SkiInstance inst{T, B, 1e-3};
    inst.validate();

    double cost = 0.0;
    if (algorithm == "wc") {
        cost = skirent::wc_cost_on_sequence(skirent::worst_case_mixture(inst), seq, inst);
    } else if (algorithm == "sg") {
        cost = skirent::policy_cost_on_sequence(skirent::subgame_policy(inst), seq);
    } else {
        throw std::invalid_argument("algorithm must be wc or sg");
    }
    const double opt = skirent::hindsight_opt_cost(seq, inst);
    std::cout << "algorithm: " << algorithm << "\n";
    std::cout << "sequence: " << seq_text << " (T=" << T << ")\n";
    std::cout << "expected cost: " << fmt(cost) << "\n";
    std::cout << "hindsight optimum: " << fmt(opt) << "\n";
    if (opt == 0.0) {
        std::cout << "ratio: " << fmt(1.0) << " (no good days; 0/0 reported as 1 by convention)\n";
    } else {
        std::cout << "ratio: " << fmt(cost / opt) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-horizon ski-rental solvers: worst-case, subgame, and prior-independent"};
    app.require_subcommand(1);

    int T = 0;
    double B = 0.0;
    double delta = 1e-3;
    double eps = 0.01;
    double pitch_value = 0.0;
    int max_rounds = 200000;
    int sweep_max_rounds = 10000;
    std::string out_path;
    std::string trace_path;
    std::string config_path;
    std::string algorithm;
    std::string seq_text;
    std::vector<int> t_list;
    std::vector<double> b_list;
    double b_min = 0.0, b_max = 0.0, b_step = 0.0;
    std::vector<std::string> algorithms{"wc", "sg", "pi"};

    auto* wc = app.add_subcommand("solve-wc", "Closed-form worst-case optimal mixture");
    wc->add_option("--T", T, "horizon")->required();
    wc->add_option("--B", B, "stop cost")->required();

    auto* sg = app.add_subcommand("solve-sg", "Subgame-optimal behavioral policy");
    sg->add_option("--T", T, "horizon")->required();
    sg->add_option("--B", B, "stop cost")->required();
    sg->add_option("--out", out_path, "policy JSON output path");

    auto* pi = app.add_subcommand("solve-pi", "Prior-independent optimal mixture");
    pi->add_option("--T", T, "horizon")->required();
    pi->add_option("--B", B, "stop cost")->required();
    pi->add_option("--eps", eps, "approximation target");
    pi->add_option("--delta", delta, "prior floor");
    pi->add_option("--pitch", pitch_value, "grid pitch override");
    pi->add_option("--max-rounds", max_rounds, "learning round cap");
    pi->add_option("--out", out_path, "solution JSON output path");
    pi->add_option("--trace", trace_path, "per-round CSV trace path");

    auto* sweep = app.add_subcommand("sweep", "CSV comparison over horizons and stop costs");
    sweep->add_option("--T", t_list, "horizon (repeatable)");
    sweep->add_option("--B", b_list, "stop cost (repeatable)");
    sweep->add_option("--B-min", b_min, "stop cost range start");
    sweep->add_option("--B-max", b_max, "stop cost range end");
    sweep->add_option("--B-step", b_step, "stop cost range step");
    sweep->add_option("--eps", eps, "approximation target");
    sweep->add_option("--delta", delta, "prior floor");
    sweep->add_option("--pitch", pitch_value, "grid pitch override");
    sweep->add_option("--max-rounds", sweep_max_rounds, "learning round cap per point");
    sweep->add_option("--algorithms", algorithms, "subset of wc,sg,pi")->delimiter(',');
    sweep->add_option("--out", out_path, "CSV output path ('-' for stdout)");
    sweep->add_option("--config", config_path, "JSON config file (flags win)");

    auto* ev = app.add_subcommand("eval-seq", "Evaluate an algorithm on a fixed sequence");
    ev->add_option("--algorithm", algorithm, "wc or sg")->required();
    ev->add_option("--seq", seq_text, "weather sequence, e.g. 100000000")->required();
    ev->add_option("--B", B, "stop cost")->required();
    ev->add_option("--T", T, "horizon (optional; must match sequence length)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        // Fill sweep settings from a JSON config; explicit flags win.
        if (*sweep && !config_path.empty()) {
            std::ifstream is(config_path);
            if (!is) throw std::invalid_argument("cannot read config " + config_path);
            const nlohmann::json cfg = nlohmann::json::parse(is);
            if (sweep->count("--T") == 0 && cfg.contains("T")) {
                if (cfg.at("T").is_array())
                    t_list = cfg.at("T").get<std::vector<int>>();
                else
                    t_list = {cfg.at("T").get<int>()};
            }
            if (sweep->count("--B") == 0 && cfg.contains("B")) {
                if (cfg.at("B").is_array())
                    b_list = cfg.at("B").get<std::vector<double>>();
                else
                    b_list = {cfg.at("B").get<double>()};
            }
            if (sweep->count("--B-min") == 0 && cfg.contains("B_min")) b_min = cfg.at("B_min");
            if (sweep->count("--B-max") == 0 && cfg.contains("B_max")) b_max = cfg.at("B_max");
            if (sweep->count("--B-step") == 0 && cfg.contains("B_step")) b_step = cfg.at("B_step");
            if (sweep->count("--eps") == 0 && cfg.contains("eps")) eps = cfg.at("eps");
            if (sweep->count("--delta") == 0 && cfg.contains("delta")) delta = cfg.at("delta");
            if (sweep->count("--pitch") == 0 && cfg.contains("pitch"))
                pitch_value = cfg.at("pitch");
            if (sweep->count("--max-rounds") == 0 && cfg.contains("max_rounds"))
                sweep_max_rounds = cfg.at("max_rounds");
            if (sweep->count("--out") == 0 && cfg.contains("out"))
                out_path = cfg.at("out").get<std::string>();
            if (sweep->count("--algorithms") == 0 && cfg.contains("algorithms"))
                algorithms = cfg.at("algorithms").get<std::vector<std::string>>();
        }
        const std::optional<double> pitch =
            pitch_value > 0.0 ? std::optional<double>(pitch_value) : std::nullopt;

        if (*wc) {
            SkiInstance inst{T, B, delta};
            inst.validate();
            return cmd_worst_case(inst);
        }
        if (*sg) {
            SkiInstance inst{T, B, delta};
            inst.validate();
            return cmd_solve_sg(inst, sg->count("--out") ? std::optional<std::string>(out_path)
                                                         : std::nullopt);
        }
        if (*pi) {
            SkiInstance inst{T, B, delta};
            inst.validate();
            if (out_path.empty()) out_path = "pi_solution.json";
            return cmd_solve_pi(inst, eps, pitch, max_rounds, out_path,
                                trace_path.empty() ? std::nullopt
                                                   : std::optional<std::string>(trace_path));
        }
        if (*sweep) {
            if (t_list.empty()) throw std::invalid_argument("sweep requires --T (flag or config)");
            std::vector<double> bs = b_list;
            if (bs.empty() && b_step > 0.0)
                for (double v = b_min; v <= b_max + 1e-12; v += b_step) bs.push_back(v);
            if (bs.empty()) throw std::invalid_argument("sweep requires --B values or a range");
            for (const std::string& a : algorithms)
                if (a != "wc" && a != "sg" && a != "pi")
                    throw std::invalid_argument("unknown algorithm: " + a);
            if (out_path.empty()) out_path = "sweep.csv";
            return cmd_sweep(t_list, bs, delta, algorithms, eps, pitch, sweep_max_rounds,
                             out_path);
        }
        if (*ev) {
            return cmd_eval_seq(algorithm, seq_text, B,
                                ev->count("--T") ? std::optional<int>(T) : std::nullopt);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
