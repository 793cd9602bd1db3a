#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aca/aca.hpp"

namespace aca::cli {

// Exit codes: 0 success/PASS, 1 witness/FAIL, 2 usage or file errors.
inline constexpr int exit_pass = 0;
inline constexpr int exit_fail = 1;
inline constexpr int exit_usage = 2;

namespace detail {

struct CommonOpts {
    std::string rule_path;
    std::string init;
    std::string schedule = "sync";
    int steps = 10;
    std::uint64_t seed = 0;
    int window = 0;
    int origin = 0;
    bool lift = false;
};

inline Configuration build_initial(const CommonOpts& o, const LoadedRule& rule) {
    Configuration cfg;
    cfg.origin = o.origin;
    cfg.boundary = rule.boundary();
    if (!o.init.empty()) {
        if (std::filesystem::exists(o.init)) {
            cfg = parse_config_file(aca::detail::read_file(o.init), o.init);
            if (o.origin != 0) cfg.origin = o.origin;
            cfg.boundary = rule.boundary();
        } else {
            cfg.cells = parse_states_string(o.init);
        }
    } else if (o.window > 0) {
        cfg.cells.assign(static_cast<std::size_t>(o.window), 0);
    } else {
        throw error("provide --init or --window");
    }
    if (o.window > 0 && cfg.width() != o.window)
        throw error("--window " + std::to_string(o.window) + " does not match the initial configuration (" +
                    std::to_string(cfg.width()) + " cells)");
    if (cfg.boundary.kind == BoundaryKind::free_half_line && cfg.origin != 0)
        throw error("free-boundary windows start at origin 0");

    if (o.lift) {
        if (!rule.is_marching()) throw error("--lift needs a marching rule file");
        return lift_config(std::get<MarchingRule>(rule.rule), cfg);
    }
    const StateSpace ss = rule.states();
    for (const State s : cfg.cells)
        if (!ss.contains(s))
            throw error("initial state " + std::to_string(s) + " out of range for this rule");
    return cfg;
}

inline Schedule build_schedule(const CommonOpts& o, const Configuration& window) {
    const std::string& s = o.schedule;
    if (s == "sync") return Schedule::synchronous();
    if (s.rfind("bernoulli:", 0) == 0) {
        const double p = std::stod(s.substr(10));
        return Schedule::bernoulli(p, o.seed);
    }
    if (s.rfind("roundrobin:", 0) == 0) return Schedule::round_robin(std::stoi(s.substr(11)));
    if (s.rfind("file:", 0) == 0) return load_schedule_file(s.substr(5), window);
    throw error("unknown schedule '" + s + "' (sync | bernoulli:p | roundrobin:k | file:PATH)");
}

template <class Fn>
int with_automaton(const LoadedRule& rule, Fn&& fn) {
    if (rule.is_marching()) return fn(std::get<MarchingRule>(rule.rule));
    return fn(std::get<RuleTable1D>(rule.rule));
}

inline void add_common(CLI::App* cmd, CommonOpts& o, bool with_schedule = true) {
    cmd->add_option("--rule", o.rule_path, "rule file")->required();
    cmd->add_option("--init", o.init, "initial configuration: digit string, comma list, or file");
    cmd->add_option("--window", o.window, "window width (all-zero window if --init is absent)");
    cmd->add_option("--origin", o.origin, "absolute index of the leftmost cell");
    cmd->add_flag("--lift", o.lift, "treat --init as base states and lift into the marching embedding");
    if (with_schedule) {
        cmd->add_option("--schedule", o.schedule, "sync | bernoulli:p | roundrobin:k | file:PATH");
        cmd->add_option("--steps", o.steps, "number of steps");
        cmd->add_option("--seed", o.seed, "seed for randomized schedules");
    }
}

inline void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty())
        out << text;
    else
        aca::detail::write_file(out_path, text);
}

} // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"asynchronous cellular automata workbench"};
    app.name("aca");
    app.require_subcommand(1);

    detail::CommonOpts o;
    std::string out_path;
    std::string format = "tsv";
    std::string palette{default_palette};
    std::string trace_path;
    std::string out_prefix = "aca";
    std::string mode = "local";
    int width5 = 5;
    std::uint64_t budget = std::uint64_t{1} << 20;
    std::int64_t samples = 0;
    int horizon = 100;
    double p = 0.5;
    bool dump_zeta = false;
    std::string zeta_path;
    std::vector<std::string> schedules;

    auto* validate_cmd = app.add_subcommand("validate", "check a rule file for totality and ranges");
    validate_cmd->add_option("--rule", o.rule_path, "rule file")->required();

    auto* simulate_cmd = app.add_subcommand("simulate", "run a schedule and write the trace");
    detail::add_common(simulate_cmd, o);
    simulate_cmd->add_option("--format", format, "tsv | grid | pixmap");
    simulate_cmd->add_option("--out", out_path, "output file (default: stdout)");

    auto* check_cmd = app.add_subcommand("check", "decide local commutativity");
    check_cmd->add_option("--rule", o.rule_path, "rule file")->required();
    check_cmd->add_option("--mode", mode, "local (tuple equations) | pairwise (window enumeration)");
    check_cmd->add_option("--width", width5, "window width for pairwise mode");
    check_cmd->add_option("--budget", budget, "config budget for exhaustive pairwise mode");
    check_cmd->add_option("--samples", samples, "sampled pairwise mode: number of random configs");
    check_cmd->add_option("--seed", o.seed, "seed for sampled mode");

    auto* mono_cmd = app.add_subcommand("check-monotonicity", "check that updates never revoke freedom");
    detail::add_common(mono_cmd, o);

    auto* hist_cmd = app.add_subcommand("history-compare",
                                        "compare per-site state sequences across schedules");
    detail::add_common(hist_cmd, o, false);
    hist_cmd->add_option("--schedule", schedules, "schedule (repeat the flag; at least two)")
        ->required();
    hist_cmd->add_option("--steps", o.steps, "number of steps");
    hist_cmd->add_option("--seed", o.seed, "seed for randomized schedules");
    hist_cmd->add_flag("--dump-zeta", dump_zeta, "write the per-site sequences as TSV");
    hist_cmd->add_option("--zeta-out", zeta_path, "where to write the sequences (default: stdout)");

    auto* transform_cmd = app.add_subcommand("transform", "rule-to-rule constructions");
    auto* marching_cmd = transform_cmd->add_subcommand("marching", "order-robust embedding of a base rule");
    marching_cmd->add_option("--rule", o.rule_path, "base rule file")->required();
    marching_cmd->add_option("--out", out_path, "output rule file (default: stdout)");

    auto* reconstruct_cmd = app.add_subcommand("reconstruct",
                                               "recover the base-layer run from a composite trace");
    reconstruct_cmd->add_option("--rule", o.rule_path, "marching rule file (or its base)")->required();
    reconstruct_cmd->add_option("--trace", trace_path, "trace TSV of the composite run")->required();
    reconstruct_cmd->add_option("--out-prefix", out_prefix, "prefix for the delta/taubar/etabar TSVs");

    auto* gadget_cmd = app.add_subcommand("gadget", "reduction constructions");
    auto* gprime_cmd = gadget_cmd->add_subcommand("gprime", "sweep extension of a base rule");
    gprime_cmd->add_option("--rule", o.rule_path, "base rule file")->required();
    gprime_cmd->add_option("--out", out_path, "output rule file (default: stdout)");
    auto* undec_cmd = gadget_cmd->add_subcommand("undec", "branch rule over a commutative base");
    undec_cmd->add_option("--rule", o.rule_path, "base rule file")->required();
    undec_cmd->add_option("--out", out_path, "output rule file (default: stdout)");
    auto* demo_cmd = gadget_cmd->add_subcommand("demo", "exhibit schedule-dependent histories");
    demo_cmd->add_option("--rule", o.rule_path, "base rule file (the branch rule is built from it)")
        ->required();
    demo_cmd->add_option("--window", o.window, "window width");
    demo_cmd->add_option("--horizon", horizon, "max steps to wait for the base layer");
    demo_cmd->add_option("--out-prefix", out_prefix, "prefix for the two trace TSVs");

    auto* render_cmd = app.add_subcommand("render", "turn a trace TSV into a picture");
    render_cmd->add_option("--trace", trace_path, "trace TSV")->required();
    render_cmd->add_option("--format", format, "grid | pixmap");
    render_cmd->add_option("--palette", palette, "glyphs for grid rendering, state-indexed");
    render_cmd->add_option("--out", out_path, "output file (default: stdout)");

    int bench_window = 32;
    int bench_steps = 2000;
    auto* bench_cmd = app.add_subcommand("bench", "measurements");
    auto* poisson_cmd = bench_cmd->add_subcommand("poisson", "random-updating slowdown of the embedding");
    poisson_cmd->add_option("--rule", o.rule_path, "base rule file")->required();
    poisson_cmd->add_option("--p", p, "per-site attempt probability");
    poisson_cmd->add_option("--window", bench_window, "window width");
    poisson_cmd->add_option("--steps", bench_steps, "number of steps");
    poisson_cmd->add_option("--seed", o.seed, "seed");

    std::vector<std::string> argv_store{"aca"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_store) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_pass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        if (*validate_cmd) {
            const ParsedRule pr = load_rule_file(o.rule_path);
            const ValidationReport rep = pr.validate();
            out << rep.summary() << "\n";
            return rep.valid ? exit_pass : exit_fail;
        }

        if (*simulate_cmd) {
            const LoadedRule rule = load_rule(o.rule_path);
            const Configuration init = detail::build_initial(o, rule);
            const Schedule sched = detail::build_schedule(o, init);
            if (rule.is_marching() && init.boundary.kind == BoundaryKind::cyclic &&
                !marching_age_loop_consistent(std::get<MarchingRule>(rule.rule), init))
                err << "warning: inconsistent counter loop on the cyclic window; the run will stall\n";
            return detail::with_automaton(rule, [&](const auto& a) {
                const Trajectory traj = simulate(a, init, sched, o.steps);
                if (format == "tsv")
                    detail::emit(trace_to_tsv(traj), out_path, out);
                else if (format == "grid")
                    detail::emit(render_grid(traj.frames, palette), out_path, out);
                else if (format == "pixmap")
                    detail::emit(render_ppm(traj.frames), out_path, out);
                else
                    throw error("unknown format '" + format + "'");
                return exit_pass;
            });
        }

        if (*check_cmd) {
            const LoadedRule rule = load_rule(o.rule_path);
            if (mode == "local") {
                const auto witness = rule.is_marching()
                                         ? check_marching_commutativity(std::get<MarchingRule>(rule.rule))
                                         : check_local_commutativity_1d(std::get<RuleTable1D>(rule.rule));
                if (!witness) {
                    out << "PASS\n";
                    return exit_pass;
                }
                out << witness->describe();
                return exit_fail;
            }
            if (mode == "pairwise") {
                if (rule.is_marching()) throw error("pairwise mode works on plain rules");
                const NetworkAutomaton net = to_network(std::get<RuleTable1D>(rule.rule), width5);
                const PairwiseReport rep =
                    samples > 0 ? check_pairwise_network(net, SampledMode{samples, o.seed})
                                : check_pairwise_network(net, PairwiseOptions{budget});
                if (rep.pass()) {
                    out << "PASS\n";
                    out << "# checked " << rep.configs_checked << " of "
                        << static_cast<double>(rep.config_space) << " configurations ("
                        << (rep.exhaustive ? "exhaustive" : "sampled") << ")\n";
                    return exit_pass;
                }
                out << rep.witness->describe();
                return exit_fail;
            }
            throw error("unknown mode '" + mode + "'");
        }

        if (*mono_cmd) {
            const LoadedRule rule = load_rule(o.rule_path);
            const Configuration init = detail::build_initial(o, rule);
            const Schedule sched = detail::build_schedule(o, init);
            return detail::with_automaton(rule, [&](const auto& a) {
                const Trajectory traj = simulate(a, init, sched, o.steps);
                const std::vector<Trajectory> trajs{traj};
                if (const auto w = check_monotonicity(a, trajs)) {
                    out << w->describe();
                    return exit_fail;
                }
                out << "PASS\n";
                return exit_pass;
            });
        }

        if (*hist_cmd) {
            if (schedules.size() < 2) throw error("history-compare needs at least two --schedule flags");
            const LoadedRule rule = load_rule(o.rule_path);
            const Configuration init = detail::build_initial(o, rule);
            std::vector<Schedule> scheds;
            for (std::size_t i = 0; i < schedules.size(); ++i) {
                detail::CommonOpts so = o;
                so.schedule = schedules[i];
                so.seed = o.seed + i; // distinct randomized schedules unless seeded apart
                scheds.push_back(detail::build_schedule(so, init));
            }
            return detail::with_automaton(rule, [&](const auto& a) {
                const HistoryVerdict verdict = invariant_history_test(a, init, scheds, o.steps);
                if (dump_zeta) {
                    std::ostringstream z;
                    z << "# aca-zeta v1\nsite\tindex\tstate\n";
                    for (const SiteHistory& h : zeta_from_synchronous(a, init, o.steps))
                        for (std::size_t k = 0; k < h.values.size(); ++k)
                            z << h.site << '\t' << k << '\t' << h.values[k] << '\n';
                    detail::emit(z.str(), zeta_path, out);
                }
                if (verdict.consistent) {
                    for (int x = init.origin; x < init.end(); ++x) out << x << "\tPASS\n";
                    out << "CONSISTENT\n";
                    return exit_pass;
                }
                const HistoryWitness& w = *verdict.witness;
                for (int x = init.origin; x < init.end(); ++x)
                    out << x << '\t' << (x == w.site ? "DIFF" : "PASS") << '\n';
                out << "INCONSISTENT site=" << w.site << " schedules=" << w.schedule_a << ","
                    << w.schedule_b << "\n";
                out << "zeta[" << w.schedule_a << "]:";
                for (State s : w.zeta_a) out << ' ' << s;
                out << "\nzeta[" << w.schedule_b << "]:";
                for (State s : w.zeta_b) out << ' ' << s;
                out << "\n";
                return exit_fail;
            });
        }

        if (*marching_cmd) {
            const ParsedRule pr = load_rule_file(o.rule_path);
            if (pr.is_marching) throw error("input is already a marching rule file");
            detail::emit(rule_to_text(pr.to_rule(), /*marching=*/true), out_path, out);
            return exit_pass;
        }

        if (*reconstruct_cmd) {
            const LoadedRule loaded = load_rule(o.rule_path);
            const MarchingRule rule = loaded.is_marching() ? std::get<MarchingRule>(loaded.rule)
                                                           : MarchingRule{loaded.base()};
            const TraceData trace = parse_trace_tsv(aca::detail::read_file(trace_path), trace_path);
            const Trajectory traj = trace.to_trajectory();
            const ReconstructionResult res = reconstruct_1d(rule, traj);
            aca::detail::write_file(out_prefix + ".delta.tsv", delta_to_tsv(res));
            aca::detail::write_file(out_prefix + ".taubar.tsv", taubar_to_tsv(res));
            aca::detail::write_file(out_prefix + ".etabar.tsv", etabar_to_tsv(res));
            if (const auto fail = verify_reconstruction(res, rule.base())) {
                out << "FAIL " << fail->describe() << "\n";
                return exit_fail;
            }
            out << "PASS\n";
            return exit_pass;
        }

        if (*gprime_cmd) {
            detail::emit(rule_to_text(build_gprime(load_rule(o.rule_path).base())), out_path, out);
            return exit_pass;
        }

        if (*undec_cmd) {
            detail::emit(rule_to_text(build_undec_rule(load_rule(o.rule_path).base())), out_path, out);
            return exit_pass;
        }

        if (*demo_cmd) {
            const RuleTable1D base = load_rule(o.rule_path).base();
            const RuleTable1D undec = build_undec_rule(base);
            const int width = o.window > 0 ? o.window : 8;
            const DivergenceDemo demo = divergence_demo(undec, width, horizon);
            aca::detail::write_file(out_prefix + ".a.tsv", trace_to_tsv(demo.first_branch));
            aca::detail::write_file(out_prefix + ".b.tsv", trace_to_tsv(demo.second_branch));
            auto print_hist = [&](const SiteHistory& h) {
                for (std::size_t i = 0; i < h.values.size(); ++i) out << (i ? "," : "") << h.values[i];
            };
            out << "DIVERGENCE site=" << demo.site << " history-a=";
            print_hist(demo.history_first);
            out << " history-b=";
            print_hist(demo.history_second);
            out << "\n";
            const std::vector<Schedule> scheds{demo.schedule_first, demo.schedule_second};
            const HistoryVerdict verdict = invariant_history_test(
                undec, demo.first_branch.initial(), scheds, demo.second_branch.horizon());
            out << (verdict.consistent ? "CONSISTENT\n" : "INCONSISTENT\n");
            return verdict.consistent ? exit_fail : exit_pass;
        }

        if (*render_cmd) {
            const TraceData trace = parse_trace_tsv(aca::detail::read_file(trace_path), trace_path);
            if (format == "tsv") format = "grid";
            if (format == "grid")
                detail::emit(render_grid(trace.frames(), palette), out_path, out);
            else if (format == "pixmap")
                detail::emit(render_ppm(trace.frames()), out_path, out);
            else
                throw error("unknown format '" + format + "'");
            return exit_pass;
        }

        if (*poisson_cmd) {
            const RuleTable1D base = load_rule(o.rule_path).base();
            const PoissonBench b = bench_poisson(base, bench_window, p, bench_steps, o.seed);
            out << "steps " << b.steps << "\nattempts-per-site " << b.attempts_per_site
                << "\nmin-progress " << b.min_age << "\nmean-progress " << b.mean_age
                << "\nfactor-min " << b.factor_min << "\nfactor-mean " << b.factor_mean << "\n";
            return exit_pass;
        }
    } catch (const parse_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const budget_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    err << "error: no subcommand\n";
    return exit_usage;
}

inline int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

} // namespace aca::cli
