#include "nadir/analysis.hpp"
#include "nadir/error.hpp"
#include "nadir/presets.hpp"
#include "nadir/report.hpp"
#include "nadir/simulator.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace nadir;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Common {
    std::string scenario;
    std::string preset;
    std::string out;
    int nodes = 0;
    bool seedless = false;
};

struct Loaded {
    Scenario s;
    std::string checksum;
    std::string source;
    fs::path out;
};

Loaded load(const Common& c) {
    if (c.scenario.empty() == c.preset.empty()) throw ValidationError({"give exactly one of --scenario or --preset"});
    Loaded l;
    if (!c.preset.empty()) {
        try {
            l.s = load_preset(c.preset);
        } catch (const ParameterError& e) {
            throw ValidationError({e.what()});
        }
        l.source = "preset:" + c.preset;
    } else {
        l.s = load_scenario_file(c.scenario);
        l.source = c.scenario;
    }
    if (c.nodes > 0) {
        l.s.solver.K = c.nodes;
        auto issues = validate_scenario(l.s);
        if (!issues.empty()) throw ValidationError(issues);
    } else if (c.nodes < 0) {
        throw ValidationError({"--nodes: must be positive"});
    }
    l.checksum = checksum(to_json(l.s));
    l.out = c.out.empty() ? fs::path(l.s.output.dir) : fs::path(c.out);
    fs::create_directories(l.out);
    return l;
}

bool wants(const Scenario& s, const std::string& f) {
    for (const auto& x : s.output.formats)
        if (x == f) return true;
    return false;
}

json header(const Loaded& l, const std::string& command) {
    return json{{"command", command},
                {"scenario", l.s.name},
                {"source", l.source},
                {"scenario_checksum", l.checksum},
                {"schema_version", l.s.schema_version}};
}

std::string out_path(const Loaded& l, const std::string& file) {
    return (l.out / file).string();
}

int cmd_solve(const Common& c) {
    const auto l = load(c);
    const auto& s = l.s;
    const double P_d = s.solver.hypothetical_P_d;
    if (P_d == 0.0) std::cerr << "warning: hypothetical_P_d is zero, trajectory is identically zero\n";
    const auto p = build_problem(s.grid, s.aggregate(), P_d, s.solver.t_f);
    const auto sol = solve_trajectory(p, s.solver.K);
    json j = header(l, "solve");
    j["trajectory"] = to_json(sol);
    j["analysis"] = to_json(theorem_checks(sol, P_d == 0.0 ? nullptr : &p));
    if (!sol.zero_disturbance && s.solver.K / 2 >= 10) {
        const auto half = solve_trajectory(p, s.solver.K / 2);
        const double rel = std::abs(half.nadir - sol.nadir) / std::abs(sol.nadir);
        j["trajectory"]["diagnostics"]["convergence"] = {
            {"K_half", s.solver.K / 2}, {"nadir_half_pu", half.nadir}, {"rel_diff", rel}, {"below_0.1pct", rel < 1e-3}};
    }
    if (wants(s, "csv")) write_trajectory_csv(out_path(l, "trajectory.csv"), sol);
    if (wants(s, "json")) write_json(out_path(l, "solve.json"), j);
    std::cout << "nadir " << fmt(sol.nadir) << " pu (" << fmt(sol.nadir_hz()) << " Hz), alpha " << fmt(sol.alpha)
              << ", K " << s.solver.K << "\n";
    return 0;
}

int cmd_synthesize(const Common& c) {
    const auto l = load(c);
    const auto setup = prepare_controllers(l.s);
    json j = header(l, "synthesize");
    j["controller"] = controller_json(setup, l.s);
    if (wants(l.s, "json")) write_json(out_path(l, "controller.json"), j);
    std::cout << "K_w " << fmt(setup.aggregate.K_w) << ", alpha " << fmt(setup.alpha) << ", factors";
    for (double f : setup.factors) std::cout << ' ' << fmt(f);
    std::cout << "\n";
    return 0;
}

double event_magnitude(const Scenario& s) {
    return s.events.empty() ? 0.0 : s.events.front().magnitude;
}

int cmd_simulate(const Common& c) {
    const auto l = load(c);
    const auto& s = l.s;
    const auto setup = prepare_controllers(s);
    const auto r = run(s, setup);
    const double ref = linear_reference(setup)(event_magnitude(s));
    const auto m = metrics(r, s.grid, ref, s.solver.t_f);
    json j = header(l, "simulate");
    j["metrics"] = to_json(m);
    j["run"] = run_json(r);
    Trace tr{r.t, r.df, r.dpm, r.dpe};
    double pd_total = 0.0;
    for (const auto& e : s.events) pd_total += e.magnitude;
    j["analysis"] = to_json(trace_checks(tr, s.grid, pd_total));
    if (wants(s, "csv")) write_trace_csv(out_path(l, "trace.csv"), r);
    if (wants(s, "json")) write_json(out_path(l, "metrics.json"), j);
    std::cout << "nadir " << fmt(m.nadir) << " pu (" << fmt(m.nadir_hz) << " Hz), e_r " << fmt(m.e_r) << " %, limit events "
              << r.limit_events << "\n";
    return 0;
}

int cmd_compare(const Common& c) {
    const auto l = load(c);
    const auto& s = l.s;
    const auto setup = prepare_controllers(s);
    const double ref = linear_reference(setup)(event_magnitude(s));
    json rows = json::array();
    std::ofstream csv;
    if (wants(s, "csv")) {
        csv.open(out_path(l, "compare.csv"), std::ios::binary);
        csv << "strategy,nadir_pu,nadir_hz,t_nadir_s,e_r_pct,limit_events\n";
    }
    double none_nadir = 0.0;
    std::vector<std::pair<std::string, double>> found;
    for (auto k : {ControllerKind::None, ControllerKind::ClassicVic, ControllerKind::OptimalAapc}) {
        RunOptions o;
        o.force_controller = k;
        const auto r = run(s, setup, o);
        const auto m = metrics(r, s.grid, ref, s.solver.t_f);
        if (k == ControllerKind::None) none_nadir = m.nadir;
        const double imp = none_nadir != 0.0 ? (1.0 - m.nadir / none_nadir) * 100.0 : 0.0;
        rows.push_back({{"strategy", to_string(k)},
                        {"metrics", to_json(m)},
                        {"improvement_vs_none_pct", imp},
                        {"limit_events", r.limit_events}});
        if (csv) {
            csv << to_string(k) << ',' << fmt(m.nadir) << ',' << fmt(m.nadir_hz) << ',' << fmt(m.t_nadir) << ','
                << fmt(m.e_r) << ',' << r.limit_events << '\n';
            write_trace_csv(out_path(l, "trace_" + to_string(k) + ".csv"), r);
        }
        found.emplace_back(to_string(k), m.nadir);
        std::cout << to_string(k) << ": nadir " << fmt(m.nadir_hz) << " Hz\n";
    }
    json j = header(l, "compare");
    j["strategies"] = rows;
    const bool ordered = std::abs(found[2].second) < std::abs(found[1].second) &&
                         std::abs(found[1].second) < std::abs(found[0].second);
    j["ordering_optimal_vic_none"] = ordered;
    if (wants(s, "json")) write_json(out_path(l, "compare.json"), j);
    return 0;
}

int cmd_sweep(const Common& c, double from, double to, int steps) {
    const auto l = load(c);
    const auto& s = l.s;
    if (steps < 1) throw ValidationError({"--steps: must be at least 1"});
    if (!(from > 0.0) || !(to > from)) throw ValidationError({"--from/--to: need 0 < from < to (fractions of P_L)"});
    std::vector<double> grid;
    for (int i = 0; i <= steps; ++i) grid.push_back((from + (to - from) * i / steps) * s.grid.P_L);
    const auto setup = prepare_controllers(s);
    const auto res = insensitivity_sweep(s, setup, grid, linear_reference(setup));
    if (wants(s, "csv")) write_sweep_csv(out_path(l, "sweep.csv"), res, s.grid.f_B);
    json j = header(l, "sweep");
    json rows = json::array();
    bool monotone = true;
    for (size_t i = 0; i < res.rows.size(); ++i) {
        const auto& r = res.rows[i];
        rows.push_back({{"P_d_pu", r.P_d}, {"nadir_pu", r.nadir}, {"nadir_ref_pu", r.nadir_ref}, {"e_r_pct", r.e_r},
                        {"limits_hit", r.limits_hit}});
        if (i > 0 && std::abs(r.nadir) < std::abs(res.rows[i - 1].nadir)) monotone = false;
    }
    j["rows"] = rows;
    j["P_d_max_pu"] = res.P_d_max;
    j["P_d_max_frac_P_L"] = res.P_d_max / s.grid.P_L;
    j["nadir_monotone"] = monotone;
    if (wants(s, "json")) write_json(out_path(l, "sweep.json"), j);
    std::cout << "P_d_max " << fmt(res.P_d_max) << " pu (" << fmt(res.P_d_max / s.grid.P_L) << " P_L)\n";
    return 0;
}

int cmd_coi(const std::string& traces, const std::string& weights, const std::string& out) {
    const auto m = read_machine_traces(traces, weights);
    const auto f = coi_frequency(m.f, m.H, m.S);
    std::ofstream o(out, std::ios::binary);
    if (!o) throw ParameterError("cannot write " + out);
    o << "t_s,f_coi\n";
    for (size_t i = 0; i < f.size(); ++i) o << fmt(m.t[i]) << ',' << fmt(f[i]) << '\n';
    return 0;
}

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--scenario", c.scenario, "scenario JSON file");
    sub->add_option("--preset", c.preset, "built-in preset name");
    sub->add_option("--out", c.out, "output directory (default: the scenario's output.dir)");
    sub->add_option("--nodes", c.nodes, "collocation nodes K");
    sub->add_flag("--seedless", c.seedless, "accepted for compatibility; nothing is random");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nadir: optimal frequency support of wind turbines"};
    app.require_subcommand(0, 1);
    std::string dump;
    std::string dump_out;
    app.add_option("--dump-preset", dump, "print a preset as a standalone scenario file");
    app.add_option("--dump-out", dump_out, "write the dumped preset here instead of stdout");
    bool list = false;
    app.add_flag("--list-presets", list, "list built-in presets");

    Common csolve, csynth, csim, ccmp, csweep;
    auto* solve = app.add_subcommand("solve", "trajectory optimization");
    add_common(solve, csolve);
    auto* synth = app.add_subcommand("synthesize", "feedback controller and allocation");
    add_common(synth, csynth);
    auto* sim = app.add_subcommand("simulate", "closed-loop run");
    add_common(sim, csim);
    auto* cmp = app.add_subcommand("compare", "none vs classic VIC vs optimal AAPC");
    add_common(cmp, ccmp);
    auto* sweep = app.add_subcommand("sweep", "event-insensitivity sweep over P_d");
    add_common(sweep, csweep);
    double from = 0.02, to = 0.20;
    int steps = 9;
    sweep->add_option("--from", from, "first P_d as a fraction of P_L");
    sweep->add_option("--to", to, "last P_d as a fraction of P_L");
    sweep->add_option("--steps", steps, "number of intervals");
    auto* coi = app.add_subcommand("coi", "centre-of-inertia frequency from external machine traces");
    std::string traces, weights, coi_out = "coi.csv";
    coi->add_option("--traces", traces, "CSV: time column then one frequency column per machine")->required();
    coi->add_option("--weights", weights, "JSON sidecar with H and S per machine")->required();
    coi->add_option("--out", coi_out, "output CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (list) {
            for (const auto& n : preset_names()) std::cout << n << "\n";
            return 0;
        }
        if (!dump.empty()) {
            const auto doc = to_json(load_preset(dump)).dump(2) + "\n";
            if (dump_out.empty()) {
                std::cout << doc;
            } else {
                std::ofstream o(dump_out, std::ios::binary);
                if (!o) throw ParameterError("cannot write " + dump_out);
                o << doc;
            }
            return 0;
        }
        if (*solve) return cmd_solve(csolve);
        if (*synth) return cmd_synthesize(csynth);
        if (*sim) return cmd_simulate(csim);
        if (*cmp) return cmd_compare(ccmp);
        if (*sweep) return cmd_sweep(csweep, from, to, steps);
        if (*coi) return cmd_coi(traces, weights, coi_out);
        std::cout << app.help();
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "invalid scenario:\n";
        for (const auto& i : e.issues()) std::cerr << "  " << i << "\n";
        return 2;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
