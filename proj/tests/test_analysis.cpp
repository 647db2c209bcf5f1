#include "catch_amalgamated.hpp"

#include "nadir/analysis.hpp"
#include "nadir/error.hpp"
#include "nadir/presets.hpp"
#include "nadir/simulator.hpp"

#include <cmath>

using namespace nadir;
using Catch::Approx;

namespace {

// first-order swing response with no governor to a constant support c: 2H df' = c - D df - P_d
Trace first_order(const GridParameters& g, double P_d, double c, double dt, double T) {
    Trace tr;
    const int n = static_cast<int>(std::llround(T / dt));
    for (int i = 0; i <= n; ++i) {
        const double t = i * dt;
        tr.t.push_back(t);
        tr.df.push_back((c - P_d) / g.D * (1 - std::exp(-g.D * t / (2 * g.H))));
        tr.dpm.push_back(0.0);
        tr.dpe.push_back(c);
    }
    return tr;
}

}  // namespace

TEST_CASE("energy identity") {
    const GridParameters g;
    Trace zero{{0.0, 1.0, 2.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
    const auto z = energy_identity(zero, g, 0.0);
    CHECK(z.residual == 0.0);
    CHECK(z.S_df == 0.0);
    CHECK(z.E_m == 0.0);

    // with a net released energy the residual equals it, sign included
    for (double c : {0.02, -0.01}) {
        const auto tr = first_order(g, 0.05, c, 0.001, 30.0);
        const auto e = energy_identity(tr, g, 0.05);
        CHECK(e.residual == Approx(c * 30.0).epsilon(1e-6));
    }
    const auto neutral = energy_identity(first_order(g, 0.05, 0.0, 0.001, 30.0), g, 0.05);
    CHECK(std::abs(neutral.residual) < 1e-8);

    Trace no_pm = zero;
    no_pm.dpm.clear();
    CHECK_THROWS_AS(energy_identity(no_pm, g, 0.0), ParameterError);
    Trace ragged = zero;
    ragged.df.pop_back();
    CHECK_THROWS_AS(energy_identity(ragged, g, 0.0), ParameterError);
}

TEST_CASE("identity on the optimal trajectory") {
    const auto s = load_preset("two_machine");
    const auto p = build_problem(s.grid, s.aggregate(), 0.075, 30.0);
    const auto g = make_grid(60, 0.0, 30.0);
    const auto tr = transcribe(p, g);
    const auto lp = solve_transcription(tr);
    const auto fine = extract_solution(lp, tr, p, 0.001);
    const auto e = energy_identity(to_trace(fine), s.grid, 0.075);
    CHECK(std::abs(e.residual) <= 1e-6);
    CHECK(std::abs(fine.energy_residual) <= 1e-6);

    // scaling the whole trace scales the residual
    auto scaled = to_trace(fine);
    const double kappa = 0.37;
    for (auto* v : {&scaled.df, &scaled.dpm, &scaled.dpe})
        for (double& x : *v) x *= kappa;
    const auto es = energy_identity(scaled, s.grid, kappa * 0.075);
    CHECK(es.residual == Approx(kappa * e.residual).margin(1e-9));
    CHECK(es.S_df == Approx(kappa * e.S_df).epsilon(1e-12));
}

TEST_CASE("envelope scale factor") {
    CHECK(envelope_mu(4.2, 1.0, 30.0, 5.0, 1 - 1e-9) > 1 - 1e-4);
    bool inside = true;
    for (double H : {0.5, 4.2, 20.0})
        for (double D : {0.1, 1.0, 6.0})
            for (double tc : {0.0, 10.0, 29.0})
                for (double eta : {0.01, 0.3, 0.7, 0.99}) {
                    const auto r = envelope_terms(H, D, 30.0, tc, eta);
                    if (!(r.mu > 0.0 && r.mu < 1.0) || !(r.X > 0) || !(r.Y > 0)) inside = false;
                }
    CHECK(inside);

    for (double eta : {0.2, 0.5, 0.9}) {
        const double H = 4.2, D = 1.0, tf = 30.0;
        const double simple =
            (2 * H + D * tf - std::sqrt((2 * H + D * tf) * (2 * H + D * tf) - eta * D * tf * (D * tf + 4 * H))) / (D * tf);
        CHECK(envelope_mu(H, D, tf, 0.0, eta) == Approx(simple).epsilon(1e-13));
    }

    CHECK_THROWS_AS(envelope_mu(4.2, 1.0, 30.0, 5.0, 1.0), ParameterError);
    CHECK_THROWS_AS(envelope_mu(4.2, 1.0, 30.0, 5.0, 0.0), ParameterError);
    CHECK_THROWS_AS(envelope_mu(4.2, 0.0, 30.0, 5.0, 0.5), ParameterError);
    CHECK_THROWS_AS(envelope_mu(0.0, 1.0, 30.0, 5.0, 0.5), ParameterError);
    CHECK_THROWS_AS(envelope_mu(4.2, 1.0, 30.0, 30.0, 0.5), ParameterError);
}

TEST_CASE("theorem checks") {
    const auto s = load_preset("two_machine");
    const auto p = build_problem(s.grid, s.aggregate(), 0.075, 30.0);
    const auto sol = solve_trajectory(p, 60);
    const auto rep = theorem_checks(sol, &p);
    CHECK(rep.passed());
    REQUIRE(rep.min_integral_nadir);
    CHECK(rep.min_integral_rel <= 0.005);
    CHECK(rep.terminal_gap <= 0.01 * std::abs(rep.nadir));

    // virtual inertia dips below where it settles
    auto vic = s;
    for (auto& t : vic.turbines) t.controller = ControllerKind::ClassicVic;
    vic.solver.horizon = 40.0;
    const auto r = run(vic);
    Trace tr;
    const size_t i0 = static_cast<size_t>(std::llround(vic.events.front().t / r.dt));
    const size_t i1 = i0 + static_cast<size_t>(std::llround(30.0 / r.dt));
    for (size_t i = i0; i <= i1; ++i) {
        tr.t.push_back(r.t[i] - r.t[i0]);
        tr.df.push_back(r.df[i]);
        tr.dpm.push_back(r.dpm[i]);
        tr.dpe.push_back(r.dpe[i]);
    }
    const auto vr = trace_checks(tr, vic.grid, vic.events.front().magnitude);
    CHECK(vr.terminal_gap > 0.0);
    CHECK(vr.nadir_below_terminal);
    CHECK(vr.nadir < sol.nadir);

    const auto zero = solve_trajectory(build_problem(s.grid, s.aggregate(), 0.0, 30.0), 20);
    const auto zr = theorem_checks(zero);
    CHECK(zr.passed());
    CHECK(zr.nadir == 0.0);
    CHECK(zr.S_df == Approx(0.0).margin(1e-15));
    CHECK(zr.E_m == Approx(0.0).margin(1e-15));
    CHECK(zr.terminal_gap == Approx(0.0).margin(1e-15));
}
