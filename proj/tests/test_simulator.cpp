#include "catch_amalgamated.hpp"

#include "nadir/error.hpp"
#include "nadir/presets.hpp"
#include "nadir/simulator.hpp"

#include <algorithm>
#include <cmath>

using namespace nadir;
using Catch::Approx;

namespace {

double nadir_of(const SimResult& r) { return *std::min_element(r.df.begin(), r.df.end()); }

Scenario with_controller(Scenario s, ControllerKind k) {
    for (auto& t : s.turbines) t.controller = k;
    return s;
}

}  // namespace

TEST_CASE("no disturbance keeps everything flat") {
    auto s = load_preset("two_machine");
    s.events.clear();
    s.solver.horizon = 40.0;
    const auto r = run(s);
    CHECK_FALSE(r.had_event);
    for (double v : r.df) CHECK(v == 0.0);
    for (const auto& tt : r.turbines) {
        for (double p : tt.P_e) CHECK(p == Approx(tt.P_e0).epsilon(1e-12));
        for (double w : tt.omega) CHECK(w == Approx(tt.omega0).epsilon(1e-12));
    }
    const auto m = metrics(r, s.grid, -0.005, s.solver.t_f);
    CHECK(m.degenerate);
    CHECK(m.nadir == 0.0);
    CHECK(m.e_r == -100.0);
}

TEST_CASE("initial rate of change without support") {
    auto s = with_controller(load_preset("two_machine"), ControllerKind::None);
    s.solver.horizon = 40.0;
    const auto r = run(s);
    const auto m = metrics(r, s.grid, -0.005, s.solver.t_f);
    const double P_d = s.events.front().magnitude;
    CHECK(m.initial_rocof == Approx(-P_d / (2 * s.grid.H)).epsilon(0.005));
    CHECK(r.swing_residual <= 1e-8);
}

TEST_CASE("step halving") {
    for (auto k : {ControllerKind::OptimalAapc, ControllerKind::ClassicVic, ControllerKind::None}) {
        auto s = with_controller(load_preset("two_machine"), k);
        s.solver.horizon = 60.0;
        s.controllers.alpha = 1.186;
        const double a = nadir_of(run(s));
        s.solver.dt = 0.005;
        const double b = nadir_of(run(s));
        CHECK(std::abs(a - b) < 1e-4 * std::abs(b));
    }
}

TEST_CASE("optimal control reproduces the trajectory") {
    const auto s = load_preset("two_machine");
    const auto setup = prepare_controllers(s);
    REQUIRE(setup.trajectory);
    const auto r = run(s, setup);
    const auto m = metrics(r, s.grid, setup.reference_nadir, s.solver.t_f);
    CHECK(std::abs(m.e_r) < 2.0);
    CHECK(r.limit_events == 0);
    CHECK(r.swing_residual <= 1e-8);

    // monotone to the nadir, then flat until exit
    const size_t i0 = static_cast<size_t>(std::llround(s.events.front().t / r.dt));
    const size_t in = static_cast<size_t>(std::min_element(r.df.begin(), r.df.end()) - r.df.begin());
    for (size_t i = i0 + 1; i <= in; ++i) CHECK(r.df[i] <= r.df[i - 1] + 1e-15);

    // rotor speeds recover after exit
    for (const auto& tt : r.turbines) {
        REQUIRE(tt.exit);
        const size_t ie = static_cast<size_t>(std::llround(tt.exit->t_e / r.dt));
        const size_t i200 = std::min(r.t.size() - 1, ie + static_cast<size_t>(200.0 / r.dt));
        CHECK(std::abs(tt.omega[i200] - tt.omega0) <= 0.01 * tt.omega0);
        CHECK(tt.exit_jump <= 1e-6);
    }

    // with the crossing exit off, support lasts the whole window and the loop stays first order
    RunOptions held;
    held.power_cross_exit = false;
    const auto h = run(s, setup, held);
    REQUIRE(h.turbines.front().exit);
    CHECK(h.turbines.front().exit->trigger == ExitTrigger::Horizon);
    const double P_d = s.events.front().magnitude;
    double err = 0.0;
    for (size_t i = i0; i <= i0 + 3000; ++i)
        err = std::max(err, std::abs(h.df[i] - setup.aggregate.target_response(P_d, h.t[i] - h.t_event)));
    CHECK(err <= 0.01 * std::abs(setup.aggregate.a(P_d)));

    // determinism
    const auto again = run(s, setup);
    CHECK(again.df == r.df);
    CHECK(metrics(again, s.grid, setup.reference_nadir, s.solver.t_f).nadir == m.nadir);
}

TEST_CASE("metrics on synthetic traces") {
    SimResult r;
    r.dt = 0.01;
    r.had_event = true;
    r.t_event = 1.0;
    for (int i = 0; i <= 4000; ++i) {
        const double t = 0.01 * i;
        r.t.push_back(t);
        r.df.push_back(t < 1.0 ? 0.0 : -0.004 * (1 - std::exp(-(t - 1.0))));
    }
    const GridParameters g;
    const auto m = metrics(r, g, -0.004, 30.0);
    CHECK(m.nadir == Approx(-0.004).epsilon(1e-6));
    CHECK(m.e_r == Approx(0.0).margin(1e-3));
    CHECK(m.initial_rocof == Approx(-0.004).epsilon(0.01));
    CHECK_FALSE(m.degenerate);
    CHECK_FALSE(m.secondary_dip);

    auto deep = r;
    for (size_t i = 0; i < deep.t.size(); ++i)
        if (deep.t[i] > 35.0) deep.df[i] = -0.006;
    const auto md = metrics(deep, g, -0.004, 30.0);
    CHECK(md.secondary_dip);
    CHECK(md.primary_nadir == Approx(-0.004).epsilon(1e-3));
    CHECK(md.secondary_nadir == Approx(-0.006));
}

TEST_CASE("centre-of-inertia frequency") {
    const std::vector<double> a{50.0, 49.9, 49.8};
    CHECK(coi_frequency({a, a, a}, {1, 2, 3}, {4, 5, 6}) == a);
    const auto c = coi_frequency({{50.0}, {49.0}}, {1.0, 1.0}, {1.0, 1.0});
    CHECK(c[0] == Approx(49.5));
    const auto w1 = coi_frequency({{50.0, 49.7}, {49.0, 49.9}}, {3.0, 5.0}, {2.0, 1.0});
    const auto w10 = coi_frequency({{50.0, 49.7}, {49.0, 49.9}}, {30.0, 50.0}, {2.0, 1.0});
    for (size_t i = 0; i < w1.size(); ++i) CHECK(w1[i] == Approx(w10[i]).epsilon(1e-15));
    CHECK_THROWS_AS(coi_frequency({{50.0, 49.0}, {50.0}}, {1.0, 1.0}, {1.0, 1.0}), ParameterError);
    CHECK_THROWS_AS(coi_frequency({{50.0}, {50.0}}, {1.0}, {1.0, 1.0}), ParameterError);
}

TEST_CASE("event insensitivity sweep") {
    auto s = load_preset("two_machine");
    s.solver.horizon = 60.0;
    const auto setup = prepare_controllers(s);
    const double P_L = s.grid.P_L;
    const auto sw = insensitivity_sweep(s, setup, {0.02 * P_L, 0.06 * P_L, 0.1 * P_L, 0.4 * P_L}, linear_reference(setup));
    REQUIRE(sw.rows.size() == 4);
    CHECK(sw.rows[0].e_r < 2.0);
    CHECK(sw.rows[1].e_r < 2.0);
    CHECK(sw.rows[2].e_r < 2.0);
    CHECK(sw.rows[3].e_r > 5.0);
    CHECK(sw.rows[3].limits_hit);
    CHECK(sw.P_d_max == Approx(0.1 * P_L));

    // more wind, more headroom
    auto windy = s;
    for (auto& t : windy.turbines) t.v_w = 11.0;
    const auto setup_w = prepare_controllers(windy);
    std::vector<double> grid_pd;
    for (int i = 1; i <= 8; ++i) grid_pd.push_back(0.05 * i * P_L);
    const auto low = insensitivity_sweep(s, setup, grid_pd, linear_reference(setup));
    const auto high = insensitivity_sweep(windy, setup_w, grid_pd, linear_reference(setup_w));
    CHECK(high.P_d_max >= low.P_d_max);
}

TEST_CASE("generation trip removes the governor") {
    auto s = load_preset("multi_machine");
    s.solver.horizon = 40.0;
    s = with_controller(s, ControllerKind::None);
    s.events = {Event{1.0, EventKind::LoadSurge, 0.56, ""}};
    const double surge = nadir_of(run(s));
    s.events = {Event{1.0, EventKind::GenerationTrip, 0.56, "G7"}};
    const double trip = nadir_of(run(s));
    CHECK(trip < surge);

    s.events = {Event{1.0, EventKind::GenerationTrip, 0.56, "G99"}};
    CHECK_THROWS_AS(run(s), ValidationError);
}

TEST_CASE("invalid scenarios are rejected") {
    auto s = load_preset("two_machine");
    s.grid.H = -1.0;
    s.solver.dt = 0.0;
    try {
        run(s);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("H") != std::string::npos);
        CHECK(msg.find("dt") != std::string::npos);
    }
}
