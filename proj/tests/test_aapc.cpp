#include "catch_amalgamated.hpp"

#include "nadir/aapc.hpp"
#include "nadir/error.hpp"
#include "nadir/presets.hpp"
#include "nadir/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace nadir;
using Catch::Approx;

namespace {

struct Loop {
    Eigen::VectorXd xg, xm;
    double df = 0.0;
};

// swing + aggregate governor + AAPC with c = 1 and no limits, one joint RK4 state
std::vector<double> closed_loop(const Scenario& s, const AapcController& ctrl, double P_d, double dt, double t_end) {
    const auto gov = s.aggregate();
    const int m = gov.order();
    const double H2 = 2 * s.grid.H;
    auto f = [&](const Eigen::VectorXd& y) {
        const double df = y(0);
        const Eigen::VectorXd xg = y.segment(1, m), xm = y.segment(1 + m, m);
        const double pm = gov.C.row(0).dot(xg) + gov.D(0, 0) * df;
        const double pe = aapc_output(ctrl, xm, df).total;
        Eigen::VectorXd d(1 + 2 * m);
        d(0) = (pm + pe - s.grid.D * df - P_d) / H2;
        d.segment(1, m) = gov.A * xg + gov.B.col(0) * df;
        d.segment(1 + m, m) = ctrl.mirror.A * xm + ctrl.mirror.B.col(0) * df;
        return d;
    };
    Eigen::VectorXd y = Eigen::VectorXd::Zero(1 + 2 * m);
    std::vector<double> out;
    const int n = static_cast<int>(std::llround(t_end / dt));
    for (int k = 0; k <= n; ++k) {
        out.push_back(y(0));
        const Eigen::VectorXd k1 = f(y), k2 = f(y + 0.5 * dt * k1), k3 = f(y + 0.5 * dt * k2), k4 = f(y + dt * k3);
        y += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return out;
}

}  // namespace

TEST_CASE("synthesis constants") {
    const auto s = load_preset("two_machine");
    const auto c = synthesize(s.grid, s.aggregate(), 1.186);
    CHECK(c.K_g == Approx(17.0));
    CHECK(c.K_w == Approx(-14.1).margin(0.5));
    CHECK(c.K_w == Approx(1.0 - 18.0 / 1.186));
    CHECK(c.b == Approx(18.0 / (2 * 1.186 * 4.2)));
    CHECK(c.a(0.075) == Approx(-1.186 * 0.075 / 18.0));

    GridParameters g = s.grid;
    g.D = 0.0;
    CHECK(synthesize(g, s.aggregate(), 1.0).K_w == Approx(-17.0));
    CHECK_THROWS_AS(synthesize(s.grid, s.aggregate(), 0.99), ParameterError);
}

TEST_CASE("closed loop follows the first-order response") {
    const auto s = load_preset("two_machine");
    const auto c = synthesize(s.grid, s.aggregate(), 1.186);
    for (double P_d : {0.075, 0.0375}) {
        const auto df = closed_loop(s, c, P_d, 0.01, 30.0);
        double err = 0.0;
        for (size_t k = 0; k < df.size(); ++k) err = std::max(err, std::abs(df[k] - c.target_response(P_d, 0.01 * k)));
        CHECK(err <= 0.01 * std::abs(c.a(P_d)));
    }
    // traces scale with the disturbance
    const auto a = closed_loop(s, c, 0.075, 0.01, 30.0), b = closed_loop(s, c, 0.0375, 0.01, 30.0);
    for (size_t k = 50; k < a.size(); k += 50) CHECK(a[k] / b[k] == Approx(2.0).epsilon(0.01));
}

TEST_CASE("controller output") {
    const auto s = load_preset("two_machine");
    auto c = synthesize(s.grid, s.aggregate(), 1.2);
    for (int k = 0; k < 100; ++k) CHECK(controller_step(c, 0.0, 0.01).total == 0.0);

    auto half1 = c, half2 = c, full = c;
    half1.c = half2.c = 0.5;
    double worst = 0.0;
    for (int k = 0; k < 500; ++k) {
        const double df = c.target_response(0.075, 0.01 * k);
        const double sum = controller_step(half1, df, 0.01).total + controller_step(half2, df, 0.01).total;
        worst = std::max(worst, std::abs(sum - controller_step(full, df, 0.01).total));
    }
    CHECK(worst < 1e-15);

    // decomposition signs under a frequency drop
    auto d = c;
    bool signs = true;
    for (int k = 1; k <= 3000; ++k) {
        const double df = d.target_response(0.075, 0.01 * k);
        const auto out = controller_step(d, df, 0.01);
        if (out.mirror_branch > 1e-15 || out.gain_branch < -1e-15) signs = false;
    }
    CHECK(signs);
    CHECK_THROWS_AS(controller_step(d, 0.0, 0.0), ParameterError);
}

TEST_CASE("allocation") {
    std::vector<Capability> same(4, Capability{10.0, 2.0});
    for (double v : allocate(same)) CHECK(v == Approx(0.25));

    std::vector<Capability> one_full{{10.0, 2.0}, {10.0, 0.0}, {5.0, 2.0}};
    const auto c = allocate(one_full);
    CHECK(c[1] == 0.0);
    CHECK(std::accumulate(c.begin(), c.end(), 0.0) == 1.0);

    CHECK_THROWS_AS(allocate({{0.0, 0.0}, {0.0, 0.0}}), ParameterError);
    CHECK_THROWS_AS(allocate({}), ParameterError);

    const auto u = allocate_uniform(7);
    CHECK(std::accumulate(u.begin(), u.end(), 0.0) == 1.0);

    // permutation equivariance
    std::vector<Capability> caps{{3.0, 1.0}, {1.0, 4.0}, {2.0, 2.0}, {5.0, 0.5}};
    const auto base = allocate(caps);
    std::vector<Capability> rev(caps.rbegin(), caps.rend());
    const auto r = allocate(rev);
    for (size_t j = 0; j < caps.size(); ++j) CHECK(r[caps.size() - 1 - j] == Approx(base[j]).epsilon(1e-14));
    for (double v : base) CHECK((v >= 0.0 && v <= 1.0));

    // five-turbine fleet: interior wind speeds carry the most
    const auto fleet = allocation_for(load_preset("multi_machine"), AllocationMode::Capability);
    REQUIRE(fleet.size() == 5);
    CHECK(std::accumulate(fleet.begin(), fleet.end(), 0.0) == 1.0);
    const auto top = std::max_element(fleet.begin(), fleet.end()) - fleet.begin();
    CHECK((top >= 1 && top <= 3));
    CHECK(fleet[0] < fleet[1]);
    CHECK(fleet[4] < fleet[3]);
}

TEST_CASE("exit triggers") {
    ExitCheck in;
    in.P_e = 5.0;
    in.P_mppt = 3.0;
    in.omega = 1.0;
    in.omega_min = 0.8;
    in.t = 10.0;
    in.t_end = 31.0;
    in.armed = true;
    CHECK_FALSE(check_exit(in));

    auto h = in;
    h.t = 31.0;
    REQUIRE(check_exit(h));
    CHECK(check_exit(h)->trigger == ExitTrigger::Horizon);

    auto f = in;
    f.omega = 0.8;
    REQUIRE(check_exit(f));
    CHECK(check_exit(f)->trigger == ExitTrigger::SpeedFloor);

    auto p = in;
    p.P_e = 3.0;
    REQUIRE(check_exit(p));
    CHECK(check_exit(p)->trigger == ExitTrigger::PowerCross);
    p.armed = false;
    CHECK_FALSE(check_exit(p));

    ExitState e;
    exit_gamma(e, 3.0, 4.0, 3.0);
    CHECK(e.gamma == 1.0);
    exit_gamma(e, 4.0, 4.0, 3.0);
    CHECK(e.gamma == 0.0);
    CHECK(exit_power(e, 4.2, 3.1) == 4.2);
    exit_gamma(e, 3.5, 4.0, 3.0);
    CHECK(e.gamma == Approx(0.5));
    CHECK_FALSE(e.clamped);
    exit_gamma(e, 2.0, 4.0, 3.0);
    CHECK(e.gamma == 1.0);
    CHECK(e.clamped);
    exit_gamma(e, 2.0, 3.0, 3.0 + 1e-12);
    CHECK(e.gamma == 1.0);
    CHECK_FALSE(e.clamped);
}

TEST_CASE("mid-range exit returns to MPPT smoothly") {
    auto spec = dfig5mw();
    spec.N_agg = 10;
    const double S_b = 200.0;
    const auto eq = mppt_equilibrium(spec, 10.0);
    TurbineState s = eq;
    for (int k = 0; k < 1000; ++k) s = step_rotor(s, spec, eq.P_e + 5.0, 0.01).state;
    REQUIRE(s.omega < eq.omega);
    const double pt = turbine_power(s, spec), pm = mppt_power(s.omega, spec);
    REQUIRE(pt > pm);
    ExitState e;
    const double pe_before = 0.5 * (pt + pm);
    exit_gamma(e, pe_before, pt, pm);
    CHECK(e.gamma == Approx(0.5));
    CHECK(std::abs(exit_power(e, pt, pm) - pe_before) / S_b <= 1e-6);

    double prev = s.omega;
    bool monotone = true;
    for (int k = 0; k < 20000; ++k) {
        const double cmd = exit_power(e, turbine_power(s, spec), mppt_power(s.omega, spec));
        s = step_rotor(s, spec, cmd, 0.01).state;
        if (s.omega < prev - 1e-12) monotone = false;
        prev = s.omega;
    }
    CHECK(monotone);
    CHECK(s.omega == Approx(eq.omega).epsilon(0.01));
}

TEST_CASE("baseline virtual inertia") {
    BaselineVic v;
    for (int k = 0; k < 10; ++k) CHECK(classic_vic_step(v, 0.0, 0.01) == 0.0);

    BaselineVic c;
    double out = 0.0;
    for (int k = 0; k < 500; ++k) out = classic_vic_step(c, -0.002, 0.01);
    CHECK(out == Approx(20.0 * 0.002).epsilon(1e-9));

    BaselineVic r;
    const double slope = -0.001;
    for (int k = 1; k <= 100; ++k) {
        const double t = 0.01 * k;
        out = classic_vic_step(r, slope * t, 0.01);
        if (t >= 3 * r.tau) CHECK(out + r.k_f * slope * t == Approx(-r.k_in * slope).epsilon(0.05));
    }
    CHECK_THROWS_AS(classic_vic_step(r, 0.0, -1.0), ParameterError);
}
