#include "catch_amalgamated.hpp"

#include "nadir/error.hpp"
#include "nadir/turbine.hpp"

#include <cmath>

using namespace nadir;
using Catch::Approx;

namespace {

// independent restatement of the Cp fit
double cp_ref(double lambda, double beta) {
    const double inv = 1.0 / (lambda + 0.08 * beta) - 0.035 / (beta * beta * beta + 1.0);
    return std::max(0.0, 0.22 * (116.0 * inv - 0.4 * beta - 5.0) * std::exp(-12.5 * inv));
}

// dense scan for the optimum, step 1e-4
std::pair<double, double> scan() {
    double best = 0.0, at = 0.0;
    for (double l = 2.0; l <= 15.0; l += 1e-4) {
        const double c = cp_ref(l, 0.0);
        if (c > best) {
            best = c;
            at = l;
        }
    }
    return {at, best};
}

}  // namespace

TEST_CASE("power coefficient") {
    // 1/lambda_bar = 1/8 - 0.035 = 0.09
    CHECK(power_coefficient(8.0, 0.0) == Approx(0.22 * (116 * 0.09 - 5) * std::exp(-12.5 * 0.09)).epsilon(1e-12));
    CHECK(power_coefficient(8.0, 0.0) == Approx(0.3886).epsilon(1e-3));

    // 116/lambda_bar - 5 < 0 for lambda above ~12.8
    const auto e = evaluate_cp(20.0, 0.0);
    CHECK(e.cp == 0.0);
    CHECK(e.clamped);

    const auto [l_scan, c_scan] = scan();
    const auto opt = cp_optimum(0.0);
    CHECK(opt.lambda_opt == Approx(l_scan).margin(2e-4));
    CHECK(opt.cp_max == Approx(c_scan).epsilon(1e-8));
    CHECK(opt.lambda_opt == Approx(6.325).margin(1e-3));
    CHECK(opt.cp_max == Approx(0.43821).epsilon(1e-4));

    CHECK_THROWS_AS(power_coefficient(0.0, 0.0), ParameterError);
}

TEST_CASE("Cp never exceeds the beta = 0 optimum") {
    const double cmax = cp_optimum(0.0).cp_max;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i)
        for (int j = 0; j < 100; ++j) {
            const double l = 0.5 + i * 0.15, b = j * 0.3;
            if (1.0 / (l + 0.08 * b) - 0.035 / (b * b * b + 1.0) <= 0) continue;
            worst = std::max(worst, power_coefficient(l, b));
        }
    CHECK(worst <= cmax + 1e-12);
}

TEST_CASE("turbine power") {
    auto spec = dfig5mw();
    const auto opt = cp_optimum(0.0);
    TurbineState s;
    s.v_w = 9.0;
    s.omega = opt.lambda_opt * 9.0 / spec.R_t;
    const double expect = 0.5 * 1.225 * M_PI * 63.0 * 63.0 * opt.cp_max * 729.0 / 1e6;
    CHECK(turbine_power(s, spec) == Approx(expect).epsilon(1e-9));

    spec.N_agg = 2;
    CHECK(turbine_power(s, spec) == Approx(2 * expect).epsilon(1e-12));

    s.v_w = 0.05;
    CHECK(turbine_power(s, spec) == 0.0);

    // cubic in wind at fixed tip-speed ratio
    spec.N_agg = 1;
    double prev = 0.0;
    for (double v = 3.0; v <= 12.0; v += 0.5) {
        TurbineState q;
        q.v_w = v;
        q.omega = 7.0 * v / spec.R_t;
        const double p = turbine_power(q, spec);
        CHECK(p > prev);
        prev = p;
    }
}

TEST_CASE("MPPT curve") {
    const auto spec = dfig5mw();
    const auto eq = mppt_equilibrium(spec, 8.0);
    TurbineState s{eq.omega, 8.0, 0.0, 0.0, 0.0};
    CHECK(mppt_power(eq.omega, spec) == Approx(turbine_power(s, spec)).epsilon(1e-9));
    CHECK(mppt_power(1e-6, spec) == Approx(0.0).margin(1e-12));
    CHECK(mppt_power(0.6, spec) / mppt_power(0.3, spec) == Approx(8.0).epsilon(1e-12));
}

TEST_CASE("rotor stepping") {
    const auto spec = dfig5mw();
    const auto eq = mppt_equilibrium(spec, 9.0);

    const auto same = step_rotor(eq, spec, eq.P_e, 0.01);
    CHECK(same.state.omega == Approx(eq.omega).epsilon(1e-12));

    const auto dec = step_rotor(eq, spec, eq.P_e + 1.0, 0.01);
    CHECK(dec.state.omega < eq.omega);

    CHECK_THROWS_AS(step_rotor(eq, spec, eq.P_e, 0.0), ParameterError);

    // energy bookkeeping: dE_k equals the integral of P_t - P_e, checked against a 1 ms run
    const auto eq11 = mppt_equilibrium(spec, 11.0);
    auto run = [&](double dt) {
        TurbineState s = eq11;
        double integral = 0.0;
        const int n = static_cast<int>(std::llround(3.0 / dt));
        for (int i = 0; i < n; ++i) {
            const double pt0 = turbine_power(s, spec);
            const auto r = step_rotor(s, spec, eq11.P_e + 0.4, dt);
            REQUIRE_FALSE(r.cutback);
            const double pt1 = turbine_power(r.state, spec);
            integral += 0.5 * dt * ((pt0 - r.P_e_applied) + (pt1 - r.P_e_applied));
            s = r.state;
        }
        return std::make_pair(s.E_k - eq11.E_k, integral);
    };
    const auto coarse = run(0.01);
    const auto fine = run(0.001);
    CHECK(coarse.first == Approx(fine.first).epsilon(1e-6));
    CHECK(fine.first == Approx(fine.second).epsilon(1e-4));

    // the floor holds with the cutback
    TurbineState s = eq;
    for (int i = 0; i < 3000; ++i) {
        const auto r = step_rotor(s, spec, spec.P_e_max, 0.01);
        CHECK(r.state.omega >= spec.omega_min() * (1 - 1e-12));
        s = r.state;
    }
    CHECK(s.omega == Approx(spec.omega_min()).epsilon(1e-9));
}

TEST_CASE("MPPT equilibrium attracts") {
    const auto spec = dfig5mw();
    const double v = 10.0;
    const double lopt = cp_optimum(0.0).lambda_opt;
    for (double w0 : {0.75, 1.1}) {
        TurbineState s{w0 * spec.omega_n(), v, 0.0, 0.0, 0.0};
        double prev = 1e9;
        bool monotone = true;
        for (int i = 0; i < 30000; ++i) {
            const auto r = step_rotor(s, spec, mppt_power(s.omega, spec), 0.01);
            s = r.state;
            const double gap = std::abs(spec.R_t * s.omega / v - lopt);
            if (i > 100 && gap > prev + 1e-12) monotone = false;
            prev = gap;
        }
        CHECK(monotone);
        CHECK(prev < 0.05);
    }
}

TEST_CASE("capability indices") {
    const auto spec = dfig5mw();
    TurbineState floor{spec.omega_min(), 9.0, 0.0, 1.0, 0.0};
    CHECK(capability_indices(floor, spec).dE_max == Approx(0.0).margin(1e-9));

    TurbineState full{spec.omega_n(), 9.0, 0.0, spec.P_e_max, 0.0};
    const auto c = capability_indices(full, spec);
    CHECK(c.dP_max == Approx(0.0).margin(1e-12));
    const double w = 12.1 * 2 * M_PI / 60;
    CHECK(c.dE_max == Approx(0.5 * 16801544.0 * w * w * (1 - 0.49) / 1e6).epsilon(1e-12));
}

TEST_CASE("turbine parameter validation") {
    auto s = dfig5mw();
    CHECK_NOTHROW(s.validate());
    s.omega_min_pu = 1.2;
    CHECK_THROWS(s.validate());
    s = dfig5mw();
    s.N_agg = 0;
    CHECK_THROWS(s.validate());
    s = dfig5mw();
    s.P_e_min = 6.0;
    CHECK_THROWS(s.validate());
}
