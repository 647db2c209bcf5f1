#include "nadir/turbine.hpp"

#include "nadir/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nadir {

void TurbineSpec::validate() const {
    if (!(P_e_min < P_e_max)) throw ParameterError("turbine: P_e_min must be below P_e_max");
    if (!(omega_min_pu > 0 && omega_min_pu < 1)) throw ParameterError("turbine: omega_min_pu must lie in (0,1)");
    if (!(J > 0)) throw ParameterError("turbine: J must be positive");
    if (!(R_t > 0)) throw ParameterError("turbine: R_t must be positive");
    if (!(rho > 0)) throw ParameterError("turbine: rho must be positive");
    if (!(omega_n_rpm > 0)) throw ParameterError("turbine: rated speed must be positive");
    if (N_agg < 1) throw ParameterError("turbine: N_agg must be at least 1");
}

double TurbineSpec::omega_n() const { return omega_n_rpm * 2.0 * std::numbers::pi / 60.0; }
double TurbineSpec::omega_min() const { return omega_min_pu * omega_n(); }

TurbineSpec dfig5mw() { return TurbineSpec{}; }

CpEval evaluate_cp(double lambda, double beta) {
    if (!(lambda > 0)) throw ParameterError("power coefficient: tip-speed ratio must be positive");
    if (beta < 0) throw ParameterError("power coefficient: pitch must be non-negative");
    const double inv = 1.0 / (lambda + 0.08 * beta) - 0.035 / (beta * beta * beta + 1.0);
    if (!(inv > 0)) throw ParameterError("power coefficient: outside the model domain");
    const double cp = 0.22 * (116.0 * inv - 0.4 * beta - 5.0) * std::exp(-12.5 * inv);
    if (cp < 0) return {0.0, true};
    return {cp, false};
}

double power_coefficient(double lambda, double beta) { return evaluate_cp(lambda, beta).cp; }

CpOptimum cp_optimum(double beta) {
    // golden section on a unimodal curve
    auto f = [&](double l) {
        const double inv = 1.0 / (l + 0.08 * beta) - 0.035 / (beta * beta * beta + 1.0);
        if (inv <= 0) return 0.0;
        return power_coefficient(l, beta);
    };
    double a = 1.0, b = 20.0;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > 1e-12) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - g * (b - a); fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + g * (b - a); fd = f(d);
        }
    }
    const double l = 0.5 * (a + b);
    return {l, f(l)};
}

double turbine_power(const TurbineState& s, const TurbineSpec& spec) {
    if (s.v_w < 0.1) return 0.0;
    if (!(s.omega > 0)) throw ParameterError("turbine power: rotor speed must be positive");
    const double lambda = spec.R_t * s.omega / s.v_w;
    const double cp = power_coefficient(lambda, s.beta);
    const double area = std::numbers::pi * spec.R_t * spec.R_t;
    return spec.N_agg * 0.5 * spec.rho * area * cp * s.v_w * s.v_w * s.v_w * 1e-6;
}

double k_opt(const TurbineSpec& spec, double beta) {
    const auto opt = cp_optimum(beta);
    return spec.N_agg * 0.5 * spec.rho * std::numbers::pi * std::pow(spec.R_t, 5) * opt.cp_max /
           std::pow(opt.lambda_opt, 3);
}

double mppt_power(double omega, const TurbineSpec& spec, double beta) {
    const double p = k_opt(spec, beta) * omega * omega * omega * 1e-6;
    return std::clamp(p, spec.P_e_min * spec.N_agg, spec.P_e_max * spec.N_agg);
}

double kinetic_energy(double omega, const TurbineSpec& spec) { return 0.5 * spec.inertia() * omega * omega * 1e-6; }

TurbineState mppt_equilibrium(const TurbineSpec& spec, double v_w, double beta) {
    const auto opt = cp_optimum(beta);
    TurbineState s;
    s.v_w = v_w;
    s.beta = beta;
    s.omega = opt.lambda_opt * v_w / spec.R_t;
    s.P_e = mppt_power(s.omega, spec, beta);
    s.E_k = kinetic_energy(s.omega, spec);
    return s;
}

namespace {

double rk4_omega(double w, double dt, const TurbineState& s, const TurbineSpec& spec, double P_e) {
    const double Jt = spec.inertia();
    auto f = [&](double om) {
        TurbineState t = s;
        t.omega = om;
        return (turbine_power(t, spec) - P_e) * 1e6 / (Jt * om);
    };
    const double k1 = f(w), k2 = f(w + 0.5 * dt * k1), k3 = f(w + 0.5 * dt * k2), k4 = f(w + dt * k3);
    return w + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
}

}  // namespace

RotorStep step_rotor(const TurbineState& s, const TurbineSpec& spec, double P_e_command, double dt) {
    if (!(dt > 0)) throw ParameterError("step_rotor: dt must be positive");
    if (!std::isfinite(P_e_command)) throw ParameterError("step_rotor: non-finite command");
    RotorStep out;
    const double lo = spec.P_e_min * spec.N_agg, hi = spec.P_e_max * spec.N_agg;
    double P_e = std::clamp(P_e_command, lo, hi);
    out.clamped = P_e != P_e_command;
    const double floor = spec.omega_min();
    const double P_t0 = turbine_power(s, spec);

    out.state = s;
    if (s.omega <= floor && P_e > P_t0) {
        // already resting on the floor: hold speed
        out.cutback = true;
        out.P_e_applied = P_t0;
        out.state.P_e = P_t0;
        return out;
    }
    double w1 = rk4_omega(s.omega, dt, s, spec, P_e);
    if (w1 >= floor) {
        out.state.omega = w1;
        out.P_e_applied = P_e;
    } else {
        double a = 0.0, b = dt;
        for (int i = 0; i < 60 && b - a > 1e-9 * dt; ++i) {
            const double m = 0.5 * (a + b);
            if (rk4_omega(s.omega, m, s, spec, P_e) >= floor) a = m; else b = m;
        }
        out.state.omega = rk4_omega(s.omega, a, s, spec, P_e);
        out.cutback = true;
        out.P_e_applied = turbine_power(out.state, spec);
    }
    out.state.P_e = out.P_e_applied;
    out.state.E_k = kinetic_energy(out.state.omega, spec);
    return out;
}

Capability capability_indices(const TurbineState& s, const TurbineSpec& spec) {
    Capability c;
    c.dE_max = std::max(0.0, kinetic_energy(s.omega, spec) - kinetic_energy(spec.omega_min(), spec));
    c.dP_max = std::max(0.0, spec.P_e_max * spec.N_agg - s.P_e);
    return c;
}

}  // namespace nadir
