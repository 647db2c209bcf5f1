#include "nadir/aapc.hpp"

#include "nadir/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nadir {

double AapcController::target_response(double P_d, double t) const { return a(P_d) * (1.0 - std::exp(-b * t)); }

AapcController synthesize(const GridParameters& grid, const StateSpace& gov, double alpha) {
    if (!(alpha >= 1.0)) throw ParameterError("synthesize: alpha must be at least 1");
    gov.validate();
    AapcController c;
    c.mirror = gov;
    c.alpha = alpha;
    c.H = grid.H;
    c.D = grid.D;
    c.K_g = gov.order() > 0 || gov.D.size() ? -gov.dc_gain()(0, 0) : 0.0;
    if (!(c.D + c.K_g > 0)) throw ParameterError("synthesize: D + K_g must be positive");
    c.K_w = c.D - (c.D + c.K_g) / alpha;
    c.b = (c.D + c.K_g) / (2.0 * alpha * c.H);
    c.x = Eigen::VectorXd::Zero(gov.order());
    return c;
}

AapcCommand aapc_output(const AapcController& ctrl, const Eigen::VectorXd& x, double df) {
    AapcCommand out;
    double y = ctrl.mirror.D(0, 0) * df;
    if (ctrl.mirror.order() > 0) y += ctrl.mirror.C.row(0).dot(x);
    out.mirror_branch = -y;
    out.gain_branch = ctrl.K_w * df;
    out.total = ctrl.c * (out.mirror_branch + out.gain_branch);
    return out;
}

AapcCommand controller_step(AapcController& ctrl, double df_local, double dt) {
    if (!(dt > 0)) throw ParameterError("controller_step: dt must be positive");
    if (ctrl.mirror.order() > 0) {
        const auto& A = ctrl.mirror.A;
        const Eigen::VectorXd Bu = ctrl.mirror.B.col(0) * df_local;
        auto f = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd { return A * z + Bu; };
        Eigen::VectorXd k1 = f(ctrl.x), k2 = f(ctrl.x + 0.5 * dt * k1), k3 = f(ctrl.x + 0.5 * dt * k2),
                        k4 = f(ctrl.x + dt * k3);
        ctrl.x += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return aapc_output(ctrl, ctrl.x, df_local);
}

std::vector<double> allocate(const std::vector<Capability>& caps) {
    if (caps.empty()) throw ParameterError("allocate: empty fleet");
    double sE = 0.0, sP = 0.0;
    for (const auto& c : caps) {
        if (c.dE_max < 0 || c.dP_max < 0) throw ParameterError("allocate: negative capability");
        sE += c.dE_max;
        sP += c.dP_max;
    }
    if (!(sE > 0) || !(sP > 0)) throw ParameterError("allocate: fleet has no support capability");
    std::vector<double> c(caps.size());
    for (size_t j = 0; j < caps.size(); ++j) c[j] = std::min(caps[j].dE_max / sE, caps[j].dP_max / sP);
    double s = 0.0;
    for (double v : c) s += v;
    if (!(s > 0)) throw ParameterError("allocate: fleet has no support capability");
    for (double& v : c) v /= s;
    // make the sum exactly one: put the rounding remainder on the largest share
    const auto big = std::max_element(c.begin(), c.end()) - c.begin();
    double rest = 0.0;
    for (size_t j = 0; j < c.size(); ++j)
        if (static_cast<long>(j) != big) rest += c[j];
    c[big] = 1.0 - rest;
    return c;
}

std::vector<double> allocate_uniform(std::size_t n) {
    if (n == 0) throw ParameterError("allocate: empty fleet");
    std::vector<double> c(n, 1.0 / static_cast<double>(n));
    double rest = 0.0;
    for (size_t j = 1; j < n; ++j) rest += c[j];
    c[0] = 1.0 - rest;
    return c;
}

std::string to_string(ExitTrigger t) {
    switch (t) {
        case ExitTrigger::PowerCross: return "power_cross";
        case ExitTrigger::Horizon: return "horizon";
        case ExitTrigger::SpeedFloor: return "speed_floor";
    }
    return "unknown";
}

std::optional<ExitState> check_exit(const ExitCheck& in) {
    ExitState e;
    e.t_e = in.t;
    if (in.armed && in.P_e <= in.P_mppt) {
        e.trigger = ExitTrigger::PowerCross;
        return e;
    }
    if (in.omega <= in.omega_min) {
        e.trigger = ExitTrigger::SpeedFloor;
        return e;
    }
    if (in.t >= in.t_end) {
        e.trigger = ExitTrigger::Horizon;
        return e;
    }
    return std::nullopt;
}

void exit_gamma(ExitState& e, double P_e_te, double P_t_te, double P_mppt_te) {
    const double den = P_mppt_te - P_t_te;
    if (std::abs(den) < 1e-9) {
        e.gamma = 1.0;
        e.clamped = false;
        return;
    }
    const double g = (P_e_te - P_t_te) / den;
    e.gamma = std::clamp(g, 0.0, 1.0);
    e.clamped = g != e.gamma;
}

double exit_power(const ExitState& e, double P_t, double P_mppt) { return (1.0 - e.gamma) * P_t + e.gamma * P_mppt; }

double classic_vic_step(BaselineVic& vic, double df_local, double dt) {
    if (!(dt > 0)) throw ParameterError("classic_vic_step: dt must be positive");
    // exact for an input that moves linearly between samples
    const double e = std::exp(-dt / vic.tau);
    const double slope = (df_local - vic.last) / dt;
    vic.xf = e * vic.xf + (1 - e) * vic.last + slope * (dt - vic.tau * (1 - e));
    vic.last = df_local;
    return vic.command(df_local);
}

}  // namespace nadir
