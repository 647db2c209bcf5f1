#pragma once

#include "nadir/grid.hpp"
#include "nadir/turbine.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nadir {

// Gw(s) = -Gg(s) + K_w, realised with a copy of the aggregate governor state space.
struct AapcController {
    StateSpace mirror;
    double K_w = 0.0;
    double alpha = 1.0;
    double H = 0.0, D = 0.0, K_g = 0.0;
    double b = 0.0;  // closed-loop rate (D + K_g)/(2 alpha H)
    double c = 1.0;  // allocation factor
    Eigen::VectorXd x;

    double a(double P_d) const { return -alpha * P_d / (D + K_g); }
    // analytic closed-loop frequency a(1 - exp(-b t))
    double target_response(double P_d, double t) const;
};

AapcController synthesize(const GridParameters& grid, const StateSpace& gov, double alpha);

struct AapcCommand {
    double total = 0.0;          // c (mirror + gain), pu on S_b
    double mirror_branch = 0.0;  // -(C x + D df), before allocation
    double gain_branch = 0.0;    // K_w df, before allocation
};

AapcCommand aapc_output(const AapcController& ctrl, const Eigen::VectorXd& x, double df);
// One RK4 step of the mirror with df held over the step, then the command at the new state.
AapcCommand controller_step(AapcController& ctrl, double df_local, double dt);

std::vector<double> allocate(const std::vector<Capability>& caps);
std::vector<double> allocate_uniform(std::size_t n);

enum class ExitTrigger { PowerCross, Horizon, SpeedFloor };
std::string to_string(ExitTrigger t);

struct ExitState {
    ExitTrigger trigger = ExitTrigger::Horizon;
    double t_e = 0.0;
    double gamma = 1.0;
    bool clamped = false;
};

struct ExitCheck {
    double P_e = 0.0;      // power applied under the support law, MW
    double P_mppt = 0.0;   // MW
    double omega = 0.0;    // rad/s
    double omega_min = 0.0;
    double t = 0.0;
    double t_end = 0.0;    // end of the support window
    bool armed = false;    // P_e has been above the MPPT curve since activation
};

std::optional<ExitState> check_exit(const ExitCheck& in);
// Fills gamma for an exit that fired with the given powers at t_e.
void exit_gamma(ExitState& e, double P_e_te, double P_t_te, double P_mppt_te);
double exit_power(const ExitState& e, double P_t, double P_mppt);

struct BaselineVic {
    double k_f = 20.0;
    double k_in = 10.0;
    double tau = 0.1;  // derivative filter
    double xf = 0.0;   // filter state
    double last = 0.0; // previous input sample

    double derivative(double df) const { return (df - xf) / tau; }
    double command(double df) const { return -k_f * df - k_in * derivative(df); }
};

double classic_vic_step(BaselineVic& vic, double df_local, double dt);

}  // namespace nadir
