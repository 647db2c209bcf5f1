#pragma once

#include "nadir/collocation.hpp"
#include "nadir/grid.hpp"
#include "nadir/lp.hpp"

#include <string>
#include <vector>

namespace nadir {

// x = [df, x_g, dE];  xdot = A x + B1 dPe + B2 P_d
struct TrajOptProblem {
    GridParameters grid;
    StateSpace gov;  // aggregate governor, per unit on S_b
    double K_g = 0.0;
    Eigen::MatrixXd A;
    Eigen::VectorXd B1, B2;
    double P_d = 0.0;
    double t0 = 0.0;
    double tf = 30.0;

    int n_states() const { return static_cast<int>(A.rows()); }
    int n_gov() const { return gov.order(); }
};

TrajOptProblem build_problem(const GridParameters& grid, const StateSpace& gov, double P_d, double t_f = 30.0);

struct TranscribeOptions {
    // Also require the quadrature terminal frequency to sit above the nadir variable.
    // Without it the interpolant beyond the last node is unconstrained and the LP is unbounded for larger K.
    bool terminal_nadir = true;
    // Objective: false maximises the nadir variable.
    bool min_integral = false;
    double energy_target = 0.0;  // lower bound on governor energy when min_integral is set
};

struct Transcription {
    LinearProgram lp;
    CollocationGrid grid;
    int n = 0;
    int n_collocation_eq = 0, n_initial_eq = 0, n_terminal_eq = 0;
    int n_node_ineq = 0, n_terminal_ineq = 0, n_energy_ineq = 0;

    int idx_x(int point, int state) const { return point * n + state; }
    int idx_u(int k) const { return (grid.K + 1) * n + k; }
    int idx_z() const { return (grid.K + 1) * n + grid.K; }
};

Transcription transcribe(const TrajOptProblem& p, const CollocationGrid& g, const TranscribeOptions& opt = {});

struct TrajectorySolution {
    std::string method;
    double dt = 0.01;
    std::vector<double> t, df, dpe, de, dpm;  // uniform traces, per unit

    // collocation data (empty for the Euler oracle)
    CollocationGrid grid;
    Eigen::MatrixXd X;  // (K+1) x n
    Eigen::VectorXd U;  // K

    double nadir = 0.0;        // pu
    double f_B = 50.0;
    double df_ss = 0.0;
    double alpha = 1.0;
    bool zero_disturbance = false;
    double df_terminal = 0.0;   // quadrature terminal frequency
    double de_terminal = 0.0;
    double S_df = 0.0;          // quadrature of df over the horizon
    double E_m = 0.0;           // quadrature of dPm over the horizon
    double energy_residual = 0.0;  // 2H df(tf) + D S - (E_m - P_d T), same quadrature
    double sample_nadir = 0.0;  // min over node samples and terminal value
    double max_dip = 0.0;       // interpolated trace below the nadir, relative, whole horizon
    double max_dev_final80 = 0.0;  // |df - nadir|/|nadir| over the final 80% of the horizon
    double P_d = 0.0, H = 0.0, D = 0.0, tf = 30.0, t0 = 0.0;

    int lp_iterations = 0;
    int lp_variables = 0, lp_equalities = 0, lp_inequalities = 0;
    double lp_primal_residual = 0.0, lp_dual_residual = 0.0, lp_complementarity = 0.0;
    double solve_seconds = 0.0;

    double nadir_hz() const { return nadir * f_B; }
};

LpSolution solve_transcription(const Transcription& tr);
TrajectorySolution extract_solution(const LpSolution& s, const Transcription& tr, const TrajOptProblem& p, double dt = 0.01);

// build, transcribe, solve and extract; throws SolverError when the LP is not optimal
TrajectorySolution solve_trajectory(const TrajOptProblem& p, int K, const TranscribeOptions& opt = {});

TrajectorySolution euler_oracle(const TrajOptProblem& p, int N);

// Minimises the frequency integral with the governor energy held at least at its maximum
// (taken from the max-nadir solution unless energy_target is given) and every node above the terminal value.
TrajectorySolution min_integral_variant(const TrajOptProblem& p, const CollocationGrid& g, double energy_target);
TrajectorySolution min_integral_variant(const TrajOptProblem& p, const CollocationGrid& g);

// Natural response with dPe = 0 (RK4), used to compare against supported trajectories.
std::vector<double> natural_response(const TrajOptProblem& p, double dt, double t_end);

}  // namespace nadir
