#pragma once

#include <string>

namespace nadir {

// Powers in MW, inertia in kg m^2. Unit values are for one machine; the fleet is N_agg of them.
struct TurbineSpec {
    double S_n = 5.556;        // MVA
    double P_n = 5.0;          // MW
    double P_e_max = 5.0;      // MW
    double P_e_min = 0.0;      // MW
    double omega_n_rpm = 12.1;
    double omega_min_pu = 0.7;
    double J = 16801544.0;
    double R_t = 63.0;         // m
    double rho = 1.225;        // kg/m^3
    int N_agg = 1;

    void validate() const;
    double omega_n() const;    // rad/s
    double omega_min() const;  // rad/s
    double inertia() const { return J * N_agg; }
    bool operator==(const TurbineSpec&) const = default;
};

TurbineSpec dfig5mw();

struct TurbineState {
    double omega = 0.0;  // rad/s
    double v_w = 0.0;    // m/s
    double beta = 0.0;   // deg
    double P_e = 0.0;    // MW, fleet total
    double E_k = 0.0;    // MJ, fleet total
};

struct CpEval {
    double cp = 0.0;
    bool clamped = false;
};

CpEval evaluate_cp(double lambda, double beta);
double power_coefficient(double lambda, double beta);

struct CpOptimum {
    double lambda_opt = 0.0;
    double cp_max = 0.0;
};
CpOptimum cp_optimum(double beta = 0.0);

double turbine_power(const TurbineState& s, const TurbineSpec& spec);  // MW
double k_opt(const TurbineSpec& spec, double beta = 0.0);               // W s^3 / rad^3
double mppt_power(double omega, const TurbineSpec& spec, double beta = 0.0);  // MW
double kinetic_energy(double omega, const TurbineSpec& spec);           // MJ

// Rotor speed where the MPPT curve meets the turbine power for this wind, with P_e = P_MPPT.
TurbineState mppt_equilibrium(const TurbineSpec& spec, double v_w, double beta = 0.0);

struct RotorStep {
    TurbineState state;
    double P_e_applied = 0.0;  // MW at the end of the step
    bool clamped = false;
    bool cutback = false;
};

RotorStep step_rotor(const TurbineState& s, const TurbineSpec& spec, double P_e_command, double dt);

struct Capability {
    double dE_max = 0.0;  // MJ
    double dP_max = 0.0;  // MW
};
Capability capability_indices(const TurbineState& s, const TurbineSpec& spec);

}  // namespace nadir
