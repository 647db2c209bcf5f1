#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace nadir {

struct GridParameters {
    double H = 4.2;      // s, system base
    double D = 1.0;      // pu power / pu frequency
    double f_B = 50.0;   // Hz
    double S_b = 200.0;  // MVA
    double P_L = 0.75;   // pu on S_b

    void validate() const;
    bool operator==(const GridParameters&) const = default;
};

struct ReheatSteam {
    double K_m = 0.85;
    double F_H = 0.3;
    double T_R = 8.0;
    double R = 0.05;
    bool operator==(const ReheatSteam&) const = default;
};

// Transfer function Gg(s) from frequency deviation to mechanical power deviation,
// coefficients in descending powers of s, per unit on the unit's own rating.
struct GovernorSpec {
    std::string name;
    double rating_mva = 0.0;
    double R = 0.05;
    std::vector<double> num;
    std::vector<double> den;
    std::optional<ReheatSteam> reheat;

    void validate() const;
    double dc_gain() const;  // Gg(0)
    bool operator==(const GovernorSpec&) const = default;
};

struct StateSpace {
    Eigen::MatrixXd A, B, C, D;

    int order() const { return static_cast<int>(A.rows()); }
    void validate() const;
    // y for constant input u after all transients, -C A^-1 B + D
    Eigen::MatrixXd dc_gain() const;
};

GovernorSpec reheat_governor(const ReheatSteam& p);
// -(1/R)(1 + T_R s)/(1 + (r_t/R) T_R s)
GovernorSpec hydro_governor(double R, double r_t, double T_R);
// -(K_m/R)/(1 + T_g s)
GovernorSpec gas_governor(double K_m, double R, double T_g);

double governor_dc_gain_total(const std::vector<GovernorSpec>& governors, double S_b);
double steady_state_deviation(double P_d, const GridParameters& grid, double K_g);

StateSpace tf_to_statespace(const std::vector<double>& num, const std::vector<double>& den);
StateSpace tf_to_statespace(const GovernorSpec& g);
// Same realization with output scaled by rating/S_b, i.e. per unit on the system base.
StateSpace governor_realization(const GovernorSpec& g, double S_b);
StateSpace aggregate_governors(const std::vector<StateSpace>& parts);

// Polynomial roots of descending-power coefficients (companion eigenvalues).
Eigen::VectorXcd poly_roots(const std::vector<double>& coeffs);

// Step response y(t) of a SISO realization, sampled with RK4 at step h.
std::vector<double> step_response(const StateSpace& ss, double t_end, double h);

}  // namespace nadir
