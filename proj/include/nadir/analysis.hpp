#pragma once

#include "nadir/grid.hpp"
#include "nadir/trajopt.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nadir {

// Uniform or non-uniform trace in per unit on S_b. dpm may be empty when the source lacks it.
struct Trace {
    std::vector<double> t, df, dpm, dpe;
};

struct EnergyTerms {
    double S_df = 0.0;  // trapezoid of df
    double E_m = 0.0;   // trapezoid of dPm
    double residual = 0.0;
};

// 2H df(tf) + D S - (E_m - P_d T), with df(t0) taken out so traces need not start at rest.
EnergyTerms energy_identity(const Trace& tr, const GridParameters& grid, double P_d);

struct EnvelopeTerms {
    double mu = 0.0;
    double X = 0.0, Y = 0.0;
};

// Scale factor between the envelope nadir and a higher one sharing its shape.
EnvelopeTerms envelope_terms(double H, double D, double t_f, double t_c, double eta);
double envelope_mu(double H, double D, double t_f, double t_c, double eta);

struct AnalysisReport {
    double S_df = 0.0;
    double E_m = 0.0;
    double energy_residual = 0.0;       // trapezoid at trace resolution
    double quadrature_residual = 0.0;   // Gauss quadrature, trajectories only
    double nadir = 0.0;
    double terminal = 0.0;
    double terminal_gap = 0.0;          // |df(tf) - nadir|
    bool nadir_below_terminal = false;
    // envelope of a trace that dips below its terminal value
    double t_x = 0.0, t_c = 0.0, eta = 0.0;
    std::optional<double> mu;
    // cross-check against the min-integral program
    std::optional<double> min_integral_nadir;
    double min_integral_rel = 0.0;
    std::vector<std::string> violations;
    bool passed() const { return violations.empty(); }
};

AnalysisReport trace_checks(const Trace& tr, const GridParameters& grid, double P_d);
// Solution plus the problem it came from; the min-integral cross-check needs the problem.
AnalysisReport theorem_checks(const TrajectorySolution& s, const TrajOptProblem* p = nullptr);

Trace to_trace(const TrajectorySolution& s);

}  // namespace nadir
