#include "nadir/analysis.hpp"

#include "nadir/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nadir {

namespace {

double trapz(const std::vector<double>& t, const std::vector<double>& y) {
    double s = 0.0;
    for (size_t i = 1; i < t.size(); ++i) s += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
    return s;
}

}  // namespace

EnergyTerms energy_identity(const Trace& tr, const GridParameters& grid, double P_d) {
    if (tr.t.empty()) throw ParameterError("energy identity: empty trace");
    if (tr.dpm.empty()) throw ParameterError("energy identity: trace has no dpm column");
    if (tr.df.size() != tr.t.size() || tr.dpm.size() != tr.t.size())
        throw ParameterError("energy identity: column lengths differ");
    EnergyTerms e;
    e.S_df = trapz(tr.t, tr.df);
    e.E_m = trapz(tr.t, tr.dpm);
    const double T = tr.t.back() - tr.t.front();
    e.residual = 2.0 * grid.H * (tr.df.back() - tr.df.front()) + grid.D * e.S_df - (e.E_m - P_d * T);
    return e;
}

EnvelopeTerms envelope_terms(double H, double D, double t_f, double t_c, double eta) {
    if (!(eta > 0.0 && eta < 1.0)) throw ParameterError("envelope: eta must lie in (0, 1)");
    if (D == 0.0) throw ParameterError("envelope: D = 0 is outside the model (the factor is scaled by D)");
    if (!(H > 0.0) || D < 0.0) throw ParameterError("envelope: H and D must be positive");
    if (!(t_c >= 0.0 && t_c < t_f)) throw ParameterError("envelope: need 0 <= t_c < t_f");
    EnvelopeTerms r;
    // the radicand below is (2H + D t_f)^2 - X; the cross term is 4 H D t_f
    const double rad = 4 * H * H + D * D * t_f * t_f + 4 * H * D * t_f - eta * D * D * t_f * t_f +
                       eta * D * D * t_c * t_c - 4 * eta * H * D * t_f + 4 * eta * H * D * t_c;
    r.mu = (2 * H + D * t_f - std::sqrt(rad)) / (D * (t_f - t_c));
    r.X = eta * D * D * (t_f * t_f - t_c * t_c) + 4 * eta * H * D * (t_f - t_c);
    r.Y = (1 - eta) * D * D * (t_f * t_f - t_c * t_c) + 4 * (1 - eta) * D * H * (t_f - t_c);
    if (!(r.X > 0.0) || !(r.Y > 0.0)) throw SolverError("envelope: X or Y not positive");
    return r;
}

double envelope_mu(double H, double D, double t_f, double t_c, double eta) {
    return envelope_terms(H, D, t_f, t_c, eta).mu;
}

Trace to_trace(const TrajectorySolution& s) {
    return Trace{s.t, s.df, s.dpm, s.dpe};
}

AnalysisReport trace_checks(const Trace& tr, const GridParameters& grid, double P_d) {
    AnalysisReport r;
    if (tr.t.empty()) return r;
    const auto e = energy_identity(tr, grid, P_d);
    r.S_df = e.S_df;
    r.E_m = e.E_m;
    r.energy_residual = e.residual;
    size_t imin = 0;
    for (size_t i = 0; i < tr.df.size(); ++i)
        if (tr.df[i] < tr.df[imin]) imin = i;
    r.nadir = std::min(0.0, tr.df[imin]);
    r.terminal = tr.df.back();
    r.terminal_gap = std::abs(r.terminal - r.nadir);
    r.nadir_below_terminal = r.nadir < r.terminal - 1e-12;
    if (r.nadir_below_terminal && P_d > 0.0) {
        const double t_f = tr.t.back() - tr.t.front();
        r.t_x = std::min(t_f, -r.nadir * 2.0 * grid.H / P_d);
        r.t_c = t_f - r.t_x;
        const double C = r.terminal + grid.D / (2 * grid.H) * r.S_df;
        const double Cbar = r.nadir + grid.D / (2 * grid.H) * 0.5 * (t_f + r.t_c) * r.nadir;
        if (Cbar != 0.0) r.eta = C / Cbar;
        if (r.eta > 0.0 && r.eta < 1.0 && grid.D > 0.0 && r.t_c < t_f) r.mu = envelope_mu(grid.H, grid.D, t_f, r.t_c, r.eta);
    }
    return r;
}

AnalysisReport theorem_checks(const TrajectorySolution& s, const TrajOptProblem* p) {
    GridParameters g;
    g.H = s.H > 0 ? s.H : g.H;
    g.D = s.D;
    g.f_B = s.f_B;
    AnalysisReport r;
    if (!s.t.empty()) {
        if (s.dpm.empty()) {
            r.violations.push_back("trace has no dpm column");
            return r;
        }
        r = trace_checks(to_trace(s), g, s.P_d);
    }
    r.quadrature_residual = s.energy_residual;
    if (s.grid.K > 0) {
        r.nadir = s.nadir;
        r.terminal = s.df_terminal;
        r.terminal_gap = std::abs(s.df_terminal - s.nadir);
        r.nadir_below_terminal = s.nadir < s.df_terminal - 1e-12;
    }
    auto flag = [&](bool bad, const std::string& what, double v) {
        if (!bad) return;
        std::ostringstream os;
        os << what << " (" << v << ")";
        r.violations.push_back(os.str());
    };
    if (s.zero_disturbance) return r;
    const double ref = std::max(std::abs(s.nadir), 1e-300);
    const double id = s.grid.K > 0 ? std::abs(r.quadrature_residual) : std::abs(r.energy_residual);
    flag(id > 1e-6, "energy identity residual above 1e-6", id);
    flag(r.terminal_gap / ref > 0.01, "terminal frequency more than 1% away from the nadir", r.terminal_gap / ref);
    flag(std::abs(s.de_terminal) > 1e-8, "net released energy nonzero", s.de_terminal);
    if (p && s.grid.K > 0) {
        const auto mi = min_integral_variant(*p, s.grid);
        r.min_integral_nadir = mi.nadir;
        r.min_integral_rel = std::abs(mi.nadir - s.nadir) / ref;
        flag(r.min_integral_rel > 0.005, "min-integral nadir differs by more than 0.5%", r.min_integral_rel);
    }
    return r;
}

}  // namespace nadir
