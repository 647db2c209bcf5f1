#include "nadir/report.hpp"

#include "nadir/error.hpp"

#include <cstdio>
#include <fstream>

namespace nadir {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParameterError("cannot write " + path);
    return f;
}

json matrix(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (int j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

void write_trajectory_csv(const std::string& path, const TrajectorySolution& s) {
    auto f = open_out(path);
    f << "t_s,df_hz,df_pu,dpe_pu,de_pus,dpm_pu\n";
    for (size_t i = 0; i < s.t.size(); ++i)
        f << fmt(s.t[i]) << ',' << fmt(s.df[i] * s.f_B) << ',' << fmt(s.df[i]) << ',' << fmt(s.dpe[i]) << ','
          << fmt(s.de[i]) << ',' << fmt(s.dpm[i]) << '\n';
}

void write_trace_csv(const std::string& path, const SimResult& r) {
    auto f = open_out(path);
    f << "t_s,df_hz,df_pu,dpm_pu,dpe_pu,pd_pu";
    for (const auto& t : r.turbines) f << ',' << t.name << "_pe_mw," << t.name << "_omega_pu," << t.name << "_de_pus";
    f << '\n';
    for (size_t i = 0; i < r.t.size(); ++i) {
        f << fmt(r.t[i]) << ',' << fmt(r.df[i] * r.f_B) << ',' << fmt(r.df[i]) << ',' << fmt(r.dpm[i]) << ','
          << fmt(r.dpe[i]) << ',' << fmt(r.pd[i]);
        for (const auto& t : r.turbines) f << ',' << fmt(t.P_e[i]) << ',' << fmt(t.omega[i]) << ',' << fmt(t.dE[i]);
        f << '\n';
    }
}

void write_sweep_csv(const std::string& path, const SweepResult& s, double f_B) {
    auto f = open_out(path);
    f << "P_d_pu,nadir_pu,nadir_hz,nadir_ref_pu,e_r_pct,limits_hit\n";
    for (const auto& r : s.rows)
        f << fmt(r.P_d) << ',' << fmt(r.nadir) << ',' << fmt(r.nadir * f_B) << ',' << fmt(r.nadir_ref) << ','
          << fmt(r.e_r) << ',' << (r.limits_hit ? 1 : 0) << '\n';
}

json to_json(const TrajectorySolution& s) {
    return json{{"method", s.method},
                {"nadir_pu", s.nadir},
                {"nadir_hz", s.nadir_hz()},
                {"df_ss_pu", s.df_ss},
                {"alpha", s.alpha},
                {"zero_disturbance", s.zero_disturbance},
                {"P_d_pu", s.P_d},
                {"t_f", s.tf},
                {"K", s.grid.K},
                {"diagnostics",
                 {{"df_terminal_pu", s.df_terminal},
                  {"de_terminal_pus", s.de_terminal},
                  {"S_df_pus", s.S_df},
                  {"E_m_pus", s.E_m},
                  {"energy_residual", s.energy_residual},
                  {"sample_nadir_pu", s.sample_nadir},
                  {"max_dip_rel", s.max_dip},
                  {"max_dev_final80_rel", s.max_dev_final80},
                  {"lp_iterations", s.lp_iterations},
                  {"lp_variables", s.lp_variables},
                  {"lp_equalities", s.lp_equalities},
                  {"lp_inequalities", s.lp_inequalities},
                  {"lp_primal_residual", s.lp_primal_residual},
                  {"lp_dual_residual", s.lp_dual_residual},
                  {"lp_complementarity", s.lp_complementarity}}}};
}

json to_json(const MetricsRecord& m) {
    return json{{"nadir_pu", m.nadir},
                {"nadir_hz", m.nadir_hz},
                {"t_nadir_s", m.t_nadir},
                {"primary_nadir_pu", m.primary_nadir},
                {"secondary_nadir_pu", m.secondary_nadir},
                {"secondary_dip", m.secondary_dip},
                {"max_rocof_pu_s", m.max_rocof},
                {"initial_rocof_pu_s", m.initial_rocof},
                {"terminal_deviation_pu", m.terminal_deviation},
                {"nadir_ref_pu", m.nadir_ref},
                {"e_r_pct", m.e_r},
                {"degenerate", m.degenerate}};
}

json to_json(const AnalysisReport& a) {
    json j{{"S_df_pus", a.S_df},
           {"E_m_pus", a.E_m},
           {"energy_residual", a.energy_residual},
           {"quadrature_residual", a.quadrature_residual},
           {"nadir_pu", a.nadir},
           {"terminal_pu", a.terminal},
           {"terminal_gap_pu", a.terminal_gap},
           {"nadir_below_terminal", a.nadir_below_terminal},
           {"envelope", {{"t_x", a.t_x}, {"t_c", a.t_c}, {"eta", a.eta}}},
           {"violations", a.violations},
           {"passed", a.passed()}};
    if (a.mu) j["envelope"]["mu"] = *a.mu;
    if (a.min_integral_nadir) {
        j["min_integral_nadir_pu"] = *a.min_integral_nadir;
        j["min_integral_rel"] = a.min_integral_rel;
    }
    return j;
}

json controller_json(const ControllerSetup& c, const Scenario& s) {
    json f = json::array();
    for (size_t j = 0; j < s.turbines.size(); ++j)
        f.push_back({{"turbine", s.turbines[j].name},
                     {"c", j < c.factors.size() ? c.factors[j] : 0.0},
                     {"dE_max_mj", j < c.capabilities.size() ? c.capabilities[j].dE_max : 0.0},
                     {"dP_max_mw", j < c.capabilities.size() ? c.capabilities[j].dP_max : 0.0}});
    double sum = 0.0;
    for (double v : c.factors) sum += v;
    const auto& m = c.aggregate.mirror;
    return json{{"K_w", c.aggregate.K_w},
                {"alpha", c.alpha},
                {"b_per_s", c.aggregate.b},
                {"reference_P_d_pu", c.reference_P_d},
                {"reference_nadir_pu", c.reference_nadir},
                {"allocation", to_string(s.controllers.allocation)},
                {"factors", f},
                {"factor_sum", sum},
                {"mirror", {{"A", matrix(m.A)}, {"B", matrix(m.B)}, {"C", matrix(m.C)}, {"D", matrix(m.D)}}}};
}

json run_json(const SimResult& r) {
    json t = json::array();
    for (const auto& x : r.turbines) {
        json e{{"name", x.name},
               {"P_e0_mw", x.P_e0},
               {"omega0_pu", x.omega0},
               {"min_omega_pu", x.min_omega},
               {"final_omega_pu", x.omega.empty() ? x.omega0 : x.omega.back()},
               {"max_command_ratio", x.max_command_ratio},
               {"floor_hit", x.floor_hit},
               {"clamped", x.clamped}};
        if (x.exit)
            e["exit"] = {{"trigger", to_string(x.exit->trigger)},
                         {"t_e", x.exit->t_e},
                         {"gamma", x.exit->gamma},
                         {"gamma_clamped", x.exit->clamped},
                         {"jump_pu", x.exit_jump}};
        t.push_back(e);
    }
    json log = json::array();
    for (const auto& l : r.log) log.push_back({{"t", l.t}, {"kind", l.kind}, {"entity", l.entity}, {"detail", l.detail}});
    return json{{"alpha", r.alpha},
                {"K_w", r.K_w},
                {"swing_residual", r.swing_residual},
                {"limit_events", r.limit_events},
                {"turbines", t},
                {"log", log}};
}

void write_json(const std::string& path, const json& j) {
    auto f = open_out(path);
    f << j.dump(2) << '\n';
}

}  // namespace nadir
