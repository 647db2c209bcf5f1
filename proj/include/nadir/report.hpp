#pragma once

#include "nadir/analysis.hpp"
#include "nadir/simulator.hpp"
#include "nadir/trajopt.hpp"

#include "json.hpp"
#include <string>

namespace nadir {

// Trajectory: t_s, df_hz, df_pu, dpe_pu, de_pus, dpm_pu
void write_trajectory_csv(const std::string& path, const TrajectorySolution& s);
// Closed loop: t_s, df_hz, df_pu, dpm_pu, dpe_pu, pd_pu, then <wt>_pe_mw, <wt>_omega_pu, <wt>_de_pus per turbine
void write_trace_csv(const std::string& path, const SimResult& r);
// P_d_pu, nadir_pu, nadir_hz, nadir_ref_pu, e_r_pct, limits_hit
void write_sweep_csv(const std::string& path, const SweepResult& s, double f_B);

nlohmann::json to_json(const TrajectorySolution& s);
nlohmann::json to_json(const MetricsRecord& m);
nlohmann::json to_json(const AnalysisReport& a);
nlohmann::json controller_json(const ControllerSetup& c, const Scenario& s);
nlohmann::json run_json(const SimResult& r);  // per-turbine summary and event log

void write_json(const std::string& path, const nlohmann::json& j);
std::string fmt(double v);

}  // namespace nadir
