#pragma once

#include "nadir/aapc.hpp"
#include "nadir/scenario.hpp"
#include "nadir/trajopt.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nadir {

// Synthesised pieces shared by every run of a scenario.
struct ControllerSetup {
    double alpha = 1.0;
    double reference_P_d = 0.0;      // disturbance the trajectory was solved for
    double reference_nadir = 0.0;    // its optimal nadir, pu
    AapcController aggregate;
    std::vector<double> factors;     // allocation per turbine
    std::vector<Capability> capabilities;
    std::optional<TrajectorySolution> trajectory;
};

ControllerSetup prepare_controllers(const Scenario& s);
// Same synthesis, with a different allocation rule.
std::vector<double> allocation_for(const Scenario& s, AllocationMode mode);

struct TurbineTrace {
    std::string name;
    std::vector<double> P_e;    // MW
    std::vector<double> omega;  // pu of rated
    std::vector<double> dE;     // released energy, pu s on S_b
    double P_e0 = 0.0;          // MW
    double omega0 = 0.0;        // pu
    double max_command_ratio = 0.0;  // largest unclamped command over the fleet maximum
    double min_omega = 0.0;          // pu
    bool floor_hit = false;
    bool clamped = false;
    std::optional<ExitState> exit;
    double exit_jump = 0.0;     // |P_e after - P_e before| at the exit instant, pu on S_b
};

struct LogEntry {
    double t = 0.0;
    std::string kind;    // disturbance | exit | speed_floor | floor_release | clamp | activate
    std::string entity;
    std::string detail;
};

struct SimResult {
    double dt = 0.01;
    double f_B = 50.0;
    std::vector<double> t, df, dpm, dpe, pd;  // pu on S_b
    std::vector<TurbineTrace> turbines;
    std::vector<LogEntry> log;
    double swing_residual = 0.0;  // largest |2H df' - balance| over accepted steps
    double t_event = 0.0;         // first disturbance, or 0
    bool had_event = false;
    int limit_events = 0;
    double alpha = 1.0;
    double K_w = 0.0;
    std::vector<double> factors;
};

struct RunOptions {
    std::optional<ControllerKind> force_controller;  // override every turbine
    std::optional<std::vector<double>> factors;      // override allocation
    bool power_cross_exit = true;                    // false keeps support on until the window closes
};

SimResult run(const Scenario& s, const ControllerSetup& setup, const RunOptions& opt = {});
SimResult run(const Scenario& s);

struct MetricsRecord {
    double nadir = 0.0;  // pu
    double nadir_hz = 0.0;
    double t_nadir = 0.0;
    double primary_nadir = 0.0;    // within the support window
    double secondary_nadir = 0.0;  // after it
    bool secondary_dip = false;
    double max_rocof = 0.0;        // pu/s, magnitude
    double initial_rocof = 0.0;    // pu/s at the disturbance, quadratic-fit slope over 100 ms
    double terminal_deviation = 0.0;
    double nadir_ref = 0.0;
    double e_r = 0.0;              // percent
    bool degenerate = false;
};

// Window for the primary nadir: the first disturbance plus t_f.
MetricsRecord metrics(const SimResult& r, const GridParameters& grid, double nadir_ref, double t_f);

std::vector<double> coi_frequency(const std::vector<std::vector<double>>& traces, const std::vector<double>& H,
                                  const std::vector<double>& S);

struct MachineTraces {
    std::vector<double> t;
    std::vector<std::string> names;
    std::vector<std::vector<double>> f;  // one per machine
    std::vector<double> H, S;
};
// CSV with a time column and one frequency column per machine; weights sidecar JSON
// {"machines": [{"name":..., "H":..., "S":...}, ...]}.
MachineTraces read_machine_traces(const std::string& csv_path, const std::string& weights_path);

struct SweepRow {
    double P_d = 0.0;
    double nadir = 0.0;
    double nadir_ref = 0.0;
    double e_r = 0.0;
    bool limits_hit = false;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double P_d_max = 0.0;  // largest swept P_d with e_r <= 5 %, 0 if none
};

using ReferenceProvider = std::function<double(double P_d)>;

// Replaces the magnitude of the first event by each P_d in turn.
SweepResult insensitivity_sweep(const Scenario& s, const ControllerSetup& setup, const std::vector<double>& P_d,
                                const ReferenceProvider& ref);
// Reference that scales the setup's trajectory nadir linearly in P_d.
ReferenceProvider linear_reference(const ControllerSetup& setup);

}  // namespace nadir
