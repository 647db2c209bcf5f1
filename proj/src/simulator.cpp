#include "nadir/simulator.hpp"

#include "nadir/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nadir {

std::vector<double> allocation_for(const Scenario& s, AllocationMode mode) {
    if (s.turbines.empty()) return {};
    if (!s.controllers.allocation_override.empty()) return s.controllers.allocation_override;
    if (mode == AllocationMode::Uniform) return allocate_uniform(s.turbines.size());
    std::vector<Capability> caps;
    for (const auto& t : s.turbines) caps.push_back(capability_indices(mppt_equilibrium(t.spec, t.v_w, t.beta), t.spec));
    return allocate(caps);
}

ControllerSetup prepare_controllers(const Scenario& s) {
    ControllerSetup c;
    const StateSpace gov = s.aggregate();
    c.reference_P_d = s.solver.hypothetical_P_d;
    if (s.controllers.alpha) {
        c.alpha = *s.controllers.alpha;
        const double ss = steady_state_deviation(c.reference_P_d, s.grid, s.K_g());
        c.reference_nadir = c.alpha * ss;
    } else {
        auto p = build_problem(s.grid, gov, c.reference_P_d, s.solver.t_f);
        c.trajectory = solve_trajectory(p, s.solver.K);
        c.alpha = std::max(1.0, c.trajectory->alpha);
        c.reference_nadir = c.trajectory->nadir;
    }
    c.aggregate = synthesize(s.grid, gov, c.alpha);
    for (const auto& t : s.turbines)
        c.capabilities.push_back(capability_indices(mppt_equilibrium(t.spec, t.v_w, t.beta), t.spec));
    c.factors = allocation_for(s, s.controllers.allocation);
    return c;
}

namespace {

enum class Phase { Idle, Support, Exited };

struct TurbMode {
    Phase phase = Phase::Idle;
    ExitState exit;
    bool hold = false;
    bool armed = false;
};

struct Mode {
    double pd = 0.0;
    std::vector<char> gov_alive;
    bool active = false;
    double t_act = 0.0;
    std::vector<TurbMode> tm;
};

struct TurbEval {
    double P_t = 0, P_mppt = 0, cmd = 0, P_e = 0;
};

class Engine {
public:
    Engine(const Scenario& s, const ControllerSetup& setup, const RunOptions& opt) : s_(s), setup_(setup) {
        const auto& g = s.grid;
        H2_ = 2.0 * g.H;
        S_b_ = g.S_b;
        for (const auto& e : s.governors) {
            auto r = governor_realization(e.spec, g.S_b);
            blocks_.push_back(r);
        }
        gov_ = aggregate_governors(blocks_);
        m_ = gov_.order();
        int off = 0;
        for (const auto& b : blocks_) {
            offs_.push_back(off);
            off += b.order();
        }
        nt_ = static_cast<int>(s.turbines.size());
        base_ = 2 + 2 * m_;
        n_ = base_ + 2 * nt_;
        kind_.resize(nt_);
        P_e0_.resize(nt_);
        double rating = 0.0;
        for (const auto& t : s.turbines) rating += t.spec.N_agg * t.spec.P_n;
        for (int j = 0; j < nt_; ++j) {
            const auto& t = s.turbines[j];
            kind_[j] = opt.force_controller ? *opt.force_controller : t.controller;
            share_.push_back(rating > 0 ? t.spec.N_agg * t.spec.P_n / rating : 0.0);
        }
        cross_exit_ = opt.power_cross_exit;
        factors_ = opt.factors ? *opt.factors : setup.factors;
        if (static_cast<int>(factors_.size()) != nt_) factors_ = allocation_for(s, s.controllers.allocation);
        ctrl_ = setup.aggregate;
        y_ = Eigen::VectorXd::Zero(n_);
        for (int j = 0; j < nt_; ++j) {
            const auto& t = s.turbines[j];
            const auto eq = mppt_equilibrium(t.spec, t.v_w, t.beta);
            y_(base_ + 2 * j) = eq.omega;
            P_e0_[j] = eq.P_e;
        }
        md_.gov_alive.assign(blocks_.size(), 1);
        md_.tm.resize(nt_);
        for (int j = 0; j < nt_; ++j) md_.tm[j].phase = Phase::Idle;
        applied_.assign(s.events.size(), false);
    }

    SimResult run() {
        const double dt = s_.solver.dt;
        const int steps = static_cast<int>(std::llround(s_.solver.horizon / dt));
        SimResult r;
        r.dt = dt;
        r.f_B = s_.grid.f_B;
        r.alpha = ctrl_.alpha;
        r.K_w = ctrl_.K_w;
        r.factors = factors_;
        for (int j = 0; j < nt_; ++j) {
            TurbineTrace tt;
            tt.name = s_.turbines[j].name;
            tt.P_e0 = P_e0_[j];
            tt.omega0 = y_(base_ + 2 * j) / s_.turbines[j].spec.omega_n();
            tt.min_omega = tt.omega0;
            r.turbines.push_back(tt);
        }
        if (!s_.events.empty()) {
            r.had_event = true;
            r.t_event = s_.events.front().t;
        }
        res_ = &r;
        double t = 0.0;
        scheduled(t);
        bookkeeping(t);
        record(t);
        for (int nstep = 0; nstep < steps; ++nstep) {
            const double target = (nstep + 1) * dt;
            while (t < target - 1e-12) {
                double t_next = target;
                for (size_t i = 0; i < s_.events.size(); ++i)
                    if (!applied_[i] && s_.events[i].t > t + 1e-12 && s_.events[i].t < t_next) t_next = s_.events[i].t;
                const double t_hz = md_.t_act + s_.solver.t_f;
                if (md_.active && any_support() && t_hz > t + 1e-12 && t_hz < t_next) t_next = t_hz;
                const double h = t_next - t;
                Eigen::VectorXd y1 = rk4(y_, h, true);
                if (fires(y1)) {
                    double lo = 0.0, hi = h;
                    while (hi - lo > 1e-4) {
                        const double mid = 0.5 * (lo + hi);
                        if (fires(rk4(y_, mid, false))) hi = mid; else lo = mid;
                    }
                    const Eigen::VectorXd yhi = rk4(y_, hi, false);
                    if (lo > 0.0) {
                        y_ = rk4(y_, lo, true);
                        t += lo;
                    }
                    switch_modes(yhi, t);
                    bookkeeping(t);
                    continue;
                }
                y_ = y1;
                t = t_next;
                scheduled(t);
                bookkeeping(t);
            }
            t = target;
            record(t);
        }
        return r;
    }

private:
    const Scenario& s_;
    const ControllerSetup& setup_;
    std::vector<StateSpace> blocks_;
    std::vector<int> offs_;
    StateSpace gov_;
    AapcController ctrl_;
    int m_ = 0, nt_ = 0, base_ = 0, n_ = 0;
    double H2_ = 0, S_b_ = 0;
    std::vector<ControllerKind> kind_;
    bool cross_exit_ = true;
    std::vector<double> P_e0_, share_, factors_;
    Eigen::VectorXd y_;
    Mode md_;
    std::vector<bool> applied_;
    std::vector<bool> clamp_logged_;
    SimResult* res_ = nullptr;

    bool any_support() const {
        for (const auto& m : md_.tm)
            if (m.phase == Phase::Support) return true;
        return false;
    }

    double omega(const Eigen::VectorXd& y, int j) const { return y(base_ + 2 * j); }

    TurbEval turbine(const Eigen::VectorXd& y, int j) const {
        const auto& t = s_.turbines[j];
        const auto& sp = t.spec;
        TurbEval e;
        TurbineState st;
        st.omega = omega(y, j);
        st.v_w = t.v_w;
        st.beta = t.beta;
        e.P_t = turbine_power(st, sp);
        e.P_mppt = mppt_power(st.omega, sp, t.beta);
        const double df = y(0);
        const auto& tm = md_.tm[j];
        switch (kind_[j]) {
            case ControllerKind::None: e.cmd = e.P_mppt; break;
            case ControllerKind::ClassicVic: {
                const auto& v = s_.controllers.vic;
                const double d = (df - y(1 + 2 * m_)) / v.tau;
                e.cmd = e.P_mppt + share_[j] * S_b_ * (-v.k_f * df - v.k_in * d);
                break;
            }
            case ControllerKind::OptimalAapc: {
                if (tm.phase == Phase::Idle) {
                    e.cmd = P_e0_[j];
                } else if (tm.phase == Phase::Support) {
                    AapcController c = ctrl_;
                    c.c = factors_[j];
                    const auto out = aapc_output(c, y.segment(1 + m_, m_), df);
                    e.cmd = P_e0_[j] + S_b_ * out.total;
                } else {
                    e.cmd = exit_power(tm.exit, e.P_t, e.P_mppt);
                }
                break;
            }
        }
        e.P_e = std::clamp(e.cmd, sp.P_e_min * sp.N_agg, sp.P_e_max * sp.N_agg);
        if (tm.hold) e.P_e = std::min(e.P_e, e.P_t);
        return e;
    }

    // derivative and the swing balance 2H df'
    Eigen::VectorXd deriv(const Eigen::VectorXd& y, double& balance) const {
        Eigen::VectorXd dy = Eigen::VectorXd::Zero(n_);
        const double df = y(0);
        double dpm = 0.0;
        for (size_t i = 0; i < blocks_.size(); ++i) {
            if (!md_.gov_alive[i]) continue;
            const auto& b = blocks_[i];
            double v = b.D(0, 0) * df;
            if (b.order() > 0) v += b.C.row(0).dot(y.segment(1 + offs_[i], b.order()));
            dpm += v;
        }
        double dpe = 0.0;
        for (int j = 0; j < nt_; ++j) {
            const auto e = turbine(y, j);
            const auto& sp = s_.turbines[j].spec;
            dpe += (e.P_e - P_e0_[j]) / S_b_;
            dy(base_ + 2 * j) = (e.P_t - e.P_e) * 1e6 / (sp.inertia() * omega(y, j));
            dy(base_ + 2 * j + 1) = (e.P_e - P_e0_[j]) / S_b_;
        }
        balance = dpm + dpe - md_.pd - s_.grid.D * df;
        dy(0) = balance / H2_;
        if (m_ > 0) {
            dy.segment(1, m_) = gov_.A * y.segment(1, m_) + gov_.B.col(0) * df;
            dy.segment(1 + m_, m_) = gov_.A * y.segment(1 + m_, m_) + gov_.B.col(0) * df;
        }
        dy(1 + 2 * m_) = (df - y(1 + 2 * m_)) / s_.controllers.vic.tau;
        return dy;
    }

    Eigen::VectorXd rk4(const Eigen::VectorXd& y, double h, bool account) {
        double b1, b2, b3, b4;
        const Eigen::VectorXd k1 = deriv(y, b1);
        const Eigen::VectorXd k2 = deriv(y + 0.5 * h * k1, b2);
        const Eigen::VectorXd k3 = deriv(y + 0.5 * h * k2, b3);
        const Eigen::VectorXd k4 = deriv(y + h * k3, b4);
        Eigen::VectorXd y1 = y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        if (account && h > 1e-9) {
            const double lhs = H2_ * (y1(0) - y(0)) / h;
            const double rhs = (b1 + 2 * b2 + 2 * b3 + b4) / 6.0;
            res_->swing_residual = std::max(res_->swing_residual, std::abs(lhs - rhs));
        }
        return y1;
    }

    bool fires_for(const Eigen::VectorXd& y, int j, bool& floor, bool& cross) const {
        const auto& sp = s_.turbines[j].spec;
        const auto& tm = md_.tm[j];
        floor = !tm.hold && omega(y, j) < sp.omega_min();
        cross = false;
        if (cross_exit_ && kind_[j] == ControllerKind::OptimalAapc && tm.phase == Phase::Support && tm.armed) {
            const auto e = turbine(y, j);
            cross = e.P_e - e.P_mppt <= 0.0;
        }
        return floor || cross;
    }

    bool fires(const Eigen::VectorXd& y) const {
        bool f, c;
        for (int j = 0; j < nt_; ++j)
            if (fires_for(y, j, f, c)) return true;
        return false;
    }

    void do_exit(int j, ExitTrigger trig, double t) {
        auto& tm = md_.tm[j];
        const auto before = turbine(y_, j);
        ExitState e;
        e.trigger = trig;
        e.t_e = t;
        exit_gamma(e, before.P_e, before.P_t, before.P_mppt);
        tm.exit = e;
        tm.phase = Phase::Exited;
        const auto after = turbine(y_, j);
        auto& tt = res_->turbines[j];
        tt.exit = e;
        tt.exit_jump = std::abs(after.P_e - before.P_e) / S_b_;
        std::ostringstream os;
        os << to_string(trig) << " gamma=" << e.gamma << (e.clamped ? " (clamped)" : "");
        res_->log.push_back({t, "exit", s_.turbines[j].name, os.str()});
    }

    void switch_modes(const Eigen::VectorXd& yhi, double t) {
        for (int j = 0; j < nt_; ++j) {
            bool floor = false, cross = false;
            if (!fires_for(yhi, j, floor, cross)) continue;
            if (cross) do_exit(j, ExitTrigger::PowerCross, t);
            if (floor) {
                if (kind_[j] == ControllerKind::OptimalAapc && md_.tm[j].phase == Phase::Support)
                    do_exit(j, ExitTrigger::SpeedFloor, t);
                md_.tm[j].hold = true;
                res_->turbines[j].floor_hit = true;
                ++res_->limit_events;
                res_->log.push_back({t, "speed_floor", s_.turbines[j].name, "cutback to turbine power"});
            }
        }
    }

    void scheduled(double t) {
        for (size_t i = 0; i < s_.events.size(); ++i) {
            const auto& ev = s_.events[i];
            if (applied_[i] || std::abs(ev.t - t) > 1e-9) continue;
            applied_[i] = true;
            md_.pd += ev.magnitude;
            std::ostringstream os;
            os << to_string(ev.kind) << " " << ev.magnitude << " pu";
            if (!ev.unit.empty()) {
                for (size_t k = 0; k < s_.governors.size(); ++k)
                    if (s_.governors[k].spec.name == ev.unit) md_.gov_alive[k] = 0;
                os << " (" << ev.unit << " governor removed)";
            }
            res_->log.push_back({t, "disturbance", ev.unit, os.str()});
            if (!md_.active) {
                md_.active = true;
                md_.t_act = t;
                for (int j = 0; j < nt_; ++j)
                    if (kind_[j] == ControllerKind::OptimalAapc) {
                        md_.tm[j].phase = Phase::Support;
                        res_->log.push_back({t, "activate", s_.turbines[j].name, "support window opens"});
                    }
            }
        }
        if (md_.active && std::abs(t - (md_.t_act + s_.solver.t_f)) <= 1e-9)
            for (int j = 0; j < nt_; ++j)
                if (kind_[j] == ControllerKind::OptimalAapc && md_.tm[j].phase == Phase::Support)
                    do_exit(j, ExitTrigger::Horizon, t);
    }

    void bookkeeping(double t) {
        if (clamp_logged_.empty()) clamp_logged_.assign(nt_, false);
        for (int j = 0; j < nt_; ++j) {
            const auto& sp = s_.turbines[j].spec;
            auto& tm = md_.tm[j];
            const auto e = turbine(y_, j);
            auto& tt = res_->turbines[j];
            const double pmax = sp.P_e_max * sp.N_agg, pmin = sp.P_e_min * sp.N_agg;
            tt.max_command_ratio = std::max(tt.max_command_ratio, e.cmd / pmax);
            if ((e.cmd > pmax * (1 + 1e-12) || e.cmd < pmin - 1e-12 * pmax) && !clamp_logged_[j]) {
                clamp_logged_[j] = true;
                tt.clamped = true;
                ++res_->limit_events;
                res_->log.push_back({t, "clamp", s_.turbines[j].name, "command outside [P_e_min, P_e_max]"});
            }
            if (kind_[j] == ControllerKind::OptimalAapc && tm.phase == Phase::Support && !tm.armed &&
                e.P_e - e.P_mppt > 1e-9 * pmax)
                tm.armed = true;
            if (tm.hold) {
                const double c = std::clamp(e.cmd, pmin, pmax);
                if (c < e.P_t) {
                    tm.hold = false;
                    res_->log.push_back({t, "floor_release", s_.turbines[j].name, "command below turbine power"});
                }
            }
        }
    }

    void record(double t) {
        auto& r = *res_;
        r.t.push_back(t);
        r.df.push_back(y_(0));
        r.pd.push_back(md_.pd);
        double dpm = 0.0;
        for (size_t i = 0; i < blocks_.size(); ++i) {
            if (!md_.gov_alive[i]) continue;
            const auto& b = blocks_[i];
            double v = b.D(0, 0) * y_(0);
            if (b.order() > 0) v += b.C.row(0).dot(y_.segment(1 + offs_[i], b.order()));
            dpm += v;
        }
        r.dpm.push_back(dpm);
        double dpe = 0.0;
        for (int j = 0; j < nt_; ++j) {
            const auto e = turbine(y_, j);
            const auto& sp = s_.turbines[j].spec;
            auto& tt = r.turbines[j];
            tt.P_e.push_back(e.P_e);
            const double w = omega(y_, j) / sp.omega_n();
            tt.omega.push_back(w);
            tt.min_omega = std::min(tt.min_omega, w);
            tt.dE.push_back(y_(base_ + 2 * j + 1));
            dpe += (e.P_e - P_e0_[j]) / S_b_;
        }
        r.dpe.push_back(dpe);
    }
};

}  // namespace

SimResult run(const Scenario& s, const ControllerSetup& setup, const RunOptions& opt) {
    auto issues = validate_scenario(s);
    if (!issues.empty()) throw ValidationError(issues);
    Engine e(s, setup, opt);
    return e.run();
}

SimResult run(const Scenario& s) {
    auto issues = validate_scenario(s);
    if (!issues.empty()) throw ValidationError(issues);
    bool need = false;
    for (const auto& t : s.turbines) need = need || t.controller == ControllerKind::OptimalAapc;
    ControllerSetup setup;
    if (need) {
        setup = prepare_controllers(s);
    } else {
        Scenario copy = s;
        copy.controllers.alpha = 1.0;
        setup = prepare_controllers(copy);
    }
    return run(s, setup);
}

MetricsRecord metrics(const SimResult& r, const GridParameters& grid, double nadir_ref, double t_f) {
    MetricsRecord m;
    m.nadir_ref = nadir_ref;
    if (r.t.empty()) {
        m.degenerate = true;
        return m;
    }
    const double fB = grid.f_B;
    size_t imin = 0;
    for (size_t i = 0; i < r.df.size(); ++i)
        if (r.df[i] < r.df[imin]) imin = i;
    m.nadir = std::min(0.0, r.df[imin]);
    m.t_nadir = m.nadir < 0 ? r.t[imin] : 0.0;
    m.nadir_hz = m.nadir * fB;
    const double t_end_window = r.t_event + t_f;
    m.primary_nadir = 0.0;
    m.secondary_nadir = 0.0;
    for (size_t i = 0; i < r.df.size(); ++i) {
        if (r.t[i] <= t_end_window + 1e-9) m.primary_nadir = std::min(m.primary_nadir, r.df[i]);
        else m.secondary_nadir = std::min(m.secondary_nadir, r.df[i]);
    }
    m.secondary_dip = std::abs(m.secondary_nadir) > 1.05 * std::abs(m.primary_nadir);
    for (size_t i = 1; i < r.df.size(); ++i)
        m.max_rocof = std::max(m.max_rocof, std::abs(r.df[i] - r.df[i - 1]) / (r.t[i] - r.t[i - 1]));
    // quadratic fit over the first 100 ms after the disturbance
    if (r.had_event) {
        Eigen::MatrixXd A(0, 3);
        std::vector<double> rows_t, rows_y;
        for (size_t i = 0; i < r.t.size(); ++i) {
            const double s = r.t[i] - r.t_event;
            if (s < -1e-9) continue;
            if (s > 0.1 + 1e-9) break;
            rows_t.push_back(s);
            rows_y.push_back(r.df[i]);
        }
        if (rows_t.size() >= 3) {
            A.resize(static_cast<long>(rows_t.size()), 3);
            Eigen::VectorXd b(static_cast<long>(rows_t.size()));
            for (size_t k = 0; k < rows_t.size(); ++k) {
                A(static_cast<long>(k), 0) = 1.0;
                A(static_cast<long>(k), 1) = rows_t[k];
                A(static_cast<long>(k), 2) = rows_t[k] * rows_t[k];
                b(static_cast<long>(k)) = rows_y[k];
            }
            const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
            m.initial_rocof = c(1);
        }
    }
    m.terminal_deviation = r.df.back();
    if (m.nadir == 0.0 || nadir_ref == 0.0) {
        m.degenerate = true;
        m.e_r = nadir_ref == 0.0 ? 0.0 : -100.0;
    } else {
        m.e_r = (m.nadir - nadir_ref) / nadir_ref * 100.0;
    }
    return m;
}

std::vector<double> coi_frequency(const std::vector<std::vector<double>>& traces, const std::vector<double>& H,
                                  const std::vector<double>& S) {
    if (traces.empty()) throw ParameterError("coi: no machine traces");
    if (H.size() != traces.size() || S.size() != traces.size()) throw ParameterError("coi: one weight per machine");
    const size_t n = traces.front().size();
    for (const auto& tr : traces)
        if (tr.size() != n) throw ParameterError("coi: mismatched trace lengths");
    double wsum = 0.0;
    for (size_t i = 0; i < H.size(); ++i) {
        if (!(H[i] > 0) || !(S[i] > 0)) throw ParameterError("coi: weights must be positive");
        wsum += H[i] * S[i];
    }
    std::vector<double> out(n, 0.0);
    for (size_t i = 0; i < traces.size(); ++i) {
        const double w = H[i] * S[i] / wsum;
        for (size_t k = 0; k < n; ++k) out[k] += w * traces[i][k];
    }
    return out;
}

MachineTraces read_machine_traces(const std::string& csv_path, const std::string& weights_path) {
    MachineTraces m;
    std::ifstream in(csv_path);
    if (!in) throw ParameterError("coi: cannot open " + csv_path);
    std::string line;
    if (!std::getline(in, line)) throw ParameterError("coi: empty trace file");
    {
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');
        while (std::getline(ss, cell, ',')) m.names.push_back(cell);
    }
    m.f.resize(m.names.size());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');
        m.t.push_back(std::stod(cell));
        size_t k = 0;
        while (std::getline(ss, cell, ',')) {
            if (k >= m.f.size()) throw ParameterError("coi: row wider than header");
            m.f[k++].push_back(std::stod(cell));
        }
        if (k != m.f.size()) throw ParameterError("coi: row narrower than header");
    }
    std::ifstream win(weights_path);
    if (!win) throw ParameterError("coi: cannot open " + weights_path);
    nlohmann::json w;
    win >> w;
    const auto& arr = w.at("machines");
    for (const auto& name : m.names) {
        bool found = false;
        for (const auto& e : arr)
            if (e.at("name").get<std::string>() == name) {
                m.H.push_back(e.at("H").get<double>());
                m.S.push_back(e.at("S").get<double>());
                found = true;
                break;
            }
        if (!found) throw ParameterError("coi: no weights for machine '" + name + "'");
    }
    return m;
}

ReferenceProvider linear_reference(const ControllerSetup& setup) {
    const double n0 = setup.reference_nadir, p0 = setup.reference_P_d;
    return [n0, p0](double P_d) { return p0 > 0 ? n0 * P_d / p0 : 0.0; };
}

SweepResult insensitivity_sweep(const Scenario& s, const ControllerSetup& setup, const std::vector<double>& P_d,
                                const ReferenceProvider& ref) {
    if (s.events.empty()) throw ParameterError("sweep: scenario has no disturbance to scale");
    for (size_t i = 1; i < P_d.size(); ++i)
        if (!(P_d[i] > P_d[i - 1])) throw ParameterError("sweep: P_d grid must be increasing");
    SweepResult out;
    for (double pd : P_d) {
        Scenario sc = s;
        sc.events.front().magnitude = pd;
        const auto r = run(sc, setup);
        SweepRow row;
        row.P_d = pd;
        row.nadir_ref = ref(pd);
        const auto m = metrics(r, s.grid, row.nadir_ref, s.solver.t_f);
        row.nadir = m.nadir;
        row.e_r = m.e_r;
        row.limits_hit = r.limit_events > 0;
        if (row.e_r <= 5.0 && pd > out.P_d_max) out.P_d_max = pd;
        out.rows.push_back(row);
    }
    return out;
}

}  // namespace nadir
