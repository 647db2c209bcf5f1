#include "nadir/trajopt.hpp"

#include "nadir/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace nadir {

TrajOptProblem build_problem(const GridParameters& grid, const StateSpace& gov, double P_d, double t_f) {
    if (!(grid.H > 0)) throw ParameterError("trajopt: H must be positive");
    if (P_d < 0) throw ParameterError("trajopt: disturbance must be non-negative");
    if (!(t_f > 0)) throw ParameterError("trajopt: horizon must be positive");
    gov.validate();
    TrajOptProblem p;
    p.grid = grid;
    p.gov = gov;
    p.P_d = P_d;
    p.tf = t_f;
    const int m = gov.order();
    const int n = m + 2;
    const double h2 = 2.0 * grid.H;
    p.K_g = -gov.dc_gain()(0, 0);
    p.A = Eigen::MatrixXd::Zero(n, n);
    p.A(0, 0) = (gov.D(0, 0) - grid.D) / h2;
    if (m > 0) {
        p.A.block(0, 1, 1, m) = gov.C / h2;
        p.A.block(1, 0, m, 1) = gov.B;
        p.A.block(1, 1, m, m) = gov.A;
    }
    p.B1 = Eigen::VectorXd::Zero(n);
    p.B1(0) = 1.0 / h2;
    p.B1(n - 1) = 1.0;
    p.B2 = Eigen::VectorXd::Zero(n);
    p.B2(0) = -1.0 / h2;
    return p;
}

Transcription transcribe(const TrajOptProblem& p, const CollocationGrid& g, const TranscribeOptions& opt) {
    Transcription tr;
    tr.grid = g;
    const int n = p.n_states();
    const int K = g.K;
    tr.n = n;
    const int nv = (K + 1) * n + K + (opt.min_integral ? 0 : 1);
    const double h = g.half_span();
    const int iE = n - 1;

    LinearProgram lp(nv);
    const int neq = n * K + n + 1;
    lp.A_eq = Eigen::MatrixXd::Zero(neq, nv);
    lp.b_eq = Eigen::VectorXd::Zero(neq);
    int r = 0;
    for (int k = 0; k < K; ++k) {
        for (int s = 0; s < n; ++s, ++r) {
            for (int i = 0; i <= K; ++i) lp.A_eq(r, tr.idx_x(i, s)) += g.D(k, i);
            for (int q = 0; q < n; ++q) lp.A_eq(r, tr.idx_x(k + 1, q)) -= h * p.A(s, q);
            lp.A_eq(r, tr.idx_u(k)) -= h * p.B1(s);
            lp.b_eq(r) = h * p.B2(s) * p.P_d;
        }
    }
    tr.n_collocation_eq = n * K;
    for (int s = 0; s < n; ++s, ++r) lp.A_eq(r, tr.idx_x(0, s)) = 1.0;
    tr.n_initial_eq = n;
    // released energy back to zero at the horizon
    lp.A_eq(r, tr.idx_x(0, iE)) = 1.0;
    for (int k = 0; k < K; ++k) lp.A_eq(r, tr.idx_u(k)) = h * g.weights(k);
    ++r;
    tr.n_terminal_eq = 1;

    // terminal frequency by quadrature: df_f = df_0 + h sum w_k (A0 X_k + B1_0 U_k + B2_0 P_d)
    Eigen::RowVectorXd term = Eigen::RowVectorXd::Zero(nv);
    term(tr.idx_x(0, 0)) = 1.0;
    for (int k = 0; k < K; ++k) {
        for (int q = 0; q < n; ++q) term(tr.idx_x(k + 1, q)) += h * g.weights(k) * p.A(0, q);
        term(tr.idx_u(k)) += h * g.weights(k) * p.B1(0);
    }
    const double term_const = h * g.weights.sum() * p.B2(0) * p.P_d;

    if (!opt.min_integral) {
        const int nin = K + (opt.terminal_nadir ? 1 : 0);
        lp.A_ub = Eigen::MatrixXd::Zero(nin, nv);
        lp.b_ub = Eigen::VectorXd::Zero(nin);
        for (int k = 0; k < K; ++k) {
            lp.A_ub(k, tr.idx_z()) = 1.0;
            lp.A_ub(k, tr.idx_x(k + 1, 0)) = -1.0;
        }
        tr.n_node_ineq = K;
        if (opt.terminal_nadir) {
            lp.A_ub.row(K) = -term;
            lp.A_ub(K, tr.idx_z()) += 1.0;
            lp.b_ub(K) = term_const;
            tr.n_terminal_ineq = 1;
        }
        lp.maximize = true;
        lp.c(tr.idx_z()) = 1.0;
    } else {
        // nodes above the terminal value, governor energy at least the target
        lp.A_ub = Eigen::MatrixXd::Zero(K + 1, nv);
        lp.b_ub = Eigen::VectorXd::Zero(K + 1);
        for (int k = 0; k < K; ++k) {
            lp.A_ub.row(k) = term;
            lp.A_ub(k, tr.idx_x(k + 1, 0)) -= 1.0;
            lp.b_ub(k) = -term_const;
        }
        tr.n_node_ineq = K;
        const int m = p.n_gov();
        for (int k = 0; k < K; ++k) {
            const double w = h * g.weights(k);
            lp.A_ub(K, tr.idx_x(k + 1, 0)) -= w * p.gov.D(0, 0);
            for (int j = 0; j < m; ++j) lp.A_ub(K, tr.idx_x(k + 1, 1 + j)) -= w * p.gov.C(0, j);
        }
        lp.b_ub(K) = -opt.energy_target;
        tr.n_energy_ineq = 1;
        lp.maximize = false;
        for (int k = 0; k < K; ++k) lp.c(tr.idx_x(k + 1, 0)) = h * g.weights(k);
    }
    tr.lp = std::move(lp);
    return tr;
}

LpSolution solve_transcription(const Transcription& tr) { return solve_lp(tr.lp); }

namespace {

void fill_metrics(TrajectorySolution& out, const TrajOptProblem& p) {
    out.f_B = p.grid.f_B;
    out.P_d = p.P_d;
    out.H = p.grid.H;
    out.D = p.grid.D;
    out.tf = p.tf;
    out.t0 = p.t0;
    out.df_ss = steady_state_deviation(p.P_d, p.grid, p.K_g);
    if (p.P_d == 0.0 || out.df_ss == 0.0) {
        out.zero_disturbance = true;
        out.alpha = 1.0;
    } else {
        out.alpha = out.nadir / out.df_ss;
    }
    const double T = p.tf - p.t0;
    double dip = 0.0, dev = 0.0;
    if (out.nadir != 0.0) {
        for (size_t i = 0; i < out.t.size(); ++i) {
            const double rel = (out.df[i] - out.nadir) / std::abs(out.nadir);
            dip = std::max(dip, -rel);
            if (out.t[i] >= p.t0 + 0.2 * T - 1e-9) dev = std::max(dev, std::abs(rel));
        }
    }
    out.max_dip = dip;
    out.max_dev_final80 = dev;
}

}  // namespace

namespace {

// The control polynomial rings badly outside the node span, so exported traces join the
// node values linearly and hold the end values.
double control_linear(const CollocationGrid& g, const Eigen::VectorXd& U, double t) {
    const int K = g.K;
    std::vector<double> tk(K);
    for (int k = 0; k < K; ++k) tk[k] = time_map(g.nodes(k), g.t0, g.tf);
    if (t <= tk.front()) return U(0);
    if (t >= tk.back()) return U(K - 1);
    const int j = static_cast<int>(std::upper_bound(tk.begin(), tk.end(), t) - tk.begin());
    const double w = (t - tk[j - 1]) / (tk[j] - tk[j - 1]);
    return (1 - w) * U(j - 1) + w * U(j);
}

}  // namespace

TrajectorySolution extract_solution(const LpSolution& s, const Transcription& tr, const TrajOptProblem& p, double dt) {
    if (s.status != LpStatus::Optimal) throw SolverError("trajopt: LP " + to_string(s.status));
    const auto& g = tr.grid;
    const int K = g.K, n = tr.n, m = p.n_gov();
    TrajectorySolution out;
    out.method = "collocation";
    out.grid = g;
    out.dt = dt;
    out.X.resize(K + 1, n);
    for (int i = 0; i <= K; ++i)
        for (int q = 0; q < n; ++q) out.X(i, q) = s.x(tr.idx_x(i, q));
    out.U.resize(K);
    for (int k = 0; k < K; ++k) out.U(k) = s.x(tr.idx_u(k));

    const double h = g.half_span();
    Eigen::MatrixXd f(n, K);
    for (int k = 0; k < K; ++k)
        f.col(k) = p.A * out.X.row(k + 1).transpose() + p.B1 * out.U(k) + p.B2 * p.P_d;
    const Eigen::VectorXd Xf = terminal_state(out.X.row(0).transpose(), f, g);
    out.df_terminal = Xf(0);
    out.de_terminal = Xf(n - 1);
    Eigen::VectorXd dpm_nodes(K + 1);
    for (int i = 0; i <= K; ++i) {
        double v = p.gov.D(0, 0) * out.X(i, 0);
        for (int j = 0; j < m; ++j) v += p.gov.C(0, j) * out.X(i, 1 + j);
        dpm_nodes(i) = v;
    }
    out.S_df = h * g.weights.dot(out.X.col(0).tail(K));
    out.E_m = h * g.weights.dot(dpm_nodes.tail(K));
    const double T = p.tf - p.t0;
    out.energy_residual = 2.0 * p.grid.H * out.df_terminal + p.grid.D * out.S_df - (out.E_m - p.P_d * T);
    out.sample_nadir = std::min(out.X.col(0).tail(K).minCoeff(), out.df_terminal);
    if (tr.lp.maximize && tr.idx_z() < tr.lp.num_vars())
        out.nadir = s.x(tr.idx_z());
    else
        out.nadir = out.sample_nadir;

    const int steps = static_cast<int>(std::llround(T / dt));
    const Eigen::VectorXd dfv = out.X.col(0), dev = out.X.col(n - 1);
    out.t.reserve(steps + 1);
    for (int i = 0; i <= steps; ++i) {
        const double t = std::min(p.t0 + i * dt, p.tf);
        out.t.push_back(t);
        out.df.push_back(interpolate(g, dfv, t));
        out.de.push_back(interpolate(g, dev, t));
        out.dpm.push_back(interpolate(g, dpm_nodes, t));
        out.dpe.push_back(control_linear(g, out.U, t));
    }
    out.lp_iterations = s.iterations;
    out.lp_variables = tr.lp.num_vars();
    out.lp_equalities = tr.lp.num_eq();
    out.lp_inequalities = tr.lp.num_ub();
    out.lp_primal_residual = s.primal_residual;
    out.lp_dual_residual = s.dual_residual;
    out.lp_complementarity = s.complementarity;
    fill_metrics(out, p);
    return out;
}

TrajectorySolution solve_trajectory(const TrajOptProblem& p, int K, const TranscribeOptions& opt) {
    const auto t_start = std::chrono::steady_clock::now();
    if (K < 1) throw ParameterError("trajopt: K must be positive");
    auto g = make_grid(K, p.t0, p.tf);
    auto tr = transcribe(p, g, opt);
    auto s = solve_transcription(tr);
    if (s.status != LpStatus::Optimal) throw SolverError("trajopt: LP " + to_string(s.status));
    auto out = extract_solution(s, tr, p);
    out.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return out;
}

TrajectorySolution min_integral_variant(const TrajOptProblem& p, const CollocationGrid& g, double energy_target) {
    TranscribeOptions opt;
    opt.min_integral = true;
    opt.energy_target = energy_target;
    auto tr = transcribe(p, g, opt);
    auto s = solve_transcription(tr);
    auto out = extract_solution(s, tr, p);
    out.method = "min_integral";
    return out;
}

TrajectorySolution min_integral_variant(const TrajOptProblem& p, const CollocationGrid& g) {
    auto tr = transcribe(p, g);
    auto s = solve_transcription(tr);
    auto ref = extract_solution(s, tr, p);
    return min_integral_variant(p, g, ref.E_m);
}

TrajectorySolution euler_oracle(const TrajOptProblem& p, int N) {
    if (N < 1000) throw ParameterError("euler oracle: N must be at least 1000");
    const auto t_start = std::chrono::steady_clock::now();
    const int m = p.n_gov();
    const double T = p.tf - p.t0;
    const double h = T / N;
    const double H2 = 2.0 * p.grid.H;
    const double Dg = m >= 0 ? p.gov.D(0, 0) : 0.0;
    Eigen::MatrixXd Phi = Eigen::MatrixXd::Identity(m, m) + h * p.gov.A;
    Eigen::VectorXd hB = h * (m > 0 ? Eigen::VectorXd(p.gov.B.col(0)) : Eigen::VectorXd(0));

    // q_j: weight of df_j in sum_{n<N} C_g x_g,n
    std::vector<double> q(N + 1, 0.0);
    if (m > 0) {
        Eigen::RowVectorXd r = p.gov.C;
        for (int j = N - 2; j >= 0; --j) {
            q[j] = r.dot(hB);
            r = p.gov.C + r * Phi;
        }
    }
    // energy row over df_1..df_N:  sum_n u_n = 0
    Eigen::VectorXd a = Eigen::VectorXd::Zero(N + 1);
    for (int j = 1; j <= N - 1; ++j) a(j) = -(Dg - p.grid.D) - q[j];
    a(N) += H2 / h;
    const double rhs = -N * p.P_d;

    // variables [z, s_1..s_N], df_j = z + s_j
    LinearProgram lp(N + 1);
    lp.bounds[0] = VarBound::Free;
    for (int j = 1; j <= N; ++j) lp.bounds[j] = VarBound::NonNegative;
    lp.A_eq = Eigen::MatrixXd::Zero(1, N + 1);
    lp.A_eq(0, 0) = a.tail(N).sum();
    for (int j = 1; j <= N; ++j) lp.A_eq(0, j) = a(j);
    lp.b_eq = Eigen::VectorXd::Constant(1, rhs);
    lp.maximize = true;
    lp.c(0) = 1.0;
    auto s = solve_lp(lp);
    if (s.status != LpStatus::Optimal) throw SolverError("euler oracle: LP " + to_string(s.status));

    TrajectorySolution out;
    out.method = "euler";
    out.dt = h;
    std::vector<double> df(N + 1, 0.0);
    for (int j = 1; j <= N; ++j) df[j] = s.x(0) + s.x(j);
    Eigen::VectorXd xg = Eigen::VectorXd::Zero(m);
    double E = 0.0, S = 0.0, Em = 0.0;
    for (int n = 0; n <= N; ++n) {
        const double pm = Dg * df[n] + (m > 0 ? p.gov.C.row(0).dot(xg) : 0.0);
        out.t.push_back(p.t0 + n * h);
        out.df.push_back(df[n]);
        out.dpm.push_back(pm);
        out.de.push_back(E);
        if (n == N) {
            out.dpe.push_back(out.dpe.empty() ? 0.0 : out.dpe.back());
            break;
        }
        const double u = H2 * (df[n + 1] - df[n]) / h - ((Dg - p.grid.D) * df[n] + pm - Dg * df[n]) + p.P_d;
        out.dpe.push_back(u);
        E += h * u;
        S += h * df[n];
        Em += h * pm;
        if (m > 0) xg = Phi * xg + hB * df[n];
    }
    out.nadir = s.x(0);
    out.sample_nadir = *std::min_element(out.df.begin() + 1, out.df.end());
    out.df_terminal = df[N];
    out.de_terminal = E;
    out.S_df = S;
    out.E_m = Em;
    out.energy_residual = H2 * out.df_terminal + p.grid.D * S - (Em - p.P_d * T) - E;
    out.lp_iterations = s.iterations;
    out.lp_variables = lp.num_vars();
    out.lp_equalities = lp.num_eq();
    out.lp_inequalities = lp.num_ub();
    out.lp_primal_residual = s.primal_residual;
    out.lp_dual_residual = s.dual_residual;
    out.lp_complementarity = s.complementarity;
    fill_metrics(out, p);
    out.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return out;
}

std::vector<double> natural_response(const TrajOptProblem& p, double dt, double t_end) {
    const int n = p.n_states();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    const Eigen::VectorXd w = p.B2 * p.P_d;
    auto f = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd { return p.A * z + w; };
    const int steps = static_cast<int>(std::llround(t_end / dt));
    std::vector<double> out;
    out.reserve(steps + 1);
    for (int k = 0; k <= steps; ++k) {
        out.push_back(x(0));
        if (k == steps) break;
        Eigen::VectorXd k1 = f(x), k2 = f(x + 0.5 * dt * k1), k3 = f(x + 0.5 * dt * k2), k4 = f(x + dt * k3);
        x += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return out;
}

}  // namespace nadir
