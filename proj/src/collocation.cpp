#include "nadir/collocation.hpp"

#include "nadir/error.hpp"

#include <cmath>
#include <numbers>

namespace nadir {

namespace {

// P_K(x) and P_K'(x) by the three-term recurrence
void legendre(int K, double x, double& p, double& dp) {
    double p0 = 1.0, p1 = x;
    if (K == 0) { p = 1.0; dp = 0.0; return; }
    for (int k = 2; k <= K; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    dp = K * (x * p1 - p0) / (x * x - 1.0);
}

double eval_bary(const Eigen::VectorXd& x, const Eigen::VectorXd& w, const Eigen::VectorXd& y, double s) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < x.size(); ++i) {
        const double d = s - x(i);
        if (d == 0.0) return y(i);
        const double c = w(i) / d;
        num += c * y(i);
        den += c;
    }
    return num / den;
}

}  // namespace

NodesWeights legendre_gauss(int K) {
    if (K <= 0) throw ParameterError("legendre_gauss: K must be positive");
    NodesWeights nw;
    nw.nodes.resize(K);
    nw.weights.resize(K);
    for (int i = 0; i < K; ++i) {
        double x = -std::cos(std::numbers::pi * (i + 0.75) / (K + 0.5));
        double p = 0, dp = 0;
        for (int it = 0; it < 100; ++it) {
            legendre(K, x, p, dp);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        legendre(K, x, p, dp);
        nw.nodes(i) = x;
        nw.weights(i) = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    // enforce exact symmetry
    for (int i = 0; i < K / 2; ++i) {
        const double a = 0.5 * (nw.nodes(K - 1 - i) - nw.nodes(i));
        const double w = 0.5 * (nw.weights(i) + nw.weights(K - 1 - i));
        nw.nodes(i) = -a;
        nw.nodes(K - 1 - i) = a;
        nw.weights(i) = nw.weights(K - 1 - i) = w;
    }
    if (K % 2 == 1) nw.nodes(K / 2) = 0.0;
    return nw;
}

double time_map(double tau, double t0, double tf) {
    if (!(tf > t0)) throw ParameterError("time map: tf must exceed t0");
    return 0.5 * (tf - t0) * tau + 0.5 * (tf + t0);
}

double inverse_time_map(double t, double t0, double tf) {
    if (!(tf > t0)) throw ParameterError("time map: tf must exceed t0");
    return 2.0 * t / (tf - t0) - (tf + t0) / (tf - t0);
}

Eigen::VectorXd barycentric_weights(const Eigen::VectorXd& x) {
    const auto n = x.size();
    Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) w(i) /= (x(i) - x(j));
    return w;
}

Eigen::MatrixXd differentiation_matrix(const CollocationGrid& g) {
    const auto& x = g.basis;
    const auto n = x.size();
    const Eigen::VectorXd w = barycentric_weights(x);
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        double diag = 0.0;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            full(i, j) = (w(j) / w(i)) / (x(i) - x(j));
            diag -= full(i, j);
        }
        full(i, i) = diag;
    }
    return full.bottomRows(n - 1);
}

CollocationGrid make_grid(int K, double t0, double tf) {
    if (!(tf > t0)) throw ParameterError("collocation grid: tf must exceed t0");
    auto nw = legendre_gauss(K);
    CollocationGrid g;
    g.K = K;
    g.t0 = t0;
    g.tf = tf;
    g.nodes = nw.nodes;
    g.weights = nw.weights;
    g.basis.resize(K + 1);
    g.basis(0) = -1.0;
    g.basis.tail(K) = nw.nodes;
    g.D = differentiation_matrix(g);
    return g;
}

Eigen::VectorXd terminal_state(const Eigen::VectorXd& X0, const Eigen::MatrixXd& f, const CollocationGrid& g) {
    if (f.cols() != g.K) throw ParameterError("terminal_state: need one dynamics sample per node");
    return X0 + g.half_span() * (f * g.weights);
}

double interpolate(const CollocationGrid& g, const Eigen::VectorXd& values, double t) {
    const double eps = 1e-12 * (g.tf - g.t0);
    if (t < g.t0 - eps || t > g.tf + eps) throw ParameterError("interpolate: time outside the horizon");
    const double tau = inverse_time_map(t, g.t0, g.tf);
    if (values.size() == g.K + 1) {
        static thread_local Eigen::VectorXd cache_x, cache_w;
        if (cache_x.size() != g.basis.size() || cache_x != g.basis) {
            cache_x = g.basis;
            cache_w = barycentric_weights(g.basis);
        }
        return eval_bary(cache_x, cache_w, values, tau);
    }
    if (values.size() == g.K) {
        static thread_local Eigen::VectorXd cache_x, cache_w;
        if (cache_x.size() != g.nodes.size() || cache_x != g.nodes) {
            cache_x = g.nodes;
            cache_w = barycentric_weights(g.nodes);
        }
        return eval_bary(cache_x, cache_w, values, tau);
    }
    throw ParameterError("interpolate: value count must be K or K+1");
}

Eigen::VectorXd solve_scalar_lti(const CollocationGrid& g, double a, double x0) {
    const int K = g.K;
    // D_1 X_nodes - h a X_nodes = -D_0 x0
    Eigen::MatrixXd M = g.D.rightCols(K) - g.half_span() * a * Eigen::MatrixXd::Identity(K, K);
    Eigen::VectorXd rhs = -g.D.col(0) * x0;
    Eigen::VectorXd X(K + 1);
    X(0) = x0;
    X.tail(K) = M.partialPivLu().solve(rhs);
    return X;
}

}  // namespace nadir
