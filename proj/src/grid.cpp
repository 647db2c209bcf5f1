#include "nadir/grid.hpp"

#include "nadir/error.hpp"

#include <cmath>
#include <sstream>

namespace nadir {

ValidationError::ValidationError(std::vector<std::string> issues)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "scenario validation failed";
          for (const auto& s : issues) os << "\n  " << s;
          return os.str();
      }()),
      issues_(std::move(issues)) {}

void GridParameters::validate() const {
    if (!(H > 0)) throw ParameterError("grid: H must be positive");
    if (!(D >= 0)) throw ParameterError("grid: D must be non-negative");
    if (f_B != 50.0 && f_B != 60.0) throw ParameterError("grid: f_B must be 50 or 60 Hz");
    if (!(S_b > 0)) throw ParameterError("grid: S_b must be positive");
    if (!(P_L > 0)) throw ParameterError("grid: P_L must be positive");
}

namespace {

std::vector<double> strip_leading(const std::vector<double>& p) {
    size_t i = 0;
    while (i + 1 < p.size() && p[i] == 0.0) ++i;
    return {p.begin() + static_cast<long>(i), p.end()};
}

}  // namespace

Eigen::VectorXcd poly_roots(const std::vector<double>& coeffs) {
    auto p = strip_leading(coeffs);
    const int n = static_cast<int>(p.size()) - 1;
    if (n <= 0) return Eigen::VectorXcd(0);
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) comp(0, j) = -p[j + 1] / p[0];
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    return comp.eigenvalues();
}

void GovernorSpec::validate() const {
    const std::string who = "governor '" + name + "': ";
    if (!(R > 0)) throw ParameterError(who + "droop R must be positive");
    if (!(rating_mva > 0)) throw ParameterError(who + "rating must be positive");
    if (den.empty() || num.empty()) throw ParameterError(who + "empty transfer function");
    auto d = strip_leading(den);
    auto n = strip_leading(num);
    if (d[0] == 0.0) throw ParameterError(who + "zero denominator");
    if (n.size() > d.size()) throw ParameterError(who + "improper transfer function");
    if (d.back() == 0.0) throw ParameterError(who + "pole at the origin");
    for (const auto& r : poly_roots(d))
        if (!(r.real() < 0)) throw ParameterError(who + "unstable denominator root");
}

double GovernorSpec::dc_gain() const { return num.back() / den.back(); }

GovernorSpec reheat_governor(const ReheatSteam& p) {
    if (!(p.R > 0)) throw ParameterError("reheat governor: R must be positive");
    if (!(p.T_R > 0)) throw ParameterError("reheat governor: T_R must be positive");
    if (!(p.K_m > 0)) throw ParameterError("reheat governor: K_m must be positive");
    if (p.F_H < 0 || p.F_H > 1) throw ParameterError("reheat governor: F_H must lie in [0,1]");
    GovernorSpec g;
    g.R = p.R;
    g.num = {-p.K_m * p.F_H * p.T_R, -p.K_m};
    g.den = {p.R * p.T_R, p.R};
    g.reheat = p;
    return g;
}

GovernorSpec hydro_governor(double R, double r_t, double T_R) {
    if (!(R > 0) || !(r_t > 0) || !(T_R > 0)) throw ParameterError("hydro governor: parameters must be positive");
    GovernorSpec g;
    g.R = R;
    g.num = {-T_R, -1.0};
    g.den = {R * (r_t / R) * T_R, R};
    return g;
}

GovernorSpec gas_governor(double K_m, double R, double T_g) {
    if (!(R > 0) || !(T_g > 0) || !(K_m > 0)) throw ParameterError("gas governor: parameters must be positive");
    GovernorSpec g;
    g.R = R;
    g.num = {-K_m};
    g.den = {R * T_g, R};
    return g;
}

double governor_dc_gain_total(const std::vector<GovernorSpec>& governors, double S_b) {
    if (!(S_b > 0)) throw ParameterError("S_b must be positive");
    double k = 0.0;
    for (const auto& g : governors) k += std::abs(g.dc_gain()) * g.rating_mva / S_b;
    return k;
}

double steady_state_deviation(double P_d, const GridParameters& grid, double K_g) {
    const double s = grid.D + K_g;
    if (s == 0.0) throw ParameterError("singular plant: D + K_g = 0");
    return -P_d / s;
}

StateSpace tf_to_statespace(const std::vector<double>& num_in, const std::vector<double>& den_in) {
    if (num_in.empty() || den_in.empty()) throw ParameterError("realization: empty polynomial");
    auto den = strip_leading(den_in);
    auto num = strip_leading(num_in);
    if (den[0] == 0.0) throw ParameterError("realization: zero denominator");
    if (num.size() > den.size()) throw ParameterError("realization: improper transfer function");
    const int n = static_cast<int>(den.size()) - 1;
    const double a0 = den[0];
    std::vector<double> a(den.size()), b(den.size(), 0.0);
    for (size_t i = 0; i < den.size(); ++i) a[i] = den[i] / a0;
    for (size_t i = 0; i < num.size(); ++i) b[den.size() - num.size() + i] = num[i] / a0;

    StateSpace ss;
    const double d = b[0];
    ss.D = Eigen::MatrixXd::Constant(1, 1, d);
    ss.A = Eigen::MatrixXd::Zero(n, n);
    ss.B = Eigen::MatrixXd::Zero(n, 1);
    ss.C = Eigen::MatrixXd::Zero(1, n);
    if (n > 0) {
        for (int j = 0; j < n; ++j) {
            ss.A(0, j) = -a[j + 1];
            ss.C(0, j) = b[j + 1] - d * a[j + 1];
        }
        for (int i = 1; i < n; ++i) ss.A(i, i - 1) = 1.0;
        ss.B(0, 0) = 1.0;
    }
    return ss;
}

StateSpace tf_to_statespace(const GovernorSpec& g) { return tf_to_statespace(g.num, g.den); }

StateSpace governor_realization(const GovernorSpec& g, double S_b) {
    StateSpace ss = tf_to_statespace(g);
    const double w = g.rating_mva / S_b;
    ss.C *= w;
    ss.D *= w;
    return ss;
}

void StateSpace::validate() const {
    const auto n = A.rows();
    if (A.cols() != n || B.rows() != n || C.cols() != n || D.rows() != C.rows() || D.cols() != B.cols())
        throw ParameterError("state space: inconsistent dimensions");
}

Eigen::MatrixXd StateSpace::dc_gain() const {
    if (A.rows() == 0) return D;
    return D - C * A.fullPivLu().solve(B);
}

StateSpace aggregate_governors(const std::vector<StateSpace>& parts) {
    int n = 0;
    for (const auto& p : parts) {
        p.validate();
        if (p.B.cols() != 1 || p.C.rows() != 1) throw ParameterError("aggregate: governors must be SISO");
        n += p.order();
    }
    StateSpace agg;
    agg.A = Eigen::MatrixXd::Zero(n, n);
    agg.B = Eigen::MatrixXd::Zero(n, 1);
    agg.C = Eigen::MatrixXd::Zero(1, n);
    agg.D = Eigen::MatrixXd::Zero(1, 1);
    int off = 0;
    for (const auto& p : parts) {
        const int m = p.order();
        agg.A.block(off, off, m, m) = p.A;
        agg.B.block(off, 0, m, 1) = p.B;
        agg.C.block(0, off, 1, m) = p.C;
        agg.D += p.D;
        off += m;
    }
    return agg;
}

std::vector<double> step_response(const StateSpace& ss, double t_end, double h) {
    const int steps = static_cast<int>(std::llround(t_end / h));
    Eigen::VectorXd x = Eigen::VectorXd::Zero(ss.order());
    const Eigen::VectorXd Bu = ss.order() > 0 ? Eigen::VectorXd(ss.B.col(0)) : Eigen::VectorXd(0);
    auto f = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd { return ss.A * z + Bu; };
    std::vector<double> y;
    y.reserve(steps + 1);
    for (int k = 0; k <= steps; ++k) {
        y.push_back((ss.C * x)(0) + ss.D(0, 0));
        if (k == steps) break;
        Eigen::VectorXd k1 = f(x), k2 = f(x + 0.5 * h * k1), k3 = f(x + 0.5 * h * k2), k4 = f(x + h * k3);
        x += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return y;
}

}  // namespace nadir
