#pragma once

#include <Eigen/Dense>

namespace nadir {

struct NodesWeights {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

NodesWeights legendre_gauss(int K);

double time_map(double tau, double t0, double tf);
double inverse_time_map(double t, double t0, double tf);

struct CollocationGrid {
    int K = 0;
    double t0 = 0.0, tf = 0.0;
    Eigen::VectorXd nodes;    // K interior Legendre-Gauss points
    Eigen::VectorXd weights;
    Eigen::VectorXd basis;    // {-1} U nodes
    Eigen::MatrixXd D;        // K x (K+1)

    double half_span() const { return 0.5 * (tf - t0); }
};

CollocationGrid make_grid(int K, double t0, double tf);
Eigen::VectorXd barycentric_weights(const Eigen::VectorXd& x);
Eigen::MatrixXd differentiation_matrix(const CollocationGrid& g);

// X_f = X_0 + (tf - t0)/2 * sum_k w_k f_k; f holds one column per node.
Eigen::VectorXd terminal_state(const Eigen::VectorXd& X0, const Eigen::MatrixXd& f, const CollocationGrid& g);

// State interpolant over the K+1 basis points, or control interpolant over the K nodes,
// chosen by the length of values.
double interpolate(const CollocationGrid& g, const Eigen::VectorXd& values, double t);

// Solves xdot = a x on the grid with x(t0) = x0; returns the K+1 basis values.
Eigen::VectorXd solve_scalar_lti(const CollocationGrid& g, double a, double x0);

}  // namespace nadir
