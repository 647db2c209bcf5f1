#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace nadir {

enum class VarBound { Free, NonNegative };
enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

std::string to_string(LpStatus s);

// Dense LP:  opt c'x  s.t.  A_eq x = b_eq,  A_ub x <= b_ub,  x_j >= 0 where bounds[j] is NonNegative.
struct LinearProgram {
    bool maximize = true;
    Eigen::VectorXd c;
    std::vector<VarBound> bounds;
    Eigen::MatrixXd A_eq;
    Eigen::VectorXd b_eq;
    Eigen::MatrixXd A_ub;
    Eigen::VectorXd b_ub;

    explicit LinearProgram(int n = 0);
    int num_vars() const { return static_cast<int>(c.size()); }
    int num_eq() const { return static_cast<int>(A_eq.rows()); }
    int num_ub() const { return static_cast<int>(A_ub.rows()); }
    void validate() const;
};

struct LpOptions {
    int max_iterations = 100000;
    double feas_tol = 1e-9;
    double opt_tol = 1e-11;
};

struct LpSolution {
    LpStatus status = LpStatus::IterationLimit;
    Eigen::VectorXd x;
    double objective = 0.0;
    // Multipliers of the minimisation form  min s c'x  (s = -1 when maximising):
    // s c + A_eq' y_eq + A_ub' y_ub - z = 0, y_ub >= 0, z >= 0 on bounded columns.
    Eigen::VectorXd y_eq, y_ub, z;
    // Infeasible: (w_eq, w_ub >= 0) with A'w = 0 on free columns, >= 0 on bounded ones, b'w < 0.
    // Unbounded: a feasible ray along which the objective improves without limit.
    Eigen::VectorXd certificate_eq, certificate_ub, ray;
    int iterations = 0;
    int eliminated = 0;  // variables removed by the equality presolve
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double complementarity = 0.0;
    double duality_gap = 0.0;
};

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opt = {});

}  // namespace nadir
