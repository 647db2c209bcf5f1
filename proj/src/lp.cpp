#include "nadir/lp.hpp"

#include "nadir/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nadir {

std::string to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
        case LpStatus::IterationLimit: return "iteration_limit";
    }
    return "unknown";
}

LinearProgram::LinearProgram(int n)
    : c(Eigen::VectorXd::Zero(n)),
      bounds(n, VarBound::Free),
      A_eq(0, n),
      b_eq(0),
      A_ub(0, n),
      b_ub(0) {}

void LinearProgram::validate() const {
    const int n = num_vars();
    if (static_cast<int>(bounds.size()) != n) throw ParameterError("lp: bounds size mismatch");
    if (A_eq.cols() != n || A_ub.cols() != n) throw ParameterError("lp: column count mismatch");
    if (A_eq.rows() != b_eq.size() || A_ub.rows() != b_ub.size()) throw ParameterError("lp: row count mismatch");
    if (!c.allFinite() || !A_eq.allFinite() || !A_ub.allFinite() || !b_eq.allFinite() || !b_ub.allFinite())
        throw ParameterError("lp: non-finite coefficient");
}

namespace {

struct Simplex {
    Eigen::MatrixXd A;  // m x n, b >= 0
    Eigen::VectorXd b;
    std::vector<int> basis;
    int iterations = 0;
    Eigen::VectorXd ray_dir;
    int ray_col = -1;

    // min c'x over {Ax = b, x >= 0}; columns in `blocked` may not enter
    LpStatus run(const Eigen::VectorXd& c, const std::vector<bool>& blocked, const LpOptions& opt, int& budget) {
        const int m = static_cast<int>(A.rows());
        const int n = static_cast<int>(A.cols());
        const double cscale = std::max(1.0, c.lpNorm<Eigen::Infinity>());
        std::vector<bool> in_basis(n, false);
        for (;;) {
            std::fill(in_basis.begin(), in_basis.end(), false);
            for (int j : basis) in_basis[j] = true;
            if (m == 0) {
                for (int j = 0; j < n; ++j)
                    if (!blocked[j] && c(j) < -opt.opt_tol * cscale) {
                        ray_col = j;
                        ray_dir = Eigen::VectorXd(0);
                        return LpStatus::Unbounded;
                    }
                return LpStatus::Optimal;
            }
            Eigen::MatrixXd B(m, m);
            Eigen::VectorXd cB(m);
            for (int i = 0; i < m; ++i) {
                B.col(i) = A.col(basis[i]);
                cB(i) = c(basis[i]);
            }
            Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
            const Eigen::VectorXd xB = lu.solve(b);
            const Eigen::VectorXd y = lu.transpose().solve(cB);
            int enter = -1;
            for (int j = 0; j < n; ++j) {
                if (in_basis[j] || blocked[j]) continue;
                const double d = c(j) - A.col(j).dot(y);
                if (d < -opt.opt_tol * cscale) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return LpStatus::Optimal;
            if (budget-- <= 0) return LpStatus::IterationLimit;
            ++iterations;
            const Eigen::VectorXd u = lu.solve(A.col(enter));
            int leave = -1;
            double best = std::numeric_limits<double>::infinity();
            const double utol = 1e-11 * std::max(1.0, u.lpNorm<Eigen::Infinity>());
            for (int i = 0; i < m; ++i) {
                if (u(i) <= utol) continue;
                const double r = std::max(0.0, xB(i)) / u(i);
                if (leave < 0 || r < best - 1e-14 * std::max(1.0, best) ||
                    (std::abs(r - best) <= 1e-14 * std::max(1.0, best) && basis[i] < basis[leave])) {
                    best = r;
                    leave = i;
                }
            }
            if (leave < 0) {
                ray_col = enter;
                ray_dir = u;
                return LpStatus::Unbounded;
            }
            basis[leave] = enter;
        }
    }

    Eigen::VectorXd primal() const {
        const int m = static_cast<int>(A.rows());
        Eigen::VectorXd x = Eigen::VectorXd::Zero(A.cols());
        if (m == 0) return x;
        Eigen::MatrixXd B(m, m);
        for (int i = 0; i < m; ++i) B.col(i) = A.col(basis[i]);
        const Eigen::VectorXd xB = B.partialPivLu().solve(b);
        for (int i = 0; i < m; ++i) x(basis[i]) = xB(i);
        return x;
    }

    Eigen::VectorXd duals(const Eigen::VectorXd& c) const {
        const int m = static_cast<int>(A.rows());
        if (m == 0) return Eigen::VectorXd(0);
        Eigen::MatrixXd B(m, m);
        Eigen::VectorXd cB(m);
        for (int i = 0; i < m; ++i) {
            B.col(i) = A.col(basis[i]);
            cB(i) = c(basis[i]);
        }
        return B.partialPivLu().transpose().solve(cB);
    }
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opt) {
    lp.validate();
    const int n = lp.num_vars();
    const int me = lp.num_eq();
    const int mu = lp.num_ub();
    const double sense = lp.maximize ? -1.0 : 1.0;
    const Eigen::VectorXd cmin = sense * lp.c;

    LpSolution sol;

    // Presolve: eliminate free variables through the equality rows.
    std::vector<int> free_cols, pos_cols;
    for (int j = 0; j < n; ++j) (lp.bounds[j] == VarBound::Free ? free_cols : pos_cols).push_back(j);
    const int nf = static_cast<int>(free_cols.size());

    std::vector<int> piv_rows, piv_cols, rem_rows;
    int rank = 0;
    Eigen::MatrixXd Minv;
    if (me > 0 && nf > 0) {
        Eigen::MatrixXd AF(me, nf);
        for (int k = 0; k < nf; ++k) AF.col(k) = lp.A_eq.col(free_cols[k]);
        Eigen::FullPivLU<Eigen::MatrixXd> flu(AF);
        flu.setThreshold(1e-12);
        rank = static_cast<int>(flu.rank());
        const auto& P = flu.permutationP();
        const auto& Q = flu.permutationQ();
        std::vector<int> row_order(me), col_order(nf);
        // P * AF * Q = LU: row i of PA is row P^-1(i) of A
        Eigen::VectorXi pinv(me);
        for (int i = 0; i < me; ++i) pinv(P.indices()(i)) = i;
        for (int i = 0; i < me; ++i) row_order[i] = pinv(i);
        for (int k = 0; k < nf; ++k) col_order[k] = Q.indices()(k);
        for (int i = 0; i < rank; ++i) piv_rows.push_back(row_order[i]);
        for (int i = rank; i < me; ++i) rem_rows.push_back(row_order[i]);
        for (int k = 0; k < rank; ++k) piv_cols.push_back(free_cols[col_order[k]]);
        std::sort(rem_rows.begin(), rem_rows.end());
        Eigen::MatrixXd M(rank, rank);
        for (int i = 0; i < rank; ++i)
            for (int k = 0; k < rank; ++k) M(i, k) = lp.A_eq(piv_rows[i], piv_cols[k]);
        Minv = M.fullPivLu().inverse();
    } else {
        for (int i = 0; i < me; ++i) rem_rows.push_back(i);
    }
    sol.eliminated = rank;

    std::vector<bool> is_piv_col(n, false);
    for (int j : piv_cols) is_piv_col[j] = true;
    std::vector<int> ycols;  // original index of each reduced variable
    for (int j = 0; j < n; ++j)
        if (!is_piv_col[j]) ycols.push_back(j);
    const int ny = static_cast<int>(ycols.size());

    // x = x0 + T y
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, ny);
    if (rank > 0) {
        Eigen::VectorXd bR(rank);
        for (int i = 0; i < rank; ++i) bR(i) = lp.b_eq(piv_rows[i]);
        const Eigen::VectorXd xB = Minv * bR;
        for (int k = 0; k < rank; ++k) x0(piv_cols[k]) = xB(k);
    }
    for (int j = 0; j < ny; ++j) {
        const int o = ycols[j];
        T(o, j) = 1.0;
        if (rank > 0) {
            Eigen::VectorXd a(rank);
            for (int i = 0; i < rank; ++i) a(i) = lp.A_eq(piv_rows[i], o);
            const Eigen::VectorXd t = -Minv * a;
            for (int k = 0; k < rank; ++k) T(piv_cols[k], j) = t(k);
        }
    }

    // Row maps from reduced equality rows back to original equality rows.
    const int mr = static_cast<int>(rem_rows.size());
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(mr, me);
    for (int i = 0; i < mr; ++i) {
        G(i, rem_rows[i]) = 1.0;
        if (rank > 0) {
            Eigen::RowVectorXd a(rank);
            for (int k = 0; k < rank; ++k) a(k) = lp.A_eq(rem_rows[i], piv_cols[k]);
            const Eigen::RowVectorXd w = -a * Minv;
            for (int k = 0; k < rank; ++k) G(i, piv_rows[k]) += w(k);
        }
    }
    Eigen::MatrixXd Ar = G * lp.A_eq * T;
    Eigen::VectorXd br = G * (lp.b_eq - lp.A_eq * x0);
    Eigen::MatrixXd Aur = lp.A_ub * T;
    Eigen::VectorXd bur = lp.b_ub - lp.A_ub * x0;
    Eigen::VectorXd cr = T.transpose() * cmin;

    // Drop reduced equality rows that vanished identically and are consistent.
    std::vector<int> keep_eq;
    for (int i = 0; i < mr; ++i) {
        const double scale = std::max(1.0, lp.A_eq.row(rem_rows[i]).lpNorm<Eigen::Infinity>());
        if (Ar.row(i).lpNorm<Eigen::Infinity>() <= 1e-11 * scale && std::abs(br(i)) <= 1e-9 * std::max(1.0, std::abs(lp.b_eq(rem_rows[i]))))
            continue;
        keep_eq.push_back(i);
    }
    const int mk = static_cast<int>(keep_eq.size());

    // Standard form columns: [y+ (free) | y- (free) | y (bounded) | slacks | artificials]
    std::vector<int> yfree, ypos;
    for (int j = 0; j < ny; ++j) (lp.bounds[ycols[j]] == VarBound::Free ? yfree : ypos).push_back(j);
    const int nfr = static_cast<int>(yfree.size()), nps = static_cast<int>(ypos.size());
    const int m = mk + mu;
    const int nstruct = 2 * nfr + nps + mu;

    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(m, nstruct);
    Eigen::VectorXd sb(m);
    Eigen::VectorXd sc = Eigen::VectorXd::Zero(nstruct);
    std::vector<double> sigma(m, 1.0);
    auto fill_row = [&](int r, const Eigen::RowVectorXd& a, double rhs) {
        for (int k = 0; k < nfr; ++k) {
            S(r, k) = a(yfree[k]);
            S(r, nfr + k) = -a(yfree[k]);
        }
        for (int k = 0; k < nps; ++k) S(r, 2 * nfr + k) = a(ypos[k]);
        sb(r) = rhs;
    };
    for (int i = 0; i < mk; ++i) fill_row(i, Ar.row(keep_eq[i]), br(keep_eq[i]));
    for (int i = 0; i < mu; ++i) {
        fill_row(mk + i, Aur.row(i), bur(i));
        S(mk + i, 2 * nfr + nps + i) = 1.0;
    }
    for (int k = 0; k < nfr; ++k) {
        sc(k) = cr(yfree[k]);
        sc(nfr + k) = -cr(yfree[k]);
    }
    for (int k = 0; k < nps; ++k) sc(2 * nfr + k) = cr(ypos[k]);
    for (int r = 0; r < m; ++r)
        if (sb(r) < 0) {
            S.row(r) *= -1.0;
            sb(r) *= -1.0;
            sigma[r] = -1.0;
        }

    Simplex spx;
    std::vector<int> art_rows;
    spx.basis.assign(m, -1);
    for (int i = 0; i < mu; ++i)
        if (sigma[mk + i] > 0) spx.basis[mk + i] = 2 * nfr + nps + i;
    for (int r = 0; r < m; ++r)
        if (spx.basis[r] < 0) art_rows.push_back(r);
    const int na = static_cast<int>(art_rows.size());
    spx.A = Eigen::MatrixXd::Zero(m, nstruct + na);
    spx.A.leftCols(nstruct) = S;
    spx.b = sb;
    for (int a = 0; a < na; ++a) {
        spx.A(art_rows[a], nstruct + a) = 1.0;
        spx.basis[art_rows[a]] = nstruct + a;
    }

    int budget = opt.max_iterations;
    auto finish_residuals = [&](LpSolution& s) {
        s.primal_residual = 0.0;
        if (me) s.primal_residual = (lp.A_eq * s.x - lp.b_eq).lpNorm<Eigen::Infinity>();
        for (int i = 0; i < mu; ++i) s.primal_residual = std::max(s.primal_residual, lp.A_ub.row(i).dot(s.x) - lp.b_ub(i));
        for (int j = 0; j < n; ++j)
            if (lp.bounds[j] == VarBound::NonNegative) s.primal_residual = std::max(s.primal_residual, -s.x(j));
    };

    if (na > 0) {
        Eigen::VectorXd c1 = Eigen::VectorXd::Zero(nstruct + na);
        c1.tail(na).setOnes();
        std::vector<bool> blocked(nstruct + na, false);
        auto st = spx.run(c1, blocked, opt, budget);
        if (st == LpStatus::IterationLimit) {
            sol.status = st;
            sol.iterations = spx.iterations;
            return sol;
        }
        const Eigen::VectorXd xs = spx.primal();
        const double infeas = xs.tail(na).sum();
        if (infeas > opt.feas_tol * std::max(1.0, sb.lpNorm<Eigen::Infinity>())) {
            sol.status = LpStatus::Infeasible;
            sol.iterations = spx.iterations;
            const Eigen::VectorXd ys = spx.duals(c1);
            // w = -sigma * y in reduced rows, then mapped to the original rows
            Eigen::VectorXd wr(mk), wu(mu);
            for (int i = 0; i < mk; ++i) wr(i) = -sigma[i] * ys(i);
            for (int i = 0; i < mu; ++i) wu(i) = -sigma[mk + i] * ys(mk + i);
            Eigen::VectorXd wred = Eigen::VectorXd::Zero(mr);
            for (int i = 0; i < mk; ++i) wred(keep_eq[i]) = wr(i);
            sol.certificate_eq = G.transpose() * wred;
            sol.certificate_ub = wu;
            return sol;
        }
        // drive remaining artificials out of the basis, dropping redundant rows
        for (int r = 0; r < static_cast<int>(spx.basis.size());) {
            if (spx.basis[r] < nstruct) { ++r; continue; }
            const int mm = static_cast<int>(spx.A.rows());
            Eigen::MatrixXd B(mm, mm);
            for (int i = 0; i < mm; ++i) B.col(i) = spx.A.col(spx.basis[i]);
            Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
            Eigen::VectorXd er = Eigen::VectorXd::Zero(mm);
            er(r) = 1.0;
            const Eigen::VectorXd rowinv = lu.transpose().solve(er);
            std::vector<bool> inb(spx.A.cols(), false);
            for (int j : spx.basis) inb[j] = true;
            int pick = -1;
            for (int j = 0; j < nstruct; ++j) {
                if (inb[j]) continue;
                if (std::abs(rowinv.dot(spx.A.col(j))) > 1e-9) { pick = j; break; }
            }
            if (pick >= 0) {
                spx.basis[r] = pick;
                ++r;
            } else {
                Eigen::MatrixXd A2(mm - 1, spx.A.cols());
                Eigen::VectorXd b2(mm - 1);
                for (int i = 0, k = 0; i < mm; ++i) {
                    if (i == r) continue;
                    A2.row(k) = spx.A.row(i);
                    b2(k) = spx.b(i);
                    ++k;
                }
                spx.A = A2;
                spx.b = b2;
                spx.basis.erase(spx.basis.begin() + r);
            }
        }
        spx.A.conservativeResize(Eigen::NoChange, nstruct);
    }

    std::vector<bool> blocked(nstruct, false);
    auto st = spx.run(sc, blocked, opt, budget);
    sol.iterations = spx.iterations;
    if (st != LpStatus::Optimal) {
        sol.status = st;
        if (st == LpStatus::Unbounded) {
            // ray in standard space: entering column +1, basics -u
            Eigen::VectorXd d = Eigen::VectorXd::Zero(nstruct);
            d(spx.ray_col) = 1.0;
            for (int i = 0; i < static_cast<int>(spx.basis.size()) && i < spx.ray_dir.size(); ++i)
                d(spx.basis[i]) -= spx.ray_dir(i);
            Eigen::VectorXd dy = Eigen::VectorXd::Zero(ny);
            for (int k = 0; k < nfr; ++k) dy(yfree[k]) = d(k) - d(nfr + k);
            for (int k = 0; k < nps; ++k) dy(ypos[k]) = d(2 * nfr + k);
            sol.ray = T * dy;
        }
        return sol;
    }

    const Eigen::VectorXd xs = spx.primal();
    Eigen::VectorXd yv = Eigen::VectorXd::Zero(ny);
    for (int k = 0; k < nfr; ++k) yv(yfree[k]) = xs(k) - xs(nfr + k);
    for (int k = 0; k < nps; ++k) yv(ypos[k]) = xs(2 * nfr + k);
    sol.x = x0 + T * yv;
    for (int j = 0; j < n; ++j)
        if (lp.bounds[j] == VarBound::NonNegative && sol.x(j) < 0 && sol.x(j) > -1e-12) sol.x(j) = 0.0;
    sol.objective = lp.c.dot(sol.x);
    sol.status = LpStatus::Optimal;
    finish_residuals(sol);

    // Inequality multipliers straight from the final basis; equality multipliers by least squares.
    sol.y_ub = Eigen::VectorXd::Zero(mu);
    if (mu > 0 && spx.A.rows() == m) {
        const Eigen::VectorXd ys = spx.duals(sc);
        for (int i = 0; i < mu; ++i) sol.y_ub(i) = std::max(0.0, -sigma[mk + i] * ys(mk + i));
    } else if (mu > 0) {
        // rows were dropped: solve the multiplier system directly
        std::vector<int> active;
        for (int i = 0; i < mu; ++i)
            if (lp.b_ub(i) - lp.A_ub.row(i).dot(sol.x) <= 1e-9 * std::max(1.0, std::abs(lp.b_ub(i)))) active.push_back(i);
        const int na2 = static_cast<int>(active.size());
        Eigen::MatrixXd Mx(n, me + na2);
        if (me) Mx.leftCols(me) = lp.A_eq.transpose();
        for (int k = 0; k < na2; ++k) Mx.col(me + k) = lp.A_ub.row(active[k]).transpose();
        const Eigen::VectorXd sy = Mx.completeOrthogonalDecomposition().solve(-cmin);
        for (int k = 0; k < na2; ++k) sol.y_ub(active[k]) = std::max(0.0, sy(me + k));
    }
    std::vector<int> tight;  // columns whose reduced cost must vanish
    for (int j = 0; j < n; ++j)
        if (lp.bounds[j] == VarBound::Free || sol.x(j) > 1e-9) tight.push_back(j);
    Eigen::VectorXd rhs_full = -(cmin + lp.A_ub.transpose() * sol.y_ub);
    sol.y_eq = Eigen::VectorXd::Zero(me);
    if (me > 0 && !tight.empty()) {
        Eigen::MatrixXd At(tight.size(), me);
        Eigen::VectorXd rt(tight.size());
        for (size_t k = 0; k < tight.size(); ++k) {
            At.row(static_cast<long>(k)) = lp.A_eq.col(tight[k]).transpose();
            rt(static_cast<long>(k)) = rhs_full(tight[k]);
        }
        sol.y_eq = At.completeOrthogonalDecomposition().solve(rt);
    }
    sol.z = cmin + lp.A_eq.transpose() * sol.y_eq + lp.A_ub.transpose() * sol.y_ub;
    const double cs = std::max(1.0, cmin.lpNorm<Eigen::Infinity>());
    sol.dual_residual = 0.0;
    sol.complementarity = 0.0;
    for (int j = 0; j < n; ++j) {
        if (lp.bounds[j] == VarBound::Free) {
            sol.dual_residual = std::max(sol.dual_residual, std::abs(sol.z(j)) / cs);
        } else {
            sol.dual_residual = std::max(sol.dual_residual, std::max(0.0, -sol.z(j)) / cs);
            sol.complementarity = std::max(sol.complementarity, std::abs(sol.z(j) * sol.x(j)) / cs);
        }
    }
    for (int i = 0; i < mu; ++i)
        sol.complementarity = std::max(sol.complementarity, std::abs(sol.y_ub(i) * (lp.b_ub(i) - lp.A_ub.row(i).dot(sol.x))) / cs);
    const double dual_obj = -(lp.b_eq.dot(sol.y_eq) + lp.b_ub.dot(sol.y_ub));
    sol.duality_gap = std::abs(cmin.dot(sol.x) - dual_obj) / std::max(1.0, std::abs(cmin.dot(sol.x)));
    return sol;
}

}  // namespace nadir
