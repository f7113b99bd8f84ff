#include "sweepout/lp.hpp"

#include "sweepout/common.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace sweepout {

namespace {

constexpr double kPivotTol = 1e-9;

// Tableau rows 0..m-1 are constraints, row m is the objective (reduced costs,
// maximization form: we pivot while some entry is negative).
struct Tableau {
    Eigen::MatrixXd T;
    std::vector<int> basis;
    int m = 0;
    int cols = 0;  // structural + slack + artificial columns

    void pivot(int r, int c)
    {
        T.row(r) /= T(r, c);
        for (int i = 0; i < T.rows(); ++i)
            if (i != r && T(i, c) != 0.0) T.row(i) -= T(i, c) * T.row(r);
        basis[r] = c;
    }

    // Runs Bland's rule on the objective row `obj` over columns < limit.
    // Returns false if unbounded.
    bool optimize(int obj, int limit)
    {
        for (int iter = 0; iter < 50000; ++iter) {
            int enter = -1;
            for (int j = 0; j < limit; ++j)
                if (T(obj, j) < -kPivotTol) {
                    enter = j;
                    break;
                }
            if (enter < 0) return true;
            int leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m; ++i) {
                if (T(i, enter) <= kPivotTol) continue;
                const double ratio = T(i, cols) / T(i, enter);
                if (ratio < best - 1e-12 || (std::abs(ratio - best) <= 1e-12 && leave >= 0 && basis[i] < basis[leave])) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
        throw ConvergenceError("simplex: iteration cap reached");
    }
};

}  // namespace

LpResult lp_maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A, const Eigen::VectorXd& b)
{
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    if (c.size() != n || b.size() != m) throw StructuralError("lp_maximize: dimension mismatch");

    // Columns: x+ (n), x- (n), slack (m), artificial (m), rhs.
    const int nx = 2 * n, ns = m, na = m;
    Tableau tab;
    tab.m = m;
    tab.cols = nx + ns + na;
    tab.T = Eigen::MatrixXd::Zero(m + 2, tab.cols + 1);
    tab.basis.assign(m, -1);
    const int obj = m, phase1 = m + 1;
    for (int i = 0; i < m; ++i) {
        const double sgn = b[i] < 0 ? -1.0 : 1.0;
        for (int j = 0; j < n; ++j) {
            tab.T(i, j) = sgn * A(i, j);
            tab.T(i, n + j) = -sgn * A(i, j);
        }
        tab.T(i, nx + i) = sgn;
        tab.T(i, tab.cols) = sgn * b[i];
        if (sgn > 0) {
            tab.basis[i] = nx + i;
        } else {
            tab.T(i, nx + ns + i) = 1.0;
            tab.basis[i] = nx + ns + i;
        }
    }
    for (int j = 0; j < n; ++j) {
        tab.T(obj, j) = -c[j];
        tab.T(obj, n + j) = c[j];
    }
    // Phase 1 objective: maximize -(sum of artificials), expressed in the basis.
    for (int i = 0; i < m; ++i) {
        if (tab.basis[i] < nx + ns) continue;
        tab.T(phase1, nx + ns + i) = 1.0;
        tab.T.row(phase1) -= tab.T.row(i);
    }
    LpResult res;
    tab.optimize(phase1, tab.cols);
    // The phase-1 value is -(sum of artificials), so feasibility means it reached zero.
    if (tab.T(phase1, tab.cols) < -1e-9 * (1.0 + b.cwiseAbs().maxCoeff())) {
        res.status = LpResult::Status::Infeasible;
        return res;
    }
    // Drive remaining artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
        if (tab.basis[i] < nx + ns) continue;
        for (int j = 0; j < nx + ns; ++j)
            if (std::abs(tab.T(i, j)) > kPivotTol) {
                tab.pivot(i, j);
                break;
            }
    }
    if (!tab.optimize(obj, nx + ns)) {
        res.status = LpResult::Status::Unbounded;
        return res;
    }
    res.status = LpResult::Status::Optimal;
    res.x = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < m; ++i) {
        const int bcol = tab.basis[i];
        if (bcol < n)
            res.x[bcol] += tab.T(i, tab.cols);
        else if (bcol < nx)
            res.x[bcol - n] -= tab.T(i, tab.cols);
    }
    res.value = c.dot(res.x);
    return res;
}

}  // namespace sweepout
