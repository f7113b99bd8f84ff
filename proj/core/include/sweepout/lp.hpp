#pragma once

#include <Eigen/Dense>

namespace sweepout {

struct LpResult {
    enum class Status { Optimal, Infeasible, Unbounded };
    Status status = Status::Infeasible;
    Eigen::VectorXd x;
    double value = 0.0;
};

// maximize c.x subject to A x <= b with x free. Dense two-phase simplex with
// Bland's rule, so the pivot sequence is deterministic.
LpResult lp_maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

}  // namespace sweepout
