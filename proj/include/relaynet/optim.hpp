#pragma once

#include <Eigen/Dense>

#include "relaynet/rng.hpp"

namespace relaynet {

struct SdrSolution {
    Eigen::VectorXi b;         // +-1 entries, b(0) = +1
    double objective;          // b^T Qbar b
    double relaxation_bound;   // tr(B* Qbar) >= objective
};

// Maximize b^T Qbar b over b in {-1,+1}^n through the unit-diagonal
// semidefinite relaxation.  The relaxed problem is solved by low-rank
// factorization B = V V^T with unit-norm rows and block-coordinate ascent;
// a binary solution is recovered from the principal eigenvector (rank-one
// case) or by Gaussian randomization, followed by a 1-flip polish.
SdrSolution solve_diag_one_sdp(const Eigen::MatrixXd& qbar,
                               int randomization_rounds, RngStream& rng);

struct FeasibilityProblem {
    Eigen::MatrixXd q;             // symmetric, entrywise nonnegative
    Eigen::VectorXd w;             // diagonal of W, nonnegative
    double t = 0.0;                // candidate SNR level
    Eigen::VectorXd lower_bounds;  // theta_bar_i^2
    Eigen::VectorXd upper_bounds;  // ones
};

struct FeasibilityResult {
    bool feasible = false;
    Eigen::MatrixXd theta_matrix;  // witness when feasible
    double objective = 0.0;        // achieved max of tr(Theta (Q - t W))
};

// Feasibility test for: exists Theta >= 0 with lb_i <= Theta_ii <= ub_i and
// tr(Theta (Q - t W)) >= t.  Solved by maximizing the left side over the
// constraint set (Gram factorization, norm-bounded rows, coordinate ascent).
FeasibilityResult check_feasibility(const FeasibilityProblem& problem,
                                    RngStream& rng);

struct LoadingSolution {
    Eigen::VectorXd theta;  // in [theta_bar, 1] exactly
    double t_opt;           // last feasible bisection level
    double ratio;           // theta^T Q theta / (theta^T W theta + 1)
};

// Quasi-convex ratio maximization max theta^T Q theta / (theta^T W theta + 1)
// over the box [theta_bar_i, 1] via bisection over SDP feasibility.
LoadingSolution bisection_max_snr(const Eigen::MatrixXd& q,
                                  const Eigen::VectorXd& w,
                                  const Eigen::VectorXd& theta_bar,
                                  double epsilon, RngStream& rng);

// Aggregate-power variant: principal generalized eigenvector of
// (Q, W + (1/R) I) rescaled so theta^T theta = R.
Eigen::VectorXd aggregate_power_loading(const Eigen::MatrixXd& q,
                                        const Eigen::VectorXd& w, int num_relays);

double snr_ratio(const Eigen::MatrixXd& q, const Eigen::VectorXd& w,
                 const Eigen::VectorXd& theta);

}  // namespace relaynet
