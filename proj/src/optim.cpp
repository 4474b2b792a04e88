#include "relaynet/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace relaynet {

namespace {

double sign_pm(double x) { return x < 0.0 ? -1.0 : 1.0; }  // sign(0) = +1

// Block-coordinate ascent on tr(Q V V^T) over unit-norm rows of V.
// Returns the achieved relaxed objective.
double bcd_unit_rows(const Eigen::MatrixXd& q, Eigen::MatrixXd& v,
                     int max_sweeps = 300) {
    const int n = static_cast<int>(q.rows());
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double max_change = 0.0;
        for (int i = 0; i < n; ++i) {
            Eigen::VectorXd g = v.transpose() * q.col(i) - q(i, i) * v.row(i).transpose();
            double norm = g.norm();
            if (norm < 1e-14) continue;
            g /= norm;
            max_change = std::max(max_change, (g - v.row(i).transpose()).norm());
            v.row(i) = g.transpose();
        }
        if (max_change < 1e-10) break;
    }
    return (q * (v * v.transpose())).trace();
}

double binary_objective(const Eigen::MatrixXd& q, const Eigen::VectorXd& b) {
    return b.dot(q * b);
}

// One pass of greedy single-bit flips.
void one_flip_polish(const Eigen::MatrixXd& q, Eigen::VectorXd& b) {
    const int n = static_cast<int>(q.rows());
    Eigen::VectorXd qb = q * b;
    for (int i = 0; i < n; ++i) {
        double delta = -4.0 * b(i) * (qb(i) - q(i, i) * b(i));
        if (delta > 1e-12) {
            qb -= 2.0 * b(i) * q.col(i);
            b(i) = -b(i);
        }
    }
}

void require_symmetric(const Eigen::MatrixXd& q) {
    double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
    if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
        throw std::invalid_argument("solve_diag_one_sdp: matrix not symmetric");
}

}  // namespace

SdrSolution solve_diag_one_sdp(const Eigen::MatrixXd& qbar,
                               int randomization_rounds, RngStream& rng) {
    const int n = static_cast<int>(qbar.rows());
    if (n < 1 || qbar.cols() != n)
        throw std::invalid_argument("solve_diag_one_sdp: bad dimensions");
    require_symmetric(qbar);

    SdrSolution out;
    if (n == 1) {
        out.b = Eigen::VectorXi::Ones(1);
        out.objective = qbar(0, 0);
        out.relaxation_bound = qbar(0, 0);
        return out;
    }

    const int k = std::min(n, static_cast<int>(std::ceil(std::sqrt(2.0 * n))) + 1);
    double best_relaxed = -std::numeric_limits<double>::infinity();
    Eigen::MatrixXd best_v;
    for (int restart = 0; restart < 2; ++restart) {
        Eigen::MatrixXd v(n, k);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < k; ++j) v(i, j) = rng.normal();
        v.rowwise().normalize();
        double relaxed = bcd_unit_rows(qbar, v);
        if (relaxed > best_relaxed) {
            best_relaxed = relaxed;
            best_v = v;
        }
    }

    Eigen::MatrixXd bstar = best_v * best_v.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(bstar);
    const Eigen::VectorXd& evals = es.eigenvalues();
    double eig_sum = std::max(evals.sum(), 1e-300);
    double eig_max = evals(n - 1);

    Eigen::VectorXd best_b(n);
    for (int i = 0; i < n; ++i) best_b(i) = sign_pm(es.eigenvectors()(i, n - 1));
    double best_obj = binary_objective(qbar, best_b);

    if (eig_max / eig_sum <= 1.0 - 1e-8) {
        // Gaussian randomization: xi ~ N(0, B*), candidate b = sign(xi)
        Eigen::MatrixXd s = es.eigenvectors() *
                            evals.cwiseMax(0.0).cwiseSqrt().asDiagonal();
        Eigen::VectorXd z(n), cand(n);
        for (int round = 0; round < randomization_rounds; ++round) {
            for (int i = 0; i < n; ++i) z(i) = rng.normal();
            Eigen::VectorXd xi = s * z;
            for (int i = 0; i < n; ++i) cand(i) = sign_pm(xi(i));
            double obj = binary_objective(qbar, cand);
            if (obj > best_obj) {
                best_obj = obj;
                best_b = cand;
            }
        }
    }

    one_flip_polish(qbar, best_b);
    best_obj = binary_objective(qbar, best_b);

    // The factorization is ascent-based, so re-ascend from the binary point
    // when it beats the relaxed value; tr(B* Qbar) then dominates b^T Qbar b.
    if (best_obj > best_relaxed) {
        Eigen::MatrixXd v(n, k);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < k; ++j) v(i, j) = 1e-4 * rng.normal();
        v.col(0) = best_b;
        v.rowwise().normalize();
        best_relaxed = std::max(best_relaxed, bcd_unit_rows(qbar, v));
    }

    if (best_b(0) < 0) best_b = -best_b;
    out.b = best_b.cast<int>();
    out.objective = best_obj;
    out.relaxation_bound = best_relaxed;
    return out;
}

FeasibilityResult check_feasibility(const FeasibilityProblem& problem,
                                    RngStream& rng) {
    const int n = static_cast<int>(problem.q.rows());
    if (problem.w.size() != n || problem.lower_bounds.size() != n ||
        problem.upper_bounds.size() != n)
        throw std::invalid_argument("check_feasibility: bad dimensions");
    for (int i = 0; i < n; ++i) {
        if (problem.w(i) < 0.0 || problem.lower_bounds(i) < 0.0 ||
            problem.lower_bounds(i) > problem.upper_bounds(i))
            throw std::invalid_argument("check_feasibility: bad bounds");
    }

    Eigen::MatrixXd m = problem.q;
    m.diagonal() -= problem.t * problem.w;
    Eigen::VectorXd rmin = problem.lower_bounds.cwiseSqrt();
    Eigen::VectorXd rmax = problem.upper_bounds.cwiseSqrt();

    const int k = n;  // full rank factorization
    auto ascend = [&](Eigen::MatrixXd& u) {
        for (int sweep = 0; sweep < 400; ++sweep) {
            double max_change = 0.0;
            for (int i = 0; i < n; ++i) {
                Eigen::VectorXd c = u.transpose() * m.col(i) - m(i, i) * u.row(i).transpose();
                double cn = c.norm();
                Eigen::VectorXd dir;
                if (cn > 1e-14) {
                    dir = c / cn;
                } else {
                    double un = u.row(i).norm();
                    dir = (un > 1e-14) ? (u.row(i).transpose() / un).eval()
                                       : Eigen::VectorXd::Unit(k, i % k).eval();
                }
                // maximize m_ii r^2 + 2 r cn over [rmin, rmax]
                double r;
                if (m(i, i) < 0.0) {
                    r = std::clamp(cn / (-m(i, i)), rmin(i), rmax(i));
                } else {
                    r = rmax(i);
                }
                // compare against lower endpoint explicitly
                auto val = [&](double rr) { return m(i, i) * rr * rr + 2.0 * rr * cn; };
                if (val(rmin(i)) > val(r)) r = rmin(i);
                Eigen::VectorXd nu = r * dir;
                max_change = std::max(max_change,
                                      (nu - u.row(i).transpose()).norm());
                u.row(i) = nu.transpose();
            }
            if (max_change < 1e-11) break;
        }
        return (m * (u * u.transpose())).trace();
    };

    double best_obj = -std::numeric_limits<double>::infinity();
    Eigen::MatrixXd best_u;
    for (int restart = 0; restart < 3; ++restart) {
        Eigen::MatrixXd u(n, k);
        if (restart == 0) {
            // Theta = diag(upper bounds)
            u.setZero();
            for (int i = 0; i < n; ++i) u(i, i) = rmax(i);
        } else if (restart == 1) {
            // fully aligned rows
            u.setZero();
            for (int i = 0; i < n; ++i) u(i, 0) = rmax(i);
        } else {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < k; ++j) u(i, j) = rng.normal();
            for (int i = 0; i < n; ++i) u.row(i) *= rmax(i) / u.row(i).norm();
        }
        double obj = ascend(u);
        if (obj > best_obj) {
            best_obj = obj;
            best_u = u;
        }
    }

    FeasibilityResult res;
    res.objective = best_obj;
    double tol = 1e-7 * std::max(1.0, std::abs(problem.t));
    res.feasible = best_obj >= problem.t - tol;
    if (res.feasible) res.theta_matrix = best_u * best_u.transpose();
    return res;
}

double snr_ratio(const Eigen::MatrixXd& q, const Eigen::VectorXd& w,
                 const Eigen::VectorXd& theta) {
    double num = theta.dot(q * theta);
    double den = theta.dot(w.cwiseProduct(theta)) + 1.0;
    return num / den;
}

LoadingSolution bisection_max_snr(const Eigen::MatrixXd& q,
                                  const Eigen::VectorXd& w,
                                  const Eigen::VectorXd& theta_bar,
                                  double epsilon, RngStream& rng) {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("bisection_max_snr: epsilon must be > 0");
    const int n = static_cast<int>(q.rows());
    if (w.size() != n || theta_bar.size() != n)
        throw std::invalid_argument("bisection_max_snr: bad dimensions");

    FeasibilityProblem prob;
    prob.q = q;
    prob.w = w;
    prob.lower_bounds = theta_bar.array().square().matrix();
    prob.upper_bounds = Eigen::VectorXd::Ones(n);

    double t_low = 0.0;  // Theta = diag(lb) is always a witness at t = 0
    double t_up = q.sum() + 1e-9;
    Eigen::MatrixXd witness =
        Eigen::MatrixXd(prob.lower_bounds.asDiagonal());
    while (t_up - t_low >= epsilon) {
        prob.t = 0.5 * (t_low + t_up);
        FeasibilityResult res = check_feasibility(prob, rng);
        if (res.feasible) {
            t_low = prob.t;
            witness = res.theta_matrix;
        } else {
            t_up = prob.t;
        }
    }

    auto clamp_box = [&](Eigen::VectorXd v) {
        for (int i = 0; i < n; ++i) v(i) = std::clamp(v(i), theta_bar(i), 1.0);
        return v;
    };

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(witness);
    double eig_sum = std::max(es.eigenvalues().sum(), 1e-300);
    double eig_max = es.eigenvalues()(n - 1);

    Eigen::VectorXd best = clamp_box(witness.diagonal().cwiseMax(0.0).cwiseSqrt());
    double best_ratio = snr_ratio(q, w, best);
    auto consider = [&](const Eigen::VectorXd& cand) {
        double r = snr_ratio(q, w, cand);
        if (r > best_ratio) {
            best_ratio = r;
            best = cand;
        }
    };
    consider(clamp_box(std::sqrt(std::max(eig_max, 0.0)) *
                       es.eigenvectors().col(n - 1).cwiseAbs()));
    consider(Eigen::VectorXd::Ones(n));
    consider(theta_bar);
    if (eig_max / eig_sum <= 1.0 - 1e-8) {
        Eigen::MatrixXd s = es.eigenvectors() *
                            es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
        Eigen::VectorXd z(n);
        for (int round = 0; round < 200; ++round) {
            for (int i = 0; i < n; ++i) z(i) = rng.normal();
            consider(clamp_box((s * z).cwiseAbs()));
        }
    }

    LoadingSolution out;
    out.theta = best;
    out.t_opt = t_low;
    out.ratio = best_ratio;
    return out;
}

Eigen::VectorXd aggregate_power_loading(const Eigen::MatrixXd& q,
                                        const Eigen::VectorXd& w,
                                        int num_relays) {
    const int n = static_cast<int>(q.rows());
    Eigen::MatrixXd denom = Eigen::MatrixXd(w.asDiagonal());
    denom.diagonal().array() += 1.0 / num_relays;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(q, denom);
    double lmax = es.eigenvalues()(n - 1);
    double tie_tol = 1e-9 * std::max(1.0, std::abs(lmax));

    // On a tied top eigenvalue, pick the eigenspace vector closest to
    // all-ones (deterministic tie-break).
    Eigen::VectorXd theta = es.eigenvectors().col(n - 1);
    Eigen::VectorXd proj = Eigen::VectorXd::Zero(n);
    for (int i = n - 1; i >= 0 && es.eigenvalues()(i) >= lmax - tie_tol; --i) {
        const Eigen::VectorXd& v = es.eigenvectors().col(i);
        proj += (v.dot(denom * Eigen::VectorXd::Ones(n))) * v;
    }
    if (proj.norm() > 1e-9) theta = proj;

    theta *= std::sqrt(static_cast<double>(num_relays)) / theta.norm();
    if (theta.sum() < 0.0) theta = -theta;
    return theta;
}

}  // namespace relaynet
