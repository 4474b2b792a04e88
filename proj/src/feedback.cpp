#include "relaynet/feedback.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "relaynet/optim.hpp"

namespace relaynet {

namespace {

double gamma_of(const Eigen::VectorXcd& h) { return h.squaredNorm(); }

}  // namespace

BitSelectionResult select_full_search(const Eigen::VectorXcd& bar_h) {
    const int r = static_cast<int>(bar_h.size());
    if (r < 1) throw std::invalid_argument("select_full_search: empty input");
    if (r > 24) throw std::invalid_argument("select_full_search: R > 24");

    // Gray-code walk over b with b_1 = +1: one sign flip per step keeps the
    // running sum sum_i b_i h_i up to date in O(1).
    Eigen::VectorXi b = Eigen::VectorXi::Ones(r);
    std::complex<double> acc = bar_h.sum();
    Eigen::VectorXi best_b = b;
    double best = std::norm(acc);
    const std::uint64_t count = 1ULL << (r - 1);
    for (std::uint64_t m = 1; m < count; ++m) {
        int bit = std::countr_zero(m) + 1;  // never flips index 0
        b(bit) = -b(bit);
        acc += 2.0 * static_cast<double>(b(bit)) * bar_h(bit);
        double obj = std::norm(acc);
        if (obj > best) {
            best = obj;
            best_b = b;
        }
    }
    BitSelectionResult out;
    out.b = best_b;
    out.objective = best;
    out.beta = best - gamma_of(bar_h);
    out.method = BitMethod::FullSearch;
    return out;
}

BitSelectionResult select_greedy(const Eigen::VectorXcd& h_eff) {
    const int r = static_cast<int>(h_eff.size());
    if (r < 1) throw std::invalid_argument("select_greedy: empty input");
    Eigen::VectorXi b(r);
    b(0) = 1;
    std::complex<double> tau = h_eff(0);
    for (int i = 1; i < r; ++i) {
        double proj = (std::conj(h_eff(i)) * tau).real();
        b(i) = proj < 0.0 ? -1 : 1;  // sign(0) = +1
        tau += static_cast<double>(b(i)) * h_eff(i);
    }
    BitSelectionResult out;
    out.b = b;
    out.objective = std::norm(tau);
    out.beta = out.objective - gamma_of(h_eff);
    out.method = BitMethod::Greedy;
    return out;
}

BitSelectionResult select_sdr(const Eigen::VectorXcd& bar_h, RngStream& rng,
                              int randomization_rounds) {
    // For real b, b^T Qbar b = b^T Re{Qbar} b, so the real part suffices.
    Eigen::MatrixXd qbar = (bar_h * bar_h.adjoint()).real();
    SdrSolution sol = solve_diag_one_sdp(qbar, randomization_rounds, rng);
    BitSelectionResult out;
    out.b = sol.b;
    out.objective = sol.objective;
    out.beta = sol.objective - gamma_of(bar_h);
    out.method = BitMethod::Sdr;
    return out;
}

BitSelectionResult select_pairs_greedy(const Eigen::VectorXcd& h) {
    const int r = static_cast<int>(h.size());
    if (r < 2 || r % 2 != 0)
        throw std::invalid_argument("select_pairs_greedy: need even length");
    const int k = r / 2;
    Eigen::VectorXi b(k);
    b(0) = 1;
    Eigen::Vector2cd tau(h(0), h(1));
    for (int i = 1; i < k; ++i) {
        Eigen::Vector2cd hi(h(2 * i), h(2 * i + 1));
        double proj = hi.dot(tau).real();  // Eigen dot conjugates the left arg
        b(i) = proj < 0.0 ? -1 : 1;
        tau += static_cast<double>(b(i)) * hi;
    }
    BitSelectionResult out;
    out.b = b;
    out.objective = tau.squaredNorm();
    out.beta = out.objective - gamma_of(h);
    out.method = BitMethod::Greedy;
    return out;
}

BitSelectionResult select_pairs_sdr(const Eigen::MatrixXcd& f_pairs,
                                    RngStream& rng, int randomization_rounds) {
    if (f_pairs.rows() != 2 || f_pairs.cols() < 1)
        throw std::invalid_argument("select_pairs_sdr: F must be 2 x K");
    Eigen::MatrixXd qbar = (f_pairs.adjoint() * f_pairs).real();
    SdrSolution sol = solve_diag_one_sdp(qbar, randomization_rounds, rng);
    BitSelectionResult out;
    out.b = sol.b;
    out.objective = sol.objective;
    out.beta = sol.objective - f_pairs.squaredNorm();
    out.method = BitMethod::Sdr;
    return out;
}

}  // namespace relaynet
