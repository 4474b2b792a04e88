#include "relaynet/powerload.hpp"

#include <stdexcept>

namespace relaynet {

namespace {

// E{f_i f_j^*}: (mu_i mu_j^* + delta_ij var_i)
std::complex<double> pair_moment(std::complex<double> mu_i,
                                 std::complex<double> mu_j, double var_i,
                                 bool same) {
    return mu_i * std::conj(mu_j) + (same ? var_i : 0.0);
}

// E{h_i h_j^*} for equivalent channels, with the f factor conjugated when
// the relay sits in the even slot of its Alamouti pair.
std::complex<double> h_moment(const ChannelStats& stats, int i, int j,
                              bool conj_f) {
    std::complex<double> ef;
    if (conj_f)
        ef = std::conj(pair_moment(stats.mu_f(i), stats.mu_f(j), stats.var_f(i),
                                   i == j));
    else
        ef = pair_moment(stats.mu_f(i), stats.mu_f(j), stats.var_f(i), i == j);
    return ef * pair_moment(stats.mu_g(i), stats.mu_g(j), stats.var_g(i), i == j);
}

double w_entry(const ChannelStats& stats, const PowerProfile& profile, int i) {
    return stats.m_g(i) * profile.p_relay(i + 1) /
           (stats.m_f(i) * profile.p0() + 1.0);
}

}  // namespace

LoadingMatrices build_scalar_matrices(const ChannelStats& stats,
                                      const PowerProfile& profile) {
    const int r = stats.size();
    LoadingMatrices out;
    out.scheme = LoadingScheme::Scalar;
    out.q.resize(r, r);
    out.w.resize(r);
    for (int i = 0; i < r; ++i) {
        out.w(i) = w_entry(stats, profile, i);
        for (int j = 0; j < r; ++j) {
            out.q(i, j) = rho(i + 1, j + 1, profile, stats) *
                          std::abs(h_moment(stats, i, j, false).real());
        }
    }
    return out;
}

LoadingMatrices build_alamouti_matrices(const ChannelStats& stats,
                                        const PowerProfile& profile) {
    const int r = stats.size();
    if (r % 2 != 0)
        throw std::invalid_argument("build_alamouti_matrices: R must be even");
    const int k = r / 2;
    LoadingMatrices out;
    out.scheme = LoadingScheme::AlamoutiPairs;
    out.q.resize(k, k);
    out.w.resize(k);
    for (int i = 0; i < k; ++i) {
        out.w(i) = w_entry(stats, profile, 2 * i) + w_entry(stats, profile, 2 * i + 1);
        for (int j = 0; j < k; ++j) {
            std::complex<double> odd =
                rho(2 * i + 1, 2 * j + 1, profile, stats) *
                h_moment(stats, 2 * i, 2 * j, false);
            std::complex<double> even =
                rho(2 * i + 2, 2 * j + 2, profile, stats) *
                h_moment(stats, 2 * i + 1, 2 * j + 1, true);
            out.q(i, j) = std::abs((odd + even).real());
        }
    }
    return out;
}

Eigen::VectorXd optimize_loading(const LoadingMatrices& mats, double theta_bar,
                                 double epsilon, RngStream& rng) {
    if (theta_bar < 0.0 || theta_bar > 1.0)
        throw std::invalid_argument("optimize_loading: theta_bar in [0,1]");
    const int n = static_cast<int>(mats.q.rows());
    Eigen::VectorXd tb = Eigen::VectorXd::Constant(n, theta_bar);
    return bisection_max_snr(mats.q, mats.w, tb, epsilon, rng).theta;
}

}  // namespace relaynet
