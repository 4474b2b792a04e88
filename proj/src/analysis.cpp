#include "relaynet/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "relaynet/feedback.hpp"
#include "relaynet/powerload.hpp"

namespace relaynet {

MonteCarloEstimate chernoff_ser_mc(const ChannelStats& stats,
                                   const PowerProfile& profile,
                                   const FeedbackState& state,
                                   const BitSelector& select_bits, long trials,
                                   RngStream& rng, const BoundParams& params) {
    if (trials < 1) throw std::invalid_argument("chernoff_ser_mc: trials >= 1");
    const int r = stats.size();
    double sum = 0.0;
    double sum_sq = 0.0;
    for (long t = 0; t < trials; ++t) {
        ChannelRealization real = draw_realization(stats, rng);
        Eigen::VectorXcd w = weighted_channel(real, profile, stats);
        Eigen::VectorXcd wt = w.cwiseProduct(state.theta.cast<std::complex<double>>());
        Eigen::VectorXi b = select_bits(wt, rng);
        std::complex<double> acc = 0.0;
        for (int i = 0; i < r; ++i) acc += static_cast<double>(b(i)) * wt(i);
        double ps = std::norm(acc);
        double pw = noise_power(real, state, profile, stats);
        double v = 0.5 * params.c1 * std::exp(-0.5 * params.c2 * ps / pw);
        sum += v;
        sum_sq += v * v;
    }
    MonteCarloEstimate out;
    out.value = sum / trials;
    double var = std::max(0.0, sum_sq / trials - out.value * out.value);
    out.std_error = std::sqrt(var / trials);
    return out;
}

double closed_form_bound(const ChannelStats& stats, const PowerProfile& profile,
                         double p_total, const BoundParams& params) {
    if (!(p_total > std::exp(1.0)))
        throw std::invalid_argument("closed_form_bound: needs P > e");
    const int r = stats.size();
    const double p = p_total;

    double alpha = 0.0;
    for (int i = 0; i < r; ++i) {
        double v = profile.lambda(i + 1) * stats.m_g(i) /
                   (stats.m_f(i) * profile.lambda(0) + 1.0 / p);
        alpha = std::max(alpha, v);
    }

    double kappa = 0.5 * params.c1;
    double q_prod = 1.0;
    for (int i = 0; i < r; ++i) {
        double a_bar = params.c2 * stats.var_f(i) * profile.lambda(0) *
                       profile.lambda(i + 1) /
                       (2.0 * (stats.m_f(i) * profile.lambda(0) + 1.0 / p) *
                        (1.0 + r * alpha));
        kappa *= std::exp(-stats.phi_g(i)) / (a_bar * stats.var_g(i));
        // q_i = a_bar sigma_g^2 + sum_k phi^k / (k! k)
        double phi = stats.phi_g(i);
        double series = 0.0;
        if (phi > 0.0) {
            double term = phi;  // k = 1
            series = term;
            for (int k = 2; k < 500; ++k) {
                term *= phi / k;
                double add = term / k;
                series += add;
                if (add < 1e-12 * series) break;
            }
        }
        q_prod *= a_bar * stats.var_g(i) + series;
    }

    double lp = std::log(p);
    double exponent = -r * (1.0 - std::log(lp) / lp);
    return kappa * (std::pow(p, exponent) + q_prod * std::pow(p, -r));
}

ExpPsDiagnostic exp_ps_diagnostic(const ChannelStats& stats,
                                  const PowerProfile& profile, long trials,
                                  RngStream& rng) {
    const int r = stats.size();
    double acc = 0.0;
    for (long t = 0; t < trials; ++t) {
        ChannelRealization real = draw_realization(stats, rng);
        Eigen::VectorXcd w = weighted_channel(real, profile, stats);
        BitSelectionResult sel = select_sdr(w, rng);
        std::complex<double> s = 0.0;
        for (int i = 0; i < r; ++i) s += static_cast<double>(sel.b(i)) * w(i);
        acc += std::norm(s);
    }
    ExpPsDiagnostic out;
    out.exact_mc = acc / trials;
    out.approx = build_scalar_matrices(stats, profile).q.sum();
    return out;
}

}  // namespace relaynet
