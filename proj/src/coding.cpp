#include "relaynet/coding.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace relaynet {

Constellation qpsk() {
    const double a = 1.0 / std::sqrt(2.0);
    // Gray order: bits (b0, b1) -> ((1-2*b0) + i(1-2*b1))/sqrt(2)
    return {{a, a}, {a, -a}, {-a, a}, {-a, -a}};
}

int qpsk_index(std::complex<double> s) {
    int b0 = s.real() < 0.0 ? 1 : 0;
    int b1 = s.imag() < 0.0 ? 1 : 0;
    return 2 * b0 + b1;
}

int qpsk_bit_errors(int idx_a, int idx_b) {
    int x = idx_a ^ idx_b;
    return ((x >> 1) & 1) + (x & 1);
}

Eigen::VectorXcd alamouti_channel(const ChannelRealization& real) {
    const int r = real.size();
    if (r % 2 != 0)
        throw std::invalid_argument("alamouti_channel: R must be even");
    Eigen::VectorXcd h(r);
    for (int i = 0; i < r; ++i)
        h(i) = (i % 2 == 0) ? real.f(i) * real.g(i)
                            : std::conj(real.f(i)) * real.g(i);
    return h;
}

AlamoutiEquivalentChannel alamouti_equivalent(const ChannelRealization& real,
                                              const FeedbackState& state,
                                              const PowerProfile& profile,
                                              const ChannelStats& stats) {
    const int r = real.size();
    if (r % 2 != 0)
        throw std::invalid_argument("alamouti_equivalent: R must be even");
    const int k = r / 2;
    if (state.size() != k)
        throw std::invalid_argument("alamouti_equivalent: state must be per-pair");

    Eigen::VectorXcd h = alamouti_channel(real);
    Eigen::VectorXd p = power_vector(state, profile, stats);

    AlamoutiEquivalentChannel out;
    out.h_eq.setZero();
    out.gamma_a = 0.0;
    for (int i = 0; i < r; ++i) out.gamma_a += std::norm(p(i) * h(i));
    for (int kk = 0; kk < k; ++kk) {
        std::complex<double> po = p(2 * kk) * h(2 * kk);
        std::complex<double> pe = p(2 * kk + 1) * h(2 * kk + 1);
        out.h_eq(0, 0) += po;
        out.h_eq(0, 1) += -pe;
        out.h_eq(1, 0) += std::conj(pe);
        out.h_eq(1, 1) += std::conj(po);
    }
    // cross terms of the pair scheme
    out.beta_a = 0.0;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            if (i == j) continue;
            double odd = rho(2 * i + 1, 2 * j + 1, profile, stats) *
                         (h(2 * i) * std::conj(h(2 * j))).real();
            double even = rho(2 * i + 2, 2 * j + 2, profile, stats) *
                          (h(2 * i + 1) * std::conj(h(2 * j + 1))).real();
            out.beta_a += state.theta(i) * state.b(i) * state.theta(j) *
                          state.b(j) * (odd + even);
        }
    }
    return out;
}

std::pair<int, int> alamouti_ml_decode(const Eigen::Vector2cd& x,
                                       const AlamoutiEquivalentChannel& chan,
                                       const Constellation& constellation) {
    double gain = chan.gain();
    if (!(gain > 1e-300))
        throw std::runtime_error("alamouti_ml_decode: dead channel");
    Eigen::Vector2cd xb(x(0), std::conj(x(1)));
    Eigen::Vector2cd est = chan.h_eq.adjoint() * xb / gain;  // [s1, s2*]
    auto slice = [&](std::complex<double> v) {
        int best = 0;
        double bd = std::norm(v - constellation[0]);
        for (int c = 1; c < static_cast<int>(constellation.size()); ++c) {
            double d = std::norm(v - constellation[c]);
            if (d < bd) {
                bd = d;
                best = c;
            }
        }
        return best;
    };
    return {slice(est(0)), slice(std::conj(est(1)))};
}

int DifferentialScalarDecoder::decode(std::complex<double> x) {
    int best = 0;
    double bm = -std::numeric_limits<double>::infinity();
    std::complex<double> prod = x_prev_ * std::conj(x);
    for (int c = 0; c < static_cast<int>(constellation_.size()); ++c) {
        double m = (prod * constellation_[c]).real();
        if (m > bm) {
            bm = m;
            best = c;
        }
    }
    x_prev_ = x;
    return best;
}

Eigen::Vector2cd DifferentialAlamoutiEncoder::encode(std::complex<double> s1,
                                                     std::complex<double> s2) {
    const double a = 1.0 / std::sqrt(2.0);
    Eigen::Matrix2cd s;
    s << s1, -std::conj(s2), s2, std::conj(s1);
    u_ = (a * s * u_).eval();
    return u_;
}

std::pair<int, int> DifferentialAlamoutiDecoder::decode(
    const Eigen::Vector2cd& x) {
    // tr(M S_l) with M = x_{l-1} x_l^H is linear in s1 and s2 separately:
    // Re{(M11 + M22*) s1}/sqrt(2) + Re{(M12 - M21*) s2}/sqrt(2)
    Eigen::Matrix2cd m = x_prev_ * x.adjoint();
    std::complex<double> c1 = m(0, 0) + std::conj(m(1, 1));
    std::complex<double> c2 = m(0, 1) - std::conj(m(1, 0));
    auto pick = [&](std::complex<double> coef) {
        int best = 0;
        double bm = -std::numeric_limits<double>::infinity();
        for (int c = 0; c < static_cast<int>(constellation_.size()); ++c) {
            double v = (coef * constellation_[c]).real();
            if (v > bm) {
                bm = v;
                best = c;
            }
        }
        return best;
    };
    auto out = std::make_pair(pick(c1), pick(c2));
    x_prev_ = x;
    return out;
}

TrainingResult train_bits_sequential(LoadingScheme scheme,
                                     const ChannelRealization& real,
                                     const PowerProfile& profile,
                                     const ChannelStats& stats, RngStream& rng,
                                     bool noisy) {
    const int r = real.size();
    TrainingResult out;
    if (scheme == LoadingScheme::Scalar) {
        FeedbackState st = FeedbackState::all_ones(r);
        Eigen::VectorXcd u0(1);
        u0(0) = 1.0;
        auto rx_power = [&]() {
            return std::norm(
                simulate_two_hop(u0, real, st, profile, stats, rng, noisy)(0));
        };
        double prev = rx_power();
        for (int j = 1; j < r; ++j) {
            st.b(j) = -1;
            double cur = rx_power();
            if (cur > prev) {
                prev = cur;  // keep the flip
            } else {
                st.b(j) = 1;
            }
        }
        out.b = st.b;
        out.slots_used = 2 * r;
        return out;
    }

    if (r % 2 != 0)
        throw std::invalid_argument("train_bits_sequential: R must be even");
    const int k = r / 2;
    FeedbackState st = FeedbackState::all_ones(k);
    PowerProfile prof2 = profile.with_block_length(2);
    Eigen::VectorXcd u0(2);
    u0 << 1.0, 0.0;
    auto rx_power = [&]() {
        return simulate_two_hop(u0, real, st, prof2, stats, rng, noisy)
            .squaredNorm();
    };
    double prev = rx_power();
    for (int j = 1; j < k; ++j) {
        st.b(j) = -1;
        double cur = rx_power();
        if (cur >= prev) {  // the pair scheme keeps ties
            prev = cur;
        } else {
            st.b(j) = 1;
        }
    }
    out.b = st.b;
    out.slots_used = 3 * k + 1;
    return out;
}

}  // namespace relaynet
