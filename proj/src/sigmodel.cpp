#include "relaynet/sigmodel.hpp"

#include <cmath>
#include <stdexcept>

namespace relaynet {

PowerProfile::PowerProfile(double p_total, Eigen::VectorXd lambda,
                           int block_length)
    : p_total_(p_total), lambda_(std::move(lambda)), block_length_(block_length) {
    if (!(p_total > 0.0))
        throw std::invalid_argument("PowerProfile: total power must be > 0");
    if (block_length != 1 && block_length != 2)
        throw std::invalid_argument("PowerProfile: block length must be 1 or 2");
    if (lambda_.size() < 2)
        throw std::invalid_argument("PowerProfile: need source + >= 1 relay");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < lambda_.size(); ++i) {
        if (lambda_(i) < 0.0)
            throw std::invalid_argument("PowerProfile: lambda must be >= 0");
        sum += lambda_(i);
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("PowerProfile: lambda must sum to 1");
}

PowerProfile PowerProfile::equal_split(int num_relays, double p_total,
                                       int block_length) {
    Eigen::VectorXd lambda =
        Eigen::VectorXd::Constant(num_relays + 1, 1.0 / (num_relays + 1));
    // remove accumulated rounding so the sum is exactly 1
    lambda(0) = 1.0 - lambda.tail(num_relays).sum();
    return PowerProfile(p_total, lambda, block_length);
}

PowerProfile PowerProfile::dstc_split(int num_relays, double p_total,
                                      int block_length) {
    Eigen::VectorXd lambda(num_relays + 1);
    lambda.tail(num_relays).setConstant(1.0 / (2.0 * num_relays));
    lambda(0) = 1.0 - lambda.tail(num_relays).sum();
    return PowerProfile(p_total, lambda, block_length);
}

FeedbackState FeedbackState::all_ones(int n) {
    FeedbackState s;
    s.b = Eigen::VectorXi::Ones(n);
    s.theta = Eigen::VectorXd::Ones(n);
    s.theta_bar = 0.0;
    return s;
}

void FeedbackState::validate() const {
    if (b.size() != theta.size())
        throw std::invalid_argument("FeedbackState: b/theta size mismatch");
    for (Eigen::Index i = 0; i < b.size(); ++i) {
        if (b(i) != 1 && b(i) != -1)
            throw std::invalid_argument("FeedbackState: b entries must be +-1");
        if (theta(i) < theta_bar - 1e-12 || theta(i) > 1.0 + 1e-12)
            throw std::invalid_argument(
                "FeedbackState: theta outside [theta_bar, 1]");
    }
}

namespace {
// sqrt(T P0 P_i / (m_{f_i} P0 + 1)), 1-based relay index; 1 for index 0
double rho_factor(int i, const PowerProfile& profile, const ChannelStats& stats) {
    if (i == 0) return 1.0;
    const double p0 = profile.p0();
    return std::sqrt(profile.block_length() * p0 * profile.p_relay(i) /
                     (stats.m_f(i - 1) * p0 + 1.0));
}

// relay amplification coefficient sqrt(P_i / (m_{f_i} P0 + 1)), 0-based i
double amp_coef(int i, const PowerProfile& profile, const ChannelStats& stats) {
    return std::sqrt(profile.p_relay(i + 1) /
                     (stats.m_f(i) * profile.p0() + 1.0));
}
}  // namespace

double rho(int i, int j, const PowerProfile& profile, const ChannelStats& stats) {
    const int r = profile.num_relays();
    if (i < 0 || i > r || j < 0 || j > r)
        throw std::out_of_range("rho: relay index out of range");
    return rho_factor(i, profile, stats) * rho_factor(j, profile, stats);
}

Eigen::VectorXcd weighted_channel(const ChannelRealization& real,
                                  const PowerProfile& profile,
                                  const ChannelStats& stats) {
    const int r = real.size();
    Eigen::VectorXcd out(r);
    for (int i = 0; i < r; ++i)
        out(i) = rho_factor(i + 1, profile, stats) * real.h(i);
    return out;
}

double noise_power(const ChannelRealization& real, const FeedbackState& state,
                   const PowerProfile& profile, const ChannelStats& stats) {
    const int r = real.size();
    const FeedbackState& st =
        (state.size() == r) ? state : expand_pairs(state);
    if (st.size() != r)
        throw std::invalid_argument("noise_power: state size mismatch");
    double acc = 1.0;
    for (int i = 0; i < r; ++i) {
        double c = amp_coef(i, profile, stats);
        acc += st.theta(i) * st.theta(i) * c * c * std::norm(real.g(i));
    }
    return acc;
}

SignalPower signal_power_decomposed(const ChannelRealization& real,
                                    const FeedbackState& state,
                                    const PowerProfile& profile,
                                    const ChannelStats& stats) {
    const int r = real.size();
    if (state.size() != r)
        throw std::invalid_argument("signal_power_decomposed: size mismatch");
    SignalPower out{0.0, 0.0};
    for (int i = 0; i < r; ++i) {
        double rii = rho(i + 1, i + 1, profile, stats);
        out.gamma += rii * state.theta(i) * state.theta(i) * std::norm(real.h(i));
    }
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) {
            if (i == j) continue;
            double rij = rho(i + 1, j + 1, profile, stats);
            out.beta += rij * state.theta(i) * state.theta(j) *
                        static_cast<double>(state.b(i) * state.b(j)) *
                        (real.h(i) * std::conj(real.h(j))).real();
        }
    }
    return out;
}

Eigen::VectorXd power_vector(const FeedbackState& state,
                             const PowerProfile& profile,
                             const ChannelStats& stats) {
    const int r = profile.num_relays();
    const FeedbackState& st =
        (state.size() == r) ? state : expand_pairs(state);
    Eigen::VectorXd p(r);
    for (int i = 0; i < r; ++i)
        p(i) = rho_factor(i + 1, profile, stats) * st.b(i) * st.theta(i);
    return p;
}

FeedbackState expand_pairs(const FeedbackState& pair_state) {
    const int k = pair_state.size();
    FeedbackState out;
    out.b.resize(2 * k);
    out.theta.resize(2 * k);
    out.theta_bar = pair_state.theta_bar;
    for (int i = 0; i < k; ++i) {
        out.b(2 * i) = out.b(2 * i + 1) = pair_state.b(i);
        out.theta(2 * i) = out.theta(2 * i + 1) = pair_state.theta(i);
    }
    return out;
}

Eigen::VectorXcd simulate_two_hop(const Eigen::VectorXcd& symbols,
                                  const ChannelRealization& real,
                                  const FeedbackState& state,
                                  const PowerProfile& profile,
                                  const ChannelStats& stats, RngStream& rng,
                                  bool with_noise) {
    const int r = real.size();
    const int t = profile.block_length();
    if (symbols.size() != t)
        throw std::invalid_argument("simulate_two_hop: symbol block size");
    if (profile.num_relays() != r)
        throw std::invalid_argument("simulate_two_hop: relay count mismatch");
    FeedbackState st = (state.size() == r) ? state : expand_pairs(state);
    if (st.size() != r)
        throw std::invalid_argument("simulate_two_hop: state size mismatch");

    const double src_amp = std::sqrt(profile.p0() * t);
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(t);
    for (int i = 0; i < r; ++i) {
        // first hop
        Eigen::VectorXcd ri = src_amp * real.f(i) * symbols;
        if (with_noise)
            for (int u = 0; u < t; ++u)
                ri(u) += rng.complex_gaussian(0.0, 1.0);
        // relay linear processing
        double c = amp_coef(i, profile, stats) * st.b(i) * st.theta(i);
        Eigen::VectorXcd di(t);
        if (t == 1) {
            di(0) = c * ri(0);
        } else if (i % 2 == 0) {
            di = c * ri;  // odd relay of the pair: A = I
        } else {
            // even relay of the pair: B = [[0,-1],[1,0]] applied to conj(r)
            di(0) = -c * std::conj(ri(1));
            di(1) = c * std::conj(ri(0));
        }
        x += real.g(i) * di;
    }
    if (with_noise)
        for (int u = 0; u < t; ++u)
            x(u) += rng.complex_gaussian(0.0, 1.0);
    return x;
}

}  // namespace relaynet
