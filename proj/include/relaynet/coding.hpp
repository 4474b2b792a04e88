#pragma once

#include <vector>

#include <Eigen/Dense>

#include "relaynet/channel.hpp"
#include "relaynet/powerload.hpp"
#include "relaynet/sigmodel.hpp"

namespace relaynet {

using Constellation = std::vector<std::complex<double>>;

// Gray-coded QPSK, unit modulus: bit0 -> real sign, bit1 -> imag sign.
Constellation qpsk();
int qpsk_index(std::complex<double> s);
int qpsk_bit_errors(int idx_a, int idx_b);

// Equivalent channel vector h with the Alamouti conjugation applied:
// odd pair slots keep f g, even slots use f^* g.
Eigen::VectorXcd alamouti_channel(const ChannelRealization& real);

struct AlamoutiEquivalentChannel {
    Eigen::Matrix2cd h_eq;  // sum of per-pair Alamouti blocks
    double gamma_a;
    double beta_a;
    double gain() const { return gamma_a + beta_a; }
};

// Equivalent 2x2 model for the extended distributed Alamouti code;
// state carries per-pair b, theta (length K).
AlamoutiEquivalentChannel alamouti_equivalent(const ChannelRealization& real,
                                              const FeedbackState& state,
                                              const PowerProfile& profile,
                                              const ChannelStats& stats);

// Symbol-by-symbol ML decode of a received block x = [x1, x2]:
// conjugate x2, matched-filter with H, slice per symbol.
std::pair<int, int> alamouti_ml_decode(const Eigen::Vector2cd& x,
                                       const AlamoutiEquivalentChannel& chan,
                                       const Constellation& constellation);

// Differential scalar scheme: u_l = u_{l-1} s_l, decisions from
// Re{x_{l-1} x_l^* s}.  No CSI enters the decoder.
class DifferentialScalarEncoder {
public:
    std::complex<double> encode(std::complex<double> s) {
        u_ *= s;
        return u_;
    }
    std::complex<double> reference() const { return u_; }

private:
    std::complex<double> u_{1.0, 0.0};
};

class DifferentialScalarDecoder {
public:
    explicit DifferentialScalarDecoder(Constellation constellation)
        : constellation_(std::move(constellation)) {}

    void observe_reference(std::complex<double> x) { x_prev_ = x; }
    int decode(std::complex<double> x);

private:
    Constellation constellation_;
    std::complex<double> x_prev_{0.0, 0.0};
};

// Differential Alamouti scheme: u_l = S_l u_{l-1} with unitary
// S_l = [[s1, -s2*], [s2, s1*]]/sqrt(2), u_0 = [1, 0]^T.
class DifferentialAlamoutiEncoder {
public:
    Eigen::Vector2cd encode(std::complex<double> s1, std::complex<double> s2);
    Eigen::Vector2cd reference() const { return u_; }

private:
    Eigen::Vector2cd u_{std::complex<double>(1.0, 0.0),
                        std::complex<double>(0.0, 0.0)};
};

class DifferentialAlamoutiDecoder {
public:
    explicit DifferentialAlamoutiDecoder(Constellation constellation)
        : constellation_(std::move(constellation)) {}

    void observe_reference(const Eigen::Vector2cd& x) { x_prev_ = x; }
    // separable per-symbol maximization of Re{tr(x_{l-1} x_l^H S_l)}
    std::pair<int, int> decode(const Eigen::Vector2cd& x);

private:
    Constellation constellation_;
    Eigen::Vector2cd x_prev_{std::complex<double>(0.0, 0.0),
                             std::complex<double>(0.0, 0.0)};
};

struct TrainingResult {
    Eigen::VectorXi b;
    int slots_used;
};

// Sequential power-comparison training (one flip trial per relay or pair):
// start from all-ones, flip entry j, keep the flip iff the received power
// improves (strictly for the scalar scheme, >= for pairs).
TrainingResult train_bits_sequential(LoadingScheme scheme,
                                     const ChannelRealization& real,
                                     const PowerProfile& profile,
                                     const ChannelStats& stats, RngStream& rng,
                                     bool noisy = true);

}  // namespace relaynet
