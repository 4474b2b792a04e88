#pragma once

#include <Eigen/Dense>

#include "relaynet/channel.hpp"
#include "relaynet/rng.hpp"

namespace relaynet {

// Transmit-power budget.  Node powers are fractions of the total network
// power: P_i = lambda_i * P_total with lambda_0 for the source.  The noise
// variance is fixed to 1; SNR sweeps vary P_total.
class PowerProfile {
public:
    PowerProfile(double p_total, Eigen::VectorXd lambda, int block_length);

    // P_0 = ... = P_R = P/(R+1)
    static PowerProfile equal_split(int num_relays, double p_total,
                                    int block_length = 1);
    // DSTC-optimal: P_0 = P/2, P_i = P/(2R)
    static PowerProfile dstc_split(int num_relays, double p_total,
                                   int block_length = 1);

    int num_relays() const { return static_cast<int>(lambda_.size()) - 1; }
    int block_length() const { return block_length_; }
    double p_total() const { return p_total_; }
    double noise_var() const { return 1.0; }
    double lambda(int node) const { return lambda_(node); }
    double p0() const { return lambda_(0) * p_total_; }
    // relay is 1-based as in the node numbering
    double p_relay(int relay) const { return lambda_(relay) * p_total_; }

    PowerProfile with_total(double p_total) const {
        return PowerProfile(p_total, lambda_, block_length_);
    }
    PowerProfile with_block_length(int t) const {
        return PowerProfile(p_total_, lambda_, t);
    }

private:
    double p_total_;
    Eigen::VectorXd lambda_;
    int block_length_;
};

// Feedback bits and long-term power loading currently applied at the relays.
// b has one entry per relay (scalar scheme) or per relay pair (Alamouti).
struct FeedbackState {
    Eigen::VectorXi b;      // entries in {-1, +1}
    Eigen::VectorXd theta;  // entries in [theta_bar, 1]
    double theta_bar = 0.0;

    static FeedbackState all_ones(int n);
    void validate() const;
    int size() const { return static_cast<int>(b.size()); }
};

// rho_{i,j} with 1-based relay indices; index 0 selects the single-factor
// extension rho_{i,0} = sqrt(T P0 P_i / (m_{f_i} P0 + 1)).
double rho(int i, int j, const PowerProfile& profile, const ChannelStats& stats);

// Per-relay amplitude weights rho_{i,0} h_i used by the bit-selection rules.
Eigen::VectorXcd weighted_channel(const ChannelRealization& real,
                                  const PowerProfile& profile,
                                  const ChannelStats& stats);

// Equivalent-noise power 1 + sum theta_i^2 P_i |g_i|^2 / (m_{f_i} P0 + 1).
// Independent of the sign pattern b.
double noise_power(const ChannelRealization& real, const FeedbackState& state,
                   const PowerProfile& profile, const ChannelStats& stats);

struct SignalPower {
    double gamma;  // sum of per-relay terms, b-independent
    double beta;   // cross terms, sign-pattern dependent
    double total() const { return gamma + beta; }
};

// Instantaneous signal power of the T=1 scheme split into gamma + beta.
SignalPower signal_power_decomposed(const ChannelRealization& real,
                                    const FeedbackState& state,
                                    const PowerProfile& profile,
                                    const ChannelStats& stats);

// Full two-hop synthesis: source -> relays (noise v_i) -> destination
// (noise n).  T=1 uses identity relay processing; T=2 uses the Alamouti
// pair convention (odd relays forward, even relays forward the conjugate
// through [[0,-1],[1,0]]).  state may carry per-relay entries (length R)
// or per-pair entries (length R/2, T=2 only).
Eigen::VectorXcd simulate_two_hop(const Eigen::VectorXcd& symbols,
                                  const ChannelRealization& real,
                                  const FeedbackState& state,
                                  const PowerProfile& profile,
                                  const ChannelStats& stats, RngStream& rng,
                                  bool with_noise = true);

// p_i = sqrt(P0 P_i T/(m_{f_i} P0 + 1)) b_i theta_i for per-relay b, theta.
Eigen::VectorXd power_vector(const FeedbackState& state,
                             const PowerProfile& profile,
                             const ChannelStats& stats);

// Expand per-pair feedback entries to per-relay ones (both relays of pair k
// apply b_k theta_k).
FeedbackState expand_pairs(const FeedbackState& pair_state);

}  // namespace relaynet
