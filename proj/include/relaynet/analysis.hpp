#pragma once

#include <functional>

#include <Eigen/Dense>

#include "relaynet/channel.hpp"
#include "relaynet/sigmodel.hpp"

namespace relaynet {

// Constellation constants of the SER expression c1 Q(sqrt(c2 SNR)).
// Defaults cover QPSK with unit-energy symbols.
struct BoundParams {
    double c1 = 2.0;
    double c2 = 1.0;
};

// Selects feedback bits for one channel draw (given the rho-weighted
// channel); lets the bound reflect the same policy as the simulated scheme.
using BitSelector =
    std::function<Eigen::VectorXi(const Eigen::VectorXcd&, RngStream&)>;

struct MonteCarloEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

// Chernoff bound (c1/2) E{exp(-c2 Ps / (2 Pw))} averaged over channel draws,
// with b selected per draw and theta fixed from the supplied state.
MonteCarloEstimate chernoff_ser_mc(const ChannelStats& stats,
                                   const PowerProfile& profile,
                                   const FeedbackState& state,
                                   const BitSelector& select_bits, long trials,
                                   RngStream& rng,
                                   const BoundParams& params = {});

// Large-P closed form kappa (P^{-R(1 - loglogP/logP)} + (prod q_i) P^{-R}).
double closed_form_bound(const ChannelStats& stats, const PowerProfile& profile,
                         double p_total, const BoundParams& params = {});

struct ExpPsDiagnostic {
    double exact_mc;  // E{Ps} with per-draw optimized bits, theta = 1
    double approx;    // 1^T Q 1
};

ExpPsDiagnostic exp_ps_diagnostic(const ChannelStats& stats,
                                  const PowerProfile& profile, long trials,
                                  RngStream& rng);

}  // namespace relaynet
