#pragma once

#include <Eigen/Dense>

#include "relaynet/channel.hpp"
#include "relaynet/optim.hpp"
#include "relaynet/sigmodel.hpp"

namespace relaynet {

enum class LoadingScheme { Scalar, AlamoutiPairs };

// Long-term statistics matrices for the power-loading problem:
// average signal power ~ theta^T Q theta, average noise = theta^T W theta + 1.
struct LoadingMatrices {
    Eigen::MatrixXd q;   // symmetric, entrywise nonnegative
    Eigen::VectorXd w;   // diagonal of W
    LoadingScheme scheme = LoadingScheme::Scalar;
};

LoadingMatrices build_scalar_matrices(const ChannelStats& stats,
                                      const PowerProfile& profile);

// Pairwise (K x K) matrices for the extended Alamouti scheme.  Even-indexed
// equivalent channels carry the conjugated f, which the expectations honor.
LoadingMatrices build_alamouti_matrices(const ChannelStats& stats,
                                        const PowerProfile& profile);

// theta in [theta_bar, 1]^n maximizing the approximate SNR ratio.
Eigen::VectorXd optimize_loading(const LoadingMatrices& mats, double theta_bar,
                                 double epsilon, RngStream& rng);

}  // namespace relaynet
