#pragma once

#include <Eigen/Dense>

#include "relaynet/rng.hpp"

namespace relaynet {

enum class BitMethod { FullSearch, Sdr, Greedy };

struct BitSelectionResult {
    Eigen::VectorXi b;   // +-1, b(0) = +1
    double beta;         // achieved cross-term, >= 0 for every method
    double objective;    // |h^H b|^2 (resp. b^T Re{F^H F} b)
    BitMethod method;
};

// Exact maximizer of |bar_h^H b|^2 over b in {-1,+1}^R (Gray-code walk,
// b_1 pinned to +1 by the global sign invariance).  Guarded to R <= 24.
BitSelectionResult select_full_search(const Eigen::VectorXcd& bar_h);

// Sequential greedy accumulation: b_i = sign(Re{h_i^* tau_{i-1}}),
// tau_i = tau_{i-1} + b_i h_i.
BitSelectionResult select_greedy(const Eigen::VectorXcd& h_eff);

// Semidefinite-relaxation route on Qbar = Re{bar_h bar_h^H}.
BitSelectionResult select_sdr(const Eigen::VectorXcd& bar_h, RngStream& rng,
                              int randomization_rounds = 200);

// Pair variants for the extended Alamouti scheme: h holds 2K entries with
// the even-indexed conjugation already applied; F is the 2 x K stacked-pair
// matrix with columns [p_{2k-1} h_{2k-1}; p_{2k} h_{2k}].
BitSelectionResult select_pairs_greedy(const Eigen::VectorXcd& h);
BitSelectionResult select_pairs_sdr(const Eigen::MatrixXcd& f_pairs,
                                    RngStream& rng,
                                    int randomization_rounds = 200);

}  // namespace relaynet
