#pragma once

#include <Eigen/Dense>

#include "relaynet/rng.hpp"

namespace relaynet {

// Per-relay second-order statistics of the source->relay (f) and
// relay->destination (g) links.  Both links are complex Gaussian
// CN(mu, var), independent across relays and of each other.
class ChannelStats {
public:
    ChannelStats(Eigen::VectorXcd mu_f, Eigen::VectorXd var_f,
                 Eigen::VectorXcd mu_g, Eigen::VectorXd var_g);

    // i.i.d. Rayleigh fading: zero means, unit variances
    static ChannelStats iid_rayleigh(int num_relays);

    int size() const { return static_cast<int>(var_f_.size()); }

    std::complex<double> mu_f(int i) const { return mu_f_(i); }
    std::complex<double> mu_g(int i) const { return mu_g_(i); }
    double var_f(int i) const { return var_f_(i); }
    double var_g(int i) const { return var_g_(i); }

    // second moments m = |mu|^2 + var
    double m_f(int i) const { return std::norm(mu_f_(i)) + var_f_(i); }
    double m_g(int i) const { return std::norm(mu_g_(i)) + var_g_(i); }

    // Rice factors phi = |mu|^2 / var
    double phi_f(int i) const { return std::norm(mu_f_(i)) / var_f_(i); }
    double phi_g(int i) const { return std::norm(mu_g_(i)) / var_g_(i); }

private:
    Eigen::VectorXcd mu_f_, mu_g_;
    Eigen::VectorXd var_f_, var_g_;
};

// One draw of the fading coefficients and the equivalent channel h_i = f_i g_i.
// The Alamouti conjugation of even-indexed entries is applied in the coding
// module, not here.
struct ChannelRealization {
    Eigen::VectorXcd f;
    Eigen::VectorXcd g;
    Eigen::VectorXcd h;

    int size() const { return static_cast<int>(f.size()); }
};

ChannelRealization draw_realization(const ChannelStats& stats, RngStream& rng);

// Relay placement for the geometric scenario: relays fall uniformly (by
// area) inside a circle centered midway between source and destination.
// Second moments follow (d_ref/d)^exponent with d_ref the source-to-center
// distance, so a relay at the center has m_f = m_g = 1.
ChannelStats place_relays_geometry(int num_relays, double circle_radius,
                                   double src_dst_distance,
                                   double path_loss_exponent,
                                   bool line_of_sight, RngStream& rng);

}  // namespace relaynet
