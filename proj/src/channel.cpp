#include "relaynet/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace relaynet {

ChannelStats::ChannelStats(Eigen::VectorXcd mu_f, Eigen::VectorXd var_f,
                           Eigen::VectorXcd mu_g, Eigen::VectorXd var_g)
    : mu_f_(std::move(mu_f)),
      mu_g_(std::move(mu_g)),
      var_f_(std::move(var_f)),
      var_g_(std::move(var_g)) {
    const auto n = var_f_.size();
    if (n == 0 || mu_f_.size() != n || mu_g_.size() != n || var_g_.size() != n)
        throw std::invalid_argument("ChannelStats: inconsistent vector sizes");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(var_f_(i) > 0.0) || !(var_g_(i) > 0.0))
            throw std::invalid_argument("ChannelStats: variances must be > 0");
    }
}

ChannelStats ChannelStats::iid_rayleigh(int num_relays) {
    return ChannelStats(Eigen::VectorXcd::Zero(num_relays),
                        Eigen::VectorXd::Ones(num_relays),
                        Eigen::VectorXcd::Zero(num_relays),
                        Eigen::VectorXd::Ones(num_relays));
}

ChannelRealization draw_realization(const ChannelStats& stats, RngStream& rng) {
    const int n = stats.size();
    ChannelRealization out;
    out.f.resize(n);
    out.g.resize(n);
    out.h.resize(n);
    for (int i = 0; i < n; ++i) {
        out.f(i) = rng.complex_gaussian(stats.mu_f(i), stats.var_f(i));
        out.g(i) = rng.complex_gaussian(stats.mu_g(i), stats.var_g(i));
        out.h(i) = out.f(i) * out.g(i);
    }
    return out;
}

ChannelStats place_relays_geometry(int num_relays, double circle_radius,
                                   double src_dst_distance,
                                   double path_loss_exponent,
                                   bool line_of_sight, RngStream& rng) {
    if (num_relays < 1)
        throw std::invalid_argument("place_relays_geometry: need >= 1 relay");
    if (!(circle_radius > 0.0) || !(src_dst_distance > 0.0) ||
        !(path_loss_exponent > 0.0))
        throw std::invalid_argument(
            "place_relays_geometry: geometry parameters must be positive");

    const double d_ref = src_dst_distance / 2.0;  // source to circle center
    Eigen::VectorXcd mu_f(num_relays), mu_g(num_relays);
    Eigen::VectorXd var_f(num_relays), var_g(num_relays);
    for (int i = 0; i < num_relays; ++i) {
        // uniform by area: r = R*sqrt(u)
        double r = circle_radius * std::sqrt(rng.uniform());
        double a = 2.0 * M_PI * rng.uniform();
        double x = r * std::cos(a);
        double y = r * std::sin(a);
        double d_src = std::hypot(x + d_ref, y);
        double d_dst = std::hypot(x - d_ref, y);
        double mf = std::pow(d_ref / d_src, path_loss_exponent);
        double mg = std::pow(d_ref / d_dst, path_loss_exponent);
        if (line_of_sight) {
            // phi = 1 splits m evenly between |mu|^2 and var
            mu_f(i) = std::sqrt(mf / 2.0);
            var_f(i) = mf / 2.0;
            mu_g(i) = std::sqrt(mg / 2.0);
            var_g(i) = mg / 2.0;
        } else {
            mu_f(i) = 0.0;
            var_f(i) = mf;
            mu_g(i) = 0.0;
            var_g(i) = mg;
        }
    }
    return ChannelStats(mu_f, var_f, mu_g, var_g);
}

}  // namespace relaynet
