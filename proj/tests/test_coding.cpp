#include <doctest.h>

#include <cmath>
#include <complex>

#include "relaynet/coding.hpp"
#include "relaynet/feedback.hpp"

using namespace relaynet;

namespace {

ChannelRealization fixed_realization(const Eigen::VectorXcd& f,
                                     const Eigen::VectorXcd& g) {
    ChannelRealization out;
    out.f = f;
    out.g = g;
    out.h = f.cwiseProduct(g);
    return out;
}

// profile giving P0 = Pi = 1 for every node
PowerProfile unit_powers(int r, int t) {
    return PowerProfile(r + 1.0, Eigen::VectorXd::Constant(r + 1, 1.0 / (r + 1)),
                        t);
}

}  // namespace

TEST_CASE("qpsk constellation and bit metric") {
    Constellation c = qpsk();
    REQUIRE(c.size() == 4);
    for (auto s : c) CHECK(std::abs(s) == doctest::Approx(1.0));
    for (int i = 0; i < 4; ++i) CHECK(qpsk_index(c[i]) == i);
    CHECK(qpsk_bit_errors(0, 0) == 0);
    CHECK(qpsk_bit_errors(0, 3) == 2);
    CHECK(qpsk_bit_errors(1, 3) == 1);
    CHECK(qpsk_bit_errors(2, 0) == 1);
}

TEST_CASE("alamouti equivalent channel closed form") {
    // m_f = 1 and T = 2 make every power factor exactly 1
    ChannelStats stats = ChannelStats::iid_rayleigh(2);
    PowerProfile prof =
        PowerProfile(3.0, Eigen::VectorXd::Constant(3, 1.0 / 3.0), 2);
    Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(2);
    ChannelRealization real = fixed_realization(ones, ones);
    FeedbackState st = FeedbackState::all_ones(1);
    AlamoutiEquivalentChannel chan = alamouti_equivalent(real, st, prof, stats);
    CHECK(std::abs(chan.h_eq(0, 0) - 1.0) < 1e-12);
    CHECK(std::abs(chan.h_eq(0, 1) + 1.0) < 1e-12);
    CHECK(std::abs(chan.h_eq(1, 0) - 1.0) < 1e-12);
    CHECK(std::abs(chan.h_eq(1, 1) - 1.0) < 1e-12);
    Eigen::Matrix2cd gram = chan.h_eq.adjoint() * chan.h_eq;
    CHECK(std::abs(gram(0, 0) - 2.0) < 1e-12);
    CHECK(std::abs(gram(0, 1)) < 1e-12);
    CHECK(chan.gain() == doctest::Approx(2.0));

    ChannelRealization dead =
        fixed_realization(Eigen::VectorXcd::Zero(2), Eigen::VectorXcd::Zero(2));
    chan = alamouti_equivalent(dead, st, prof, stats);
    CHECK(chan.h_eq.norm() == 0.0);
}

TEST_CASE("alamouti orthogonality and power split on random draws") {
    const int r = 8;
    ChannelStats stats = ChannelStats::iid_rayleigh(r);
    PowerProfile prof = unit_powers(r, 2);
    RngStream rng(51, 0);
    for (int t = 0; t < 2000; ++t) {
        ChannelRealization real = draw_realization(stats, rng);
        FeedbackState st = FeedbackState::all_ones(r / 2);
        for (int i = 0; i < r / 2; ++i) {
            st.b(i) = (rng.next_u64() & 1) ? 1 : -1;
            st.theta(i) = rng.uniform(0.1, 1.0);
        }
        AlamoutiEquivalentChannel chan =
            alamouti_equivalent(real, st, prof, stats);
        Eigen::Matrix2cd gram = chan.h_eq.adjoint() * chan.h_eq;
        double scale = std::max(1.0, chan.gain());
        CHECK(std::abs(gram(0, 0).real() - chan.gain()) < 1e-10 * scale);
        CHECK(std::abs(gram(1, 1).real() - chan.gain()) < 1e-10 * scale);
        CHECK(std::abs(gram(0, 1)) < 1e-10 * scale);
        // beta_a is consistent with the trace of the gram matrix
        CHECK(chan.beta_a ==
              doctest::Approx(gram.trace().real() / 2.0 - chan.gamma_a)
                  .epsilon(1e-8));
    }
}

TEST_CASE("alamouti decode equals joint maximum likelihood") {
    const int r = 4;
    ChannelStats stats = ChannelStats::iid_rayleigh(r);
    PowerProfile prof = unit_powers(r, 2);
    RngStream rng(52, 0);
    Constellation c = qpsk();

    SUBCASE("noiseless recovery of all symbol pairs") {
        ChannelRealization real = draw_realization(stats, rng);
        AlamoutiEquivalentChannel chan =
            alamouti_equivalent(real, FeedbackState::all_ones(2), prof, stats);
        for (int s1 = 0; s1 < 4; ++s1)
            for (int s2 = 0; s2 < 4; ++s2) {
                Eigen::Vector2cd sv(c[s1], std::conj(c[s2]));
                Eigen::Vector2cd xb = chan.h_eq * sv;
                Eigen::Vector2cd x(xb(0), std::conj(xb(1)));
                auto [d1, d2] = alamouti_ml_decode(x, chan, c);
                CHECK(d1 == s1);
                CHECK(d2 == s2);
            }
    }

    SUBCASE("matches the 16-hypothesis oracle under noise") {
        for (int t = 0; t < 20000; ++t) {
            ChannelRealization real = draw_realization(stats, rng);
            AlamoutiEquivalentChannel chan = alamouti_equivalent(
                real, FeedbackState::all_ones(2), prof, stats);
            if (chan.gain() < 1e-12) continue;
            int s1 = static_cast<int>(rng.next_u64() & 3);
            int s2 = static_cast<int>(rng.next_u64() & 3);
            Eigen::Vector2cd sv(c[s1], std::conj(c[s2]));
            Eigen::Vector2cd xb = chan.h_eq * sv;
            xb(0) += rng.complex_gaussian(0.0, 1.0);
            xb(1) += rng.complex_gaussian(0.0, 1.0);
            auto [d1, d2] = alamouti_ml_decode(
                Eigen::Vector2cd(xb(0), std::conj(xb(1))), chan, c);

            int j1 = 0, j2 = 0;
            double best = 1e300;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) {
                    Eigen::Vector2cd hyp(c[a], std::conj(c[b]));
                    double d = (xb - chan.h_eq * hyp).squaredNorm();
                    if (d < best) {
                        best = d;
                        j1 = a;
                        j2 = b;
                    }
                }
            CHECK(d1 == j1);
            CHECK(d2 == j2);
        }
    }

    SUBCASE("dead channel raises") {
        AlamoutiEquivalentChannel chan{};
        chan.h_eq.setZero();
        chan.gamma_a = 0.0;
        chan.beta_a = 0.0;
        CHECK_THROWS(alamouti_ml_decode(Eigen::Vector2cd(1.0, 1.0), chan, c));
    }
}

TEST_CASE("differential scalar scheme") {
    Constellation c = qpsk();
    RngStream rng(53, 0);
    SUBCASE("noiseless static channel recovery, any channel phase") {
        for (double phase : {0.0, 0.7, 2.9}) {
            std::complex<double> chan = std::polar(1.7, phase);
            DifferentialScalarEncoder enc;
            DifferentialScalarDecoder dec(c);
            dec.observe_reference(chan * enc.reference());
            for (int l = 0; l < 100; ++l) {
                int s = static_cast<int>(rng.next_u64() & 3);
                std::complex<double> u = enc.encode(c[s]);
                CHECK(std::abs(std::abs(u) - 1.0) < 1e-12);
                CHECK(dec.decode(chan * u) == s);
            }
        }
    }
}

TEST_CASE("differential alamouti scheme") {
    Constellation c = qpsk();
    RngStream rng(54, 0);
    SUBCASE("noiseless exact recovery and norm preservation") {
        // the physical channel maps the block u to its Alamouti code matrix
        // applied to the per-pair channel sums
        Eigen::Vector2cd cv(std::complex<double>(0.8, 0.3),
                            std::complex<double>(-0.2, 1.1));
        auto channel = [&](const Eigen::Vector2cd& u) {
            Eigen::Matrix2cd m;
            m << u(0), -std::conj(u(1)), u(1), std::conj(u(0));
            return Eigen::Vector2cd(m * cv);
        };
        DifferentialAlamoutiEncoder enc;
        DifferentialAlamoutiDecoder dec(c);
        dec.observe_reference(channel(enc.reference()));
        for (int l = 0; l < 200; ++l) {
            int s1 = static_cast<int>(rng.next_u64() & 3);
            int s2 = static_cast<int>(rng.next_u64() & 3);
            Eigen::Vector2cd u = enc.encode(c[s1], c[s2]);
            CHECK(u.norm() == doctest::Approx(1.0));
            auto [d1, d2] = dec.decode(channel(u));
            CHECK(d1 == s1);
            CHECK(d2 == s2);
        }
    }
    SUBCASE("separable decode equals the exhaustive trace metric") {
        for (int t = 0; t < 20000; ++t) {
            Eigen::Vector2cd x_prev(rng.complex_gaussian(0.0, 1.0),
                                    rng.complex_gaussian(0.0, 1.0));
            Eigen::Vector2cd x(rng.complex_gaussian(0.0, 1.0),
                               rng.complex_gaussian(0.0, 1.0));
            DifferentialAlamoutiDecoder dec(c);
            dec.observe_reference(x_prev);
            auto [d1, d2] = dec.decode(x);

            int j1 = 0, j2 = 0;
            double best = -1e300;
            const double a = 1.0 / std::sqrt(2.0);
            for (int s1 = 0; s1 < 4; ++s1)
                for (int s2 = 0; s2 < 4; ++s2) {
                    Eigen::Matrix2cd s;
                    s << c[s1], -std::conj(c[s2]), c[s2], std::conj(c[s1]);
                    double m = ((x_prev * x.adjoint() * (a * s)).trace()).real();
                    if (m > best) {
                        best = m;
                        j1 = s1;
                        j2 = s2;
                    }
                }
            CHECK(d1 == j1);
            CHECK(d2 == j2);
        }
    }
}

TEST_CASE("sequential training") {
    SUBCASE("two relays, opposite channels") {
        ChannelStats stats = ChannelStats::iid_rayleigh(2);
        PowerProfile prof = unit_powers(2, 1);
        Eigen::VectorXcd f(2), g(2);
        f << 1.0, 1.0;
        g << 1.0, -1.0;
        RngStream rng(55, 0);
        TrainingResult tr = train_bits_sequential(
            LoadingScheme::Scalar, fixed_realization(f, g), prof, stats, rng,
            false);
        CHECK(tr.b(0) == 1);
        CHECK(tr.b(1) == -1);
        CHECK(tr.slots_used == 4);
    }
    SUBCASE("noiseless training never loses to all-ones") {
        const int r = 6;
        ChannelStats stats = ChannelStats::iid_rayleigh(r);
        PowerProfile prof = unit_powers(r, 1);
        RngStream rng(56, 0);
        for (int t = 0; t < 2000; ++t) {
            ChannelRealization real = draw_realization(stats, rng);
            TrainingResult tr = train_bits_sequential(LoadingScheme::Scalar,
                                                      real, prof, stats, rng,
                                                      false);
            std::complex<double> trained = 0.0, base = 0.0;
            for (int i = 0; i < r; ++i) {
                trained += static_cast<double>(tr.b(i)) * real.h(i);
                base += real.h(i);
            }
            CHECK(std::norm(trained) >= std::norm(base) - 1e-10);
        }
    }
    SUBCASE("two-relay noiseless training equals the greedy rule") {
        // with one undecided relay the full-sum comparison and the greedy
        // prefix rule coincide
        ChannelStats stats = ChannelStats::iid_rayleigh(2);
        PowerProfile prof = unit_powers(2, 1);
        RngStream rng(57, 0);
        for (int t = 0; t < 2000; ++t) {
            ChannelRealization real = draw_realization(stats, rng);
            TrainingResult tr = train_bits_sequential(LoadingScheme::Scalar,
                                                      real, prof, stats, rng,
                                                      false);
            auto greedy = select_greedy(real.h);
            CHECK(tr.b(0) == greedy.b(0));
            CHECK(tr.b(1) == greedy.b(1));
        }
    }
    SUBCASE("pair training uses 3K+1 slots and never loses to all-ones") {
        const int r = 8;
        ChannelStats stats = ChannelStats::iid_rayleigh(r);
        PowerProfile prof = unit_powers(r, 2);
        RngStream rng(58, 0);
        for (int t = 0; t < 1000; ++t) {
            ChannelRealization real = draw_realization(stats, rng);
            TrainingResult tr = train_bits_sequential(
                LoadingScheme::AlamoutiPairs, real, prof, stats, rng, false);
            CHECK(tr.slots_used == 3 * 4 + 1);
            Eigen::VectorXcd h = alamouti_channel(real);
            Eigen::Vector2cd trained(0.0, 0.0), base(0.0, 0.0);
            for (int k = 0; k < 4; ++k) {
                Eigen::Vector2cd pair(h(2 * k), h(2 * k + 1));
                trained += static_cast<double>(tr.b(k)) * pair;
                base += pair;
            }
            CHECK(trained.squaredNorm() >= base.squaredNorm() - 1e-10);
        }
    }
}
