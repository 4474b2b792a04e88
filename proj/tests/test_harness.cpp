#include <doctest.h>

#include <cmath>
#include <sstream>

#include "relaynet/harness.hpp"

using namespace relaynet;

TEST_CASE("config parsing") {
    SUBCASE("full example") {
        ExperimentConfig cfg = parse_config_text(
            "# comment\n"
            "scheme = alamouti\n"
            "bit_algorithm = greedy\n"
            "relays = 6\n"
            "power_split = dstc\n"
            "snr_db = 5, 10, 15\n"
            "target_errors = 77\n"
            "max_trials = 1234\n"
            "feedback_error_prob = 0.01\n"
            "loading = optimized\n"
            "theta_bar = 0.2\n"
            "epsilon = 1e-3\n"
            "seed = 99\n");
        CHECK(cfg.scheme == Scheme::AlamoutiPairs);
        CHECK(cfg.bit_algorithm == BitAlgorithm::Greedy);
        CHECK(cfg.relays == 6);
        CHECK(cfg.power_split == PowerSplit::DstcOptimal);
        CHECK(cfg.snr_db == std::vector<double>{5.0, 10.0, 15.0});
        CHECK(cfg.target_errors == 77);
        CHECK(cfg.max_trials == 1234);
        CHECK(cfg.feedback_error_prob == doctest::Approx(0.01));
        CHECK(cfg.loading == LoadingMode::Optimized);
        CHECK(cfg.theta_bar == doctest::Approx(0.2));
        CHECK(cfg.seed == 99);
    }
    SUBCASE("defaults hold for a minimal file") {
        ExperimentConfig cfg = parse_config_text("snr_db = 10\n");
        CHECK(cfg.scheme == Scheme::ScalarFeedback);
        CHECK(cfg.relays == 4);
        CHECK(cfg.target_errors == 200);
        CHECK(cfg.max_trials == 10'000'000);
        CHECK(cfg.theta_bar == doctest::Approx(0.1));
        CHECK(cfg.epsilon == doctest::Approx(1e-4));
    }
    SUBCASE("unknown keys are named in the error") {
        try {
            parse_config_text("snr_db = 10\nbogus_key = 3\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
        }
    }
    SUBCASE("semantic validation") {
        CHECK_THROWS_AS(parse_config_text(""), ConfigError);
        CHECK_THROWS_AS(parse_config_text("snr_db = 10, 5\n"), ConfigError);
        CHECK_THROWS_AS(
            parse_config_text("snr_db = 10\nfeedback_error_prob = 1.5\n"),
            ConfigError);
        CHECK_THROWS_AS(
            parse_config_text("scheme = alamouti\nrelays = 3\nsnr_db = 10\n"),
            ConfigError);
        CHECK_THROWS_AS(
            parse_config_text(
                "snr_db = 10\npower_split = explicit\nlambda = 0.5, 0.5\n"),
            ConfigError);
        CHECK_THROWS_AS(
            parse_config_text("scheme = brs\nloading = optimized\nsnr_db = 5\n"),
            ConfigError);
    }
    SUBCASE("explicit relay statistics") {
        ExperimentConfig cfg = parse_config_text(
            "relays = 2\n"
            "snr_db = 10\n"
            "relay_1 = 0.5 0 0.75 0 0 1\n"
            "relay_2 = 0 0 1 0.3 0.4 0.5\n");
        REQUIRE(cfg.explicit_stats.has_value());
        CHECK(cfg.explicit_stats->mu_f(0) == std::complex<double>(0.5, 0.0));
        CHECK(cfg.explicit_stats->m_f(0) == doctest::Approx(1.0));
        CHECK(cfg.explicit_stats->m_g(1) == doctest::Approx(0.75));
        CHECK_THROWS_AS(parse_config_text("relays = 2\nsnr_db = 10\n"
                                          "relay_1 = 0 0 1 0 0 1\n"),
                        ConfigError);
    }
}

TEST_CASE("best relay selection rule") {
    ChannelStats stats = ChannelStats::iid_rayleigh(5);
    PowerProfile prof = PowerProfile::dstc_split(5, 12.0);
    RngStream rng(71, 0);
    for (int t = 0; t < 500; ++t) {
        ChannelRealization real = draw_realization(stats, rng);
        int got = brs_select(real, prof, stats);
        int want = 0;
        double best = -1.0;
        for (int i = 0; i < 5; ++i) {
            double pi = prof.p_relay(i + 1);
            double v = std::norm(real.f(i) * real.g(i)) * pi /
                       (1.0 + stats.m_f(i) * prof.p0() +
                        std::norm(real.g(i)) * pi);
            if (v > best) {
                best = v;
                want = i;
            }
        }
        CHECK(got == want);
    }

    // a dead relay is never picked over live ones
    ChannelRealization real = draw_realization(stats, rng);
    real.f(2) = 0.0;
    real.h(2) = 0.0;
    CHECK(brs_select(real, prof, stats) != 2);
}

TEST_CASE("experiment runs are deterministic") {
    ExperimentConfig cfg;
    cfg.scheme = Scheme::ScalarFeedback;
    cfg.bit_algorithm = BitAlgorithm::Sdr;
    cfg.relays = 4;
    cfg.snr_db = {6.0, 12.0};
    cfg.target_errors = 100;
    cfg.max_trials = 50000;
    cfg.seed = 5;

    CurveResult a = run_experiment(cfg);
    CurveResult b = run_experiment(cfg);
    std::ostringstream csv_a, csv_b;
    write_csv(csv_a, a);
    write_csv(csv_b, b);
    CHECK(csv_a.str() == csv_b.str());

    cfg.seed = 6;
    CurveResult c = run_experiment(cfg);
    std::ostringstream csv_c;
    write_csv(csv_c, c);
    CHECK(csv_a.str() != csv_c.str());
}

TEST_CASE("csv format") {
    CurveResult res;
    CurvePoint p;
    p.snr_db = 12.5;
    p.trials = 1000;
    p.bit_errors = 20;
    p.block_errors = 18;
    p.ber = 0.01;
    p.bler = 0.018;
    p.ber_stderr = 0.0022;
    res.points.push_back(p);
    std::ostringstream os;
    write_csv(os, res);
    CHECK(os.str() ==
          "snr_db,trials,bit_errors,ber,ber_stderr,block_errors,bler\n"
          "12.5,1000,20,0.01,0.0022,18,0.018\n");
}

TEST_CASE("ber decreases with snr and with clean feedback") {
    ExperimentConfig cfg;
    cfg.scheme = Scheme::ScalarFeedback;
    cfg.bit_algorithm = BitAlgorithm::Greedy;
    cfg.relays = 4;
    cfg.snr_db = {5.0, 10.0, 15.0, 20.0};
    cfg.target_errors = 400;
    cfg.max_trials = 400000;
    CurveResult clean = run_experiment(cfg);
    for (std::size_t i = 1; i < clean.points.size(); ++i)
        CHECK(clean.points[i].ber < clean.points[i - 1].ber);

    cfg.feedback_error_prob = 0.5;
    CurveResult noisy = run_experiment(cfg);
    for (std::size_t i = 0; i < clean.points.size(); ++i)
        CHECK(noisy.points[i].ber > clean.points[i].ber);
}

TEST_CASE("two relays at very high snr are effectively error free") {
    ExperimentConfig cfg;
    cfg.scheme = Scheme::ScalarFeedback;
    cfg.bit_algorithm = BitAlgorithm::Greedy;  // optimal at R = 2
    cfg.relays = 2;
    cfg.snr_db = {60.0};
    cfg.target_errors = 1000000;
    cfg.max_trials = 10'000'000;
    CurveResult res = run_experiment(cfg);
    CHECK(res.points[0].ber < 1e-6);
}

TEST_CASE("loading vector is reported per snr point") {
    ExperimentConfig cfg;
    cfg.scheme = Scheme::ScalarFeedback;
    cfg.bit_algorithm = BitAlgorithm::Greedy;
    cfg.relays = 3;
    cfg.snr_db = {10.0};
    cfg.loading = LoadingMode::Optimized;
    cfg.target_errors = 50;
    cfg.max_trials = 5000;
    CurveResult res = run_experiment(cfg);
    REQUIRE(res.thetas.size() == 1);
    REQUIRE(res.thetas[0].size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(res.thetas[0](i) >= 0.1 - 1e-12);
        CHECK(res.thetas[0](i) <= 1.0 + 1e-12);
    }
}
