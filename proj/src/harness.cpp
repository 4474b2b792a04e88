#include "relaynet/harness.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "relaynet/analysis.hpp"
#include "relaynet/coding.hpp"
#include "relaynet/feedback.hpp"
#include "relaynet/powerload.hpp"

namespace relaynet {

namespace {

constexpr std::uint64_t kGeometryStream = 0x67656f6dULL;   // "geom"
constexpr std::uint64_t kLoadingStream = 0x6c6f6164ULL;    // "load"
constexpr long kChunk = 2048;

bool is_pair_scheme(Scheme s) {
    return s == Scheme::AlamoutiPairs || s == Scheme::DiffAlamouti;
}

bool is_differential(Scheme s) {
    return s == Scheme::DiffScalar || s == Scheme::DiffAlamouti ||
           s == Scheme::DiffBrs;
}

Eigen::VectorXi flip_with_errors(const Eigen::VectorXi& b, double pe,
                                 RngStream& rng, bool skip_first = false) {
    if (pe <= 0.0) return b;
    Eigen::VectorXi out = b;
    for (Eigen::Index i = skip_first ? 1 : 0; i < out.size(); ++i)
        if (rng.uniform() < pe) out(i) = -out(i);
    return out;
}

// the first sign is pinned to +1 by convention at both ends, so only the
// remaining entries travel over the feedback link and can be corrupted
Eigen::VectorXi normalize_first_positive(Eigen::VectorXi b) {
    if (b.size() > 0 && b(0) < 0) b = -b;
    return b;
}

// exact maximizer of ||sum_k b_k [h_{2k}, h_{2k+1}]||^2 (Gray-code walk)
Eigen::VectorXi pairs_full_search(const Eigen::VectorXcd& h) {
    const int k = static_cast<int>(h.size()) / 2;
    if (k > 24)
        throw std::invalid_argument("pairs_full_search: too many pairs");
    Eigen::VectorXi b = Eigen::VectorXi::Ones(k);
    Eigen::Vector2cd acc(0.0, 0.0);
    for (int i = 0; i < k; ++i) acc += Eigen::Vector2cd(h(2 * i), h(2 * i + 1));
    Eigen::VectorXi best_b = b;
    double best = acc.squaredNorm();
    const std::uint64_t count = 1ULL << (k - 1);
    for (std::uint64_t m = 1; m < count; ++m) {
        int bit = __builtin_ctzll(m) + 1;
        b(bit) = -b(bit);
        acc += 2.0 * static_cast<double>(b(bit)) *
               Eigen::Vector2cd(h(2 * bit), h(2 * bit + 1));
        double obj = acc.squaredNorm();
        if (obj > best) {
            best = obj;
            best_b = b;
        }
    }
    return best_b;
}

int coherent_decode(std::complex<double> x, std::complex<double> c,
                    const Constellation& constellation) {
    int best = 0;
    double bd = std::norm(x - c * constellation[0]);
    for (int s = 1; s < static_cast<int>(constellation.size()); ++s) {
        double d = std::norm(x - c * constellation[s]);
        if (d < bd) {
            bd = d;
            best = s;
        }
    }
    return best;
}

struct TrialTally {
    long bit_errors = 0;
    long block_errors = 0;
};

struct TrialContext {
    const ExperimentConfig& cfg;
    const ChannelStats& stats;
    const PowerProfile& profile;
    const Eigen::VectorXd& theta;  // per relay (scalar) or per pair
    const Constellation qpsk_points = qpsk();
};

int draw_symbol(RngStream& rng) { return static_cast<int>(rng.next_u64() & 3); }

Eigen::VectorXi select_scalar_bits(const TrialContext& ctx,
                                   const ChannelRealization& real,
                                   const Eigen::VectorXcd& wt, RngStream& rng) {
    switch (ctx.cfg.bit_algorithm) {
        case BitAlgorithm::FullSearch:
            return select_full_search(wt).b;
        case BitAlgorithm::Sdr:
            return select_sdr(wt, rng).b;
        case BitAlgorithm::Greedy:
            return select_greedy(wt).b;
        case BitAlgorithm::SequentialTraining:
            return train_bits_sequential(LoadingScheme::Scalar, real,
                                         ctx.profile, ctx.stats, rng)
                .b;
    }
    throw std::logic_error("unreachable");
}

Eigen::VectorXi select_pair_bits(const TrialContext& ctx,
                                 const ChannelRealization& real,
                                 const Eigen::VectorXcd& wt, RngStream& rng) {
    const int k = static_cast<int>(wt.size()) / 2;
    switch (ctx.cfg.bit_algorithm) {
        case BitAlgorithm::FullSearch:
            return pairs_full_search(wt);
        case BitAlgorithm::Sdr: {
            Eigen::MatrixXcd f(2, k);
            for (int i = 0; i < k; ++i) {
                f(0, i) = wt(2 * i);
                f(1, i) = wt(2 * i + 1);
            }
            return select_pairs_sdr(f, rng).b;
        }
        case BitAlgorithm::Greedy:
            return select_pairs_greedy(wt).b;
        case BitAlgorithm::SequentialTraining:
            return train_bits_sequential(LoadingScheme::AlamoutiPairs, real,
                                         ctx.profile, ctx.stats, rng)
                .b;
    }
    throw std::logic_error("unreachable");
}

TrialTally trial_scalar(const TrialContext& ctx, RngStream& rng) {
    ChannelRealization real = draw_realization(ctx.stats, rng);
    Eigen::VectorXcd wt = weighted_channel(real, ctx.profile, ctx.stats);
    for (int i = 0; i < real.size(); ++i) wt(i) *= ctx.theta(i);
    Eigen::VectorXi b =
        normalize_first_positive(select_scalar_bits(ctx, real, wt, rng));
    Eigen::VectorXi applied =
        flip_with_errors(b, ctx.cfg.feedback_error_prob, rng, true);

    FeedbackState st{applied, ctx.theta, 0.0};
    int tx = draw_symbol(rng);
    Eigen::VectorXcd sym(1);
    sym(0) = ctx.qpsk_points[tx];
    Eigen::VectorXcd x =
        simulate_two_hop(sym, real, st, ctx.profile, ctx.stats, rng);

    // receiver's channel estimate uses the bits it asked for
    std::complex<double> c = 0.0;
    for (int i = 0; i < real.size(); ++i)
        c += static_cast<double>(b(i)) * wt(i);
    int rx = coherent_decode(x(0), c, ctx.qpsk_points);
    int be = qpsk_bit_errors(tx, rx);
    return {be, be > 0 ? 1L : 0L};
}

TrialTally trial_alamouti(const TrialContext& ctx, RngStream& rng) {
    ChannelRealization real = draw_realization(ctx.stats, rng);
    const int r = real.size();
    Eigen::VectorXcd h = alamouti_channel(real);
    Eigen::VectorXcd wt(r);
    for (int i = 0; i < r; ++i)
        wt(i) = rho(i + 1, 0, ctx.profile, ctx.stats) * ctx.theta(i / 2) * h(i);
    Eigen::VectorXi b =
        normalize_first_positive(select_pair_bits(ctx, real, wt, rng));
    Eigen::VectorXi applied =
        flip_with_errors(b, ctx.cfg.feedback_error_prob, rng, true);

    FeedbackState st{applied, ctx.theta, 0.0};
    int tx1 = draw_symbol(rng);
    int tx2 = draw_symbol(rng);
    // unit energy per block: each of the two symbols carries power 1/2
    const double a = 1.0 / std::sqrt(2.0);
    Eigen::VectorXcd sym(2);
    sym << a * ctx.qpsk_points[tx1], a * ctx.qpsk_points[tx2];
    Eigen::VectorXcd x =
        simulate_two_hop(sym, real, st, ctx.profile, ctx.stats, rng);

    // the orthogonal structure lets the receiver track the realized
    // equivalent channel whatever signs the relays applied, so feedback
    // errors only cost the alignment gain rather than coherency
    AlamoutiEquivalentChannel chan =
        alamouti_equivalent(real, st, ctx.profile, ctx.stats);
    int be;
    if (chan.gain() > 1e-300) {
        // undo the symbol scaling; the noise scales with it, so the
        // decision rule is unchanged
        auto [rx1, rx2] =
            alamouti_ml_decode(Eigen::Vector2cd(x(0) / a, x(1) / a), chan,
                               ctx.qpsk_points);
        be = qpsk_bit_errors(tx1, rx1) + qpsk_bit_errors(tx2, rx2);
    } else {
        be = 4;
    }
    return {be, be > 0 ? 1L : 0L};
}

TrialTally trial_brs(const TrialContext& ctx, RngStream& rng) {
    ChannelRealization real = draw_realization(ctx.stats, rng);
    int i = brs_select(real, ctx.profile, ctx.stats);
    std::complex<double> c = rho(i + 1, 0, ctx.profile, ctx.stats) * real.h(i);
    double amp = std::sqrt(ctx.profile.p_relay(i + 1) /
                           (ctx.stats.m_f(i) * ctx.profile.p0() + 1.0));
    int tx = draw_symbol(rng);
    std::complex<double> x = c * ctx.qpsk_points[tx] +
                             amp * real.g(i) * rng.complex_gaussian(0.0, 1.0) +
                             rng.complex_gaussian(0.0, 1.0);
    int rx = coherent_decode(x, c, ctx.qpsk_points);
    int be = qpsk_bit_errors(tx, rx);
    return {be, be > 0 ? 1L : 0L};
}

TrialTally trial_diff_scalar(const TrialContext& ctx, RngStream& rng) {
    ChannelRealization real = draw_realization(ctx.stats, rng);
    TrainingResult tr = train_bits_sequential(LoadingScheme::Scalar, real,
                                              ctx.profile, ctx.stats, rng);
    Eigen::VectorXi applied =
        flip_with_errors(tr.b, ctx.cfg.feedback_error_prob, rng);
    FeedbackState st{applied, Eigen::VectorXd::Ones(real.size()), 0.0};

    DifferentialScalarEncoder enc;
    DifferentialScalarDecoder dec(ctx.qpsk_points);
    Eigen::VectorXcd u(1);
    u(0) = enc.reference();
    dec.observe_reference(
        simulate_two_hop(u, real, st, ctx.profile, ctx.stats, rng)(0));
    TrialTally tally;
    for (int l = 0; l < ctx.cfg.diff_block_symbols; ++l) {
        int tx = draw_symbol(rng);
        u(0) = enc.encode(ctx.qpsk_points[tx]);
        int rx = dec.decode(
            simulate_two_hop(u, real, st, ctx.profile, ctx.stats, rng)(0));
        tally.bit_errors += qpsk_bit_errors(tx, rx);
    }
    tally.block_errors = tally.bit_errors > 0 ? 1 : 0;
    return tally;
}

TrialTally trial_diff_alamouti(const TrialContext& ctx, RngStream& rng) {
    ChannelRealization real = draw_realization(ctx.stats, rng);
    TrainingResult tr = train_bits_sequential(LoadingScheme::AlamoutiPairs,
                                              real, ctx.profile, ctx.stats, rng);
    Eigen::VectorXi applied =
        flip_with_errors(tr.b, ctx.cfg.feedback_error_prob, rng);
    FeedbackState st{applied, Eigen::VectorXd::Ones(applied.size()), 0.0};

    DifferentialAlamoutiEncoder enc;
    DifferentialAlamoutiDecoder dec(ctx.qpsk_points);
    dec.observe_reference(
        simulate_two_hop(enc.reference(), real, st, ctx.profile, ctx.stats, rng));
    TrialTally tally;
    for (int l = 0; l < ctx.cfg.diff_block_symbols / 2; ++l) {
        int tx1 = draw_symbol(rng);
        int tx2 = draw_symbol(rng);
        Eigen::Vector2cd u =
            enc.encode(ctx.qpsk_points[tx1], ctx.qpsk_points[tx2]);
        auto [rx1, rx2] = dec.decode(
            simulate_two_hop(u, real, st, ctx.profile, ctx.stats, rng));
        tally.bit_errors += qpsk_bit_errors(tx1, rx1) + qpsk_bit_errors(tx2, rx2);
    }
    tally.block_errors = tally.bit_errors > 0 ? 1 : 0;
    return tally;
}

TrialTally trial_diff_brs(const TrialContext& ctx, RngStream& rng) {
    ChannelRealization real = draw_realization(ctx.stats, rng);
    const int r = real.size();
    // training: each relay forwards the reference alone, receiver keeps the
    // index with the largest received power
    int best = 0;
    double best_pow = -1.0;
    for (int i = 0; i < r; ++i) {
        std::complex<double> c = rho(i + 1, 0, ctx.profile, ctx.stats) * real.h(i);
        double amp = std::sqrt(ctx.profile.p_relay(i + 1) /
                               (ctx.stats.m_f(i) * ctx.profile.p0() + 1.0));
        std::complex<double> x = c +
                                 amp * real.g(i) * rng.complex_gaussian(0.0, 1.0) +
                                 rng.complex_gaussian(0.0, 1.0);
        if (std::norm(x) > best_pow) {
            best_pow = std::norm(x);
            best = i;
        }
    }
    std::complex<double> c = rho(best + 1, 0, ctx.profile, ctx.stats) * real.h(best);
    double amp = std::sqrt(ctx.profile.p_relay(best + 1) /
                           (ctx.stats.m_f(best) * ctx.profile.p0() + 1.0));
    auto channel_pass = [&](std::complex<double> u) {
        return c * u + amp * real.g(best) * rng.complex_gaussian(0.0, 1.0) +
               rng.complex_gaussian(0.0, 1.0);
    };
    DifferentialScalarEncoder enc;
    DifferentialScalarDecoder dec(ctx.qpsk_points);
    dec.observe_reference(channel_pass(enc.reference()));
    TrialTally tally;
    for (int l = 0; l < ctx.cfg.diff_block_symbols; ++l) {
        int tx = draw_symbol(rng);
        int rx = dec.decode(channel_pass(enc.encode(ctx.qpsk_points[tx])));
        tally.bit_errors += qpsk_bit_errors(tx, rx);
    }
    tally.block_errors = tally.bit_errors > 0 ? 1 : 0;
    return tally;
}

TrialTally run_trial(const TrialContext& ctx, RngStream& rng) {
    switch (ctx.cfg.scheme) {
        case Scheme::ScalarFeedback:
            return trial_scalar(ctx, rng);
        case Scheme::AlamoutiPairs:
            return trial_alamouti(ctx, rng);
        case Scheme::Brs:
            return trial_brs(ctx, rng);
        case Scheme::DiffScalar:
            return trial_diff_scalar(ctx, rng);
        case Scheme::DiffAlamouti:
            return trial_diff_alamouti(ctx, rng);
        case Scheme::DiffBrs:
            return trial_diff_brs(ctx, rng);
    }
    throw std::logic_error("unreachable");
}

int bits_per_trial(const ExperimentConfig& cfg) {
    switch (cfg.scheme) {
        case Scheme::ScalarFeedback:
        case Scheme::Brs:
            return 2;
        case Scheme::AlamoutiPairs:
            return 4;
        default:
            return 2 * cfg.diff_block_symbols;
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    if (relays < 1) throw ConfigError("config: relays must be >= 1");
    if (is_pair_scheme(scheme) && relays % 2 != 0)
        throw ConfigError("config: pair schemes need an even relay count");
    if (snr_db.empty()) throw ConfigError("config: snr_db must be nonempty");
    for (std::size_t i = 1; i < snr_db.size(); ++i)
        if (snr_db[i] <= snr_db[i - 1])
            throw ConfigError("config: snr_db must be strictly ascending");
    if (target_errors < 1) throw ConfigError("config: target_errors must be >= 1");
    if (max_trials < 1) throw ConfigError("config: max_trials must be >= 1");
    if (feedback_error_prob < 0.0 || feedback_error_prob > 1.0)
        throw ConfigError("config: feedback_error_prob must lie in [0,1]");
    if (theta_bar < 0.0 || theta_bar > 1.0)
        throw ConfigError("config: theta_bar must lie in [0,1]");
    if (!(epsilon > 0.0)) throw ConfigError("config: epsilon must be > 0");
    if (power_split == PowerSplit::Explicit && lambda.size() != relays + 1)
        throw ConfigError("config: lambda needs R+1 entries");
    if (loading == LoadingMode::Optimized && scheme != Scheme::ScalarFeedback &&
        scheme != Scheme::AlamoutiPairs)
        throw ConfigError("config: loading applies to the coherent schemes only");
    if (diff_block_symbols < 2 || diff_block_symbols % 2 != 0)
        throw ConfigError("config: diff_block_symbols must be even and >= 2");
    if (explicit_stats && explicit_stats->size() != relays)
        throw ConfigError("config: relay records must cover all relays");
}

ChannelStats make_stats(const ExperimentConfig& config) {
    if (config.explicit_stats) return *config.explicit_stats;
    if (config.geometry != GeometryMode::None) {
        RngStream rng(config.seed, kGeometryStream);
        return place_relays_geometry(config.relays, config.circle_radius,
                                     config.src_dst_distance,
                                     config.path_loss_exponent,
                                     config.geometry == GeometryMode::Los, rng);
    }
    return ChannelStats::iid_rayleigh(config.relays);
}

int brs_select(const ChannelRealization& real, const PowerProfile& profile,
               const ChannelStats& stats) {
    int best = 0;
    double best_v = -1.0;
    for (int i = 0; i < real.size(); ++i) {
        double pi = profile.p_relay(i + 1);
        double v = std::norm(real.h(i)) * pi /
                   (1.0 + stats.m_f(i) * profile.p0() +
                    std::norm(real.g(i)) * pi);
        if (v > best_v) {
            best_v = v;
            best = i;
        }
    }
    return best;
}

CurveResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    ChannelStats stats = make_stats(config);
    const int t_block = is_pair_scheme(config.scheme) ? 2 : 1;
    const int n_load =
        is_pair_scheme(config.scheme) ? config.relays / 2 : config.relays;
    const int bpt = bits_per_trial(config);

    CurveResult result;
    for (std::size_t pi = 0; pi < config.snr_db.size(); ++pi) {
        double p_total = std::pow(10.0, config.snr_db[pi] / 10.0);
        PowerProfile profile =
            config.power_split == PowerSplit::Equal
                ? PowerProfile::equal_split(config.relays, p_total, t_block)
            : config.power_split == PowerSplit::DstcOptimal
                ? PowerProfile::dstc_split(config.relays, p_total, t_block)
                : PowerProfile(p_total, config.lambda, t_block);

        Eigen::VectorXd theta = Eigen::VectorXd::Ones(n_load);
        if (config.loading == LoadingMode::Optimized) {
            RngStream lrng(config.seed, kLoadingStream + pi);
            LoadingMatrices mats =
                config.scheme == Scheme::AlamoutiPairs
                    ? build_alamouti_matrices(stats, profile)
                    : build_scalar_matrices(stats, profile);
            theta = optimize_loading(mats, config.theta_bar, config.epsilon, lrng);
        }

        TrialContext ctx{config, stats, profile, theta};
        CurvePoint point;
        point.snr_db = config.snr_db[pi];
        long trials = 0;
        while (trials < config.max_trials &&
               point.bit_errors < config.target_errors) {
            long chunk = std::min(kChunk, config.max_trials - trials);
            unsigned nthreads = std::max(1u, std::thread::hardware_concurrency());
            std::vector<TrialTally> partial(nthreads);
            auto work = [&](unsigned w) {
                TrialTally acc;
                for (long t = trials + w; t < trials + chunk;
                     t += static_cast<long>(nthreads)) {
                    std::uint64_t stream =
                        (static_cast<std::uint64_t>(pi + 1) << 40) +
                        static_cast<std::uint64_t>(t);
                    RngStream rng(config.seed, stream);
                    TrialTally tt = run_trial(ctx, rng);
                    acc.bit_errors += tt.bit_errors;
                    acc.block_errors += tt.block_errors;
                }
                partial[w] = acc;
            };
            if (nthreads == 1) {
                work(0);
            } else {
                std::vector<std::thread> pool;
                for (unsigned w = 0; w < nthreads; ++w)
                    pool.emplace_back(work, w);
                for (auto& th : pool) th.join();
            }
            for (const auto& pt : partial) {
                point.bit_errors += pt.bit_errors;
                point.block_errors += pt.block_errors;
            }
            trials += chunk;
        }
        point.trials = trials;
        double bits = static_cast<double>(trials) * bpt;
        point.ber = point.bit_errors / bits;
        point.bler = static_cast<double>(point.block_errors) / trials;
        point.ber_stderr = std::sqrt(point.ber * (1.0 - point.ber) / bits);
        result.points.push_back(point);
        result.thetas.push_back(theta);
    }
    return result;
}

void write_csv(std::ostream& os, const CurveResult& result) {
    os << "snr_db,trials,bit_errors,ber,ber_stderr,block_errors,bler\n";
    char buf[256];
    for (const auto& p : result.points) {
        std::snprintf(buf, sizeof(buf), "%.6g,%ld,%ld,%.10g,%.10g,%ld,%.10g\n",
                      p.snr_db, p.trials, p.bit_errors, p.ber, p.ber_stderr,
                      p.block_errors, p.bler);
        os << buf;
    }
}

}  // namespace relaynet
