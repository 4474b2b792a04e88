#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "relaynet/channel.hpp"
#include "relaynet/sigmodel.hpp"

namespace relaynet {

enum class Scheme {
    ScalarFeedback,
    AlamoutiPairs,
    DiffScalar,
    DiffAlamouti,
    Brs,
    DiffBrs
};

enum class BitAlgorithm { FullSearch, Sdr, Greedy, SequentialTraining };
enum class PowerSplit { Equal, DstcOptimal, Explicit };
enum class LoadingMode { None, Optimized };
enum class GeometryMode { None, Los, Nlos };

struct ExperimentConfig {
    Scheme scheme = Scheme::ScalarFeedback;
    BitAlgorithm bit_algorithm = BitAlgorithm::Sdr;
    int relays = 4;
    PowerSplit power_split = PowerSplit::Equal;
    Eigen::VectorXd lambda;  // used when power_split == Explicit
    std::vector<double> snr_db;
    long target_errors = 200;
    long max_trials = 10'000'000;
    double feedback_error_prob = 0.0;
    LoadingMode loading = LoadingMode::None;
    double theta_bar = 0.1;
    double epsilon = 1e-4;
    std::uint64_t seed = 1;
    GeometryMode geometry = GeometryMode::None;
    double circle_radius = 0.5;
    double src_dst_distance = 2.0;
    double path_loss_exponent = 3.0;
    std::optional<ChannelStats> explicit_stats;
    int diff_block_symbols = 4;  // BLER block for the differential schemes

    void validate() const;
};

struct CurvePoint {
    double snr_db = 0.0;
    long trials = 0;
    long bit_errors = 0;
    long block_errors = 0;
    double ber = 0.0;
    double bler = 0.0;
    double ber_stderr = 0.0;
};

struct CurveResult {
    std::vector<CurvePoint> points;
    std::vector<Eigen::VectorXd> thetas;  // loading applied per SNR point
};

// Channel statistics implied by the config: explicit records, the geometric
// placement (one placement per seed), or i.i.d. Rayleigh.
ChannelStats make_stats(const ExperimentConfig& config);

CurveResult run_experiment(const ExperimentConfig& config);

// Best-relay-selection rule: argmax |f_i g_i|^2 P_i / (1 + m_{f_i} P0 + |g_i|^2 P_i).
int brs_select(const ChannelRealization& real, const PowerProfile& profile,
               const ChannelStats& stats);

void write_csv(std::ostream& os, const CurveResult& result);

// Config file I/O (simple "key = value" text).  Parse errors throw
// ConfigError naming the offending key.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

}  // namespace relaynet
