#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "relaynet/harness.hpp"

namespace relaynet {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double out;
    try {
        out = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for key '" + key + "'");
    }
    if (pos != v.size())
        throw ConfigError("config: bad numeric value for key '" + key + "'");
    return out;
}

long parse_long(const std::string& key, const std::string& v) {
    double d = parse_double(key, v);
    long l = static_cast<long>(d);
    if (static_cast<double>(l) != d)
        throw ConfigError("config: key '" + key + "' needs an integer");
    return l;
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(v);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty())
            throw ConfigError("config: empty list entry for key '" + key + "'");
        out.push_back(parse_double(key, item));
    }
    if (out.empty())
        throw ConfigError("config: key '" + key + "' needs at least one value");
    return out;
}

Scheme parse_scheme(const std::string& v) {
    if (v == "scalar") return Scheme::ScalarFeedback;
    if (v == "alamouti") return Scheme::AlamoutiPairs;
    if (v == "diff_scalar") return Scheme::DiffScalar;
    if (v == "diff_alamouti") return Scheme::DiffAlamouti;
    if (v == "brs") return Scheme::Brs;
    if (v == "diff_brs") return Scheme::DiffBrs;
    throw ConfigError("config: unknown scheme '" + v + "'");
}

BitAlgorithm parse_algorithm(const std::string& v) {
    if (v == "full_search") return BitAlgorithm::FullSearch;
    if (v == "sdr") return BitAlgorithm::Sdr;
    if (v == "greedy") return BitAlgorithm::Greedy;
    if (v == "training") return BitAlgorithm::SequentialTraining;
    throw ConfigError("config: unknown bit_algorithm '" + v + "'");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    cfg.snr_db.clear();
    // relay_<i> rows: mu_f_re mu_f_im var_f mu_g_re mu_g_im var_g
    std::map<int, std::array<double, 6>> relay_rows;

    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected 'key = value' in line '" + line +
                              "'");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config: missing key in '" + line + "'");
        if (val.empty())
            throw ConfigError("config: missing value for key '" + key + "'");

        if (key == "scheme") {
            cfg.scheme = parse_scheme(val);
        } else if (key == "bit_algorithm") {
            cfg.bit_algorithm = parse_algorithm(val);
        } else if (key == "relays") {
            cfg.relays = static_cast<int>(parse_long(key, val));
        } else if (key == "power_split") {
            if (val == "equal")
                cfg.power_split = PowerSplit::Equal;
            else if (val == "dstc")
                cfg.power_split = PowerSplit::DstcOptimal;
            else if (val == "explicit")
                cfg.power_split = PowerSplit::Explicit;
            else
                throw ConfigError("config: unknown power_split '" + val + "'");
        } else if (key == "lambda") {
            auto v = parse_list(key, val);
            cfg.lambda = Eigen::Map<Eigen::VectorXd>(v.data(),
                                                     static_cast<long>(v.size()));
        } else if (key == "snr_db") {
            cfg.snr_db = parse_list(key, val);
        } else if (key == "target_errors") {
            cfg.target_errors = parse_long(key, val);
        } else if (key == "max_trials") {
            cfg.max_trials = parse_long(key, val);
        } else if (key == "feedback_error_prob") {
            cfg.feedback_error_prob = parse_double(key, val);
        } else if (key == "loading") {
            if (val == "none")
                cfg.loading = LoadingMode::None;
            else if (val == "optimized")
                cfg.loading = LoadingMode::Optimized;
            else
                throw ConfigError("config: unknown loading mode '" + val + "'");
        } else if (key == "theta_bar") {
            cfg.theta_bar = parse_double(key, val);
        } else if (key == "epsilon") {
            cfg.epsilon = parse_double(key, val);
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_long(key, val));
        } else if (key == "geometry") {
            if (val == "none")
                cfg.geometry = GeometryMode::None;
            else if (val == "los")
                cfg.geometry = GeometryMode::Los;
            else if (val == "nlos")
                cfg.geometry = GeometryMode::Nlos;
            else
                throw ConfigError("config: unknown geometry mode '" + val + "'");
        } else if (key == "circle_radius") {
            cfg.circle_radius = parse_double(key, val);
        } else if (key == "src_dst_distance") {
            cfg.src_dst_distance = parse_double(key, val);
        } else if (key == "path_loss_exponent") {
            cfg.path_loss_exponent = parse_double(key, val);
        } else if (key == "diff_block_symbols") {
            cfg.diff_block_symbols = static_cast<int>(parse_long(key, val));
        } else if (key.rfind("relay_", 0) == 0) {
            int idx;
            try {
                idx = std::stoi(key.substr(6));
            } catch (const std::exception&) {
                throw ConfigError("config: unknown key '" + key + "'");
            }
            if (idx < 1) throw ConfigError("config: relay indices start at 1");
            std::istringstream row(val);
            std::array<double, 6> vals;
            for (double& x : vals) {
                std::string tok;
                if (!(row >> tok))
                    throw ConfigError("config: key '" + key +
                                      "' needs 6 values (mu_f re/im, var_f, "
                                      "mu_g re/im, var_g)");
                x = parse_double(key, tok);
            }
            std::string extra;
            if (row >> extra)
                throw ConfigError("config: key '" + key + "' has extra values");
            relay_rows[idx] = vals;
        } else {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }

    if (!relay_rows.empty()) {
        const int n = cfg.relays;
        if (static_cast<int>(relay_rows.size()) != n)
            throw ConfigError("config: relay rows must cover relay_1..relay_" +
                              std::to_string(n));
        Eigen::VectorXcd mu_f(n), mu_g(n);
        Eigen::VectorXd var_f(n), var_g(n);
        for (int i = 1; i <= n; ++i) {
            auto it = relay_rows.find(i);
            if (it == relay_rows.end())
                throw ConfigError("config: missing relay_" + std::to_string(i));
            const auto& v = it->second;
            mu_f(i - 1) = {v[0], v[1]};
            var_f(i - 1) = v[2];
            mu_g(i - 1) = {v[3], v[4]};
            var_g(i - 1) = v[5];
        }
        try {
            cfg.explicit_stats.emplace(mu_f, var_f, mu_g, var_g);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config: bad relay statistics: ") +
                              e.what());
        }
    }

    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace relaynet
