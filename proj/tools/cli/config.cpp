#include "config.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace covshift::cli {

namespace {

double parse_double(const std::string& key, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(d)) {
        throw ConfigError(key + ": expected a finite number, got '" + v + "'");
    }
    return d;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
    }
    return out;
}

std::size_t parse_size(const std::string& key, const std::string& v) {
    return static_cast<std::size_t>(parse_u64(key, v));
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") {
        return true;
    }
    if (v == "false" || v == "0") {
        return false;
    }
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

#define REAL_KEY(name, field, help) \
    {name, help, [](RunConfig& c, const std::string& v) { c.field = parse_double(name, v); }}
#define SIZE_KEY(name, field, help) \
    {name, help, [](RunConfig& c, const std::string& v) { c.field = parse_size(name, v); }}

std::vector<ConfigKey> make_keys() {
    return {
        {"seed", "64-bit master seed",
         [](RunConfig& c, const std::string& v) { c.seed = parse_u64("seed", v); }},
        {"out", "output directory",
         [](RunConfig& c, const std::string& v) { c.out = v; }},
        REAL_KEY("model.mu", model.mu, "negative-class mean"),
        REAL_KEY("model.nu", model.nu, "positive-class mean"),
        REAL_KEY("model.sigma", model.sigma, "shared class standard deviation"),
        REAL_KEY("model.p", model.p, "source positive prior"),
        REAL_KEY("model.tau", model.tau, "target covariate mean"),
        {"quad.method", "adaptive or gauss_hermite",
         [](RunConfig& c, const std::string& v) {
             if (v == "adaptive") {
                 c.quad.method = QuadratureMethod::kAdaptive;
             } else if (v == "gauss_hermite") {
                 c.quad.method = QuadratureMethod::kGaussHermite;
             } else {
                 throw ConfigError("quad.method: expected adaptive or gauss_hermite, got '" + v + "'");
             }
         }},
        SIZE_KEY("quad.nodes", quad.nodes, "Gauss-Hermite node count"),
        REAL_KEY("quad.abs_tol", quad.abs_tol, "adaptive quadrature absolute tolerance"),
        REAL_KEY("figure1.q_step", figure1_q_step, "spacing of the q grid on [0,1]"),
        REAL_KEY("figure2.x_min", figure2_x_min, "first split point"),
        REAL_KEY("figure2.x_max", figure2_x_max, "last split point"),
        REAL_KEY("figure2.x_step", figure2_x_step, "split point spacing"),
        SIZE_KEY("theorem.min_size", theorem_min_size, "smallest space size"),
        SIZE_KEY("theorem.max_size", theorem_max_size, "largest space size"),
        SIZE_KEY("theorem.draws", theorem_draws, "random (P, A) per structure"),
        SIZE_KEY("theorem.random_measures", theorem_random_measures,
                 "random reweightings probed per case"),
        REAL_KEY("theorem.tol", theorem_tol, "comparison tolerance"),
        SIZE_KEY("sample.source_n", source_n, "labeled source sample size"),
        SIZE_KEY("sample.target_n", target_n, "target sample size"),
        REAL_KEY("sample.pps_q", pps_q, "positive weight of the prior-shift target"),
        SIZE_KEY("probing.grid_n", probing_grid_n, "number of cost grid points"),
        REAL_KEY("probing.t_max", probing_t_max, "largest cost"),
        SIZE_KEY("probing.max_iter", probing_max_iter, "refinement pass limit"),
        REAL_KEY("probing.improvement_eps", probing_improvement_eps,
                 "strict improvement needed for a replacement"),
        {"probing.dump_index", "also write per-index tables",
         [](RunConfig& c, const std::string& v) {
             c.probing_dump_index = parse_bool("probing.dump_index", v);
         }},
        {"estimators.x_threshold", "split point of the discretized estimator",
         [](RunConfig& c, const std::string& v) {
             c.x_threshold = parse_double("estimators.x_threshold", v);
         }},
        {"estimate.source", "labeled source sample file",
         [](RunConfig& c, const std::string& v) { c.estimate_source = v; }},
        {"estimate.target", "target sample file",
         [](RunConfig& c, const std::string& v) { c.estimate_target = v; }},
    };
}

#undef REAL_KEY
#undef SIZE_KEY

} // namespace

const std::vector<ConfigKey>& config_keys() {
    static const std::vector<ConfigKey> keys = make_keys();
    return keys;
}

void apply_setting(RunConfig& config, const std::string& key, const std::string& value) {
    for (const auto& k : config_keys()) {
        if (k.name == key) {
            k.set(config, value);
            return;
        }
    }
    throw ConfigError("unknown configuration key '" + key + "'");
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        }
        out[key] = value;
    }
    return out;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

void RunConfig::validate() const {
    model.validate();
    quad.validate();
    if (!(figure1_q_step > 0.0 && figure1_q_step <= 1.0)) {
        throw ConfigError("figure1.q_step must lie in (0,1]");
    }
    if (!(figure2_x_step > 0.0) || !(figure2_x_max >= figure2_x_min)) {
        throw ConfigError("figure2 grid needs x_min <= x_max and a positive step");
    }
    if (theorem_min_size < 2 || theorem_max_size < theorem_min_size || theorem_max_size > 8) {
        throw ConfigError("theorem sizes need 2 <= min_size <= max_size <= 8");
    }
    if (theorem_draws == 0) {
        throw ConfigError("theorem.draws must be positive");
    }
    if (!(theorem_tol > 0.0)) {
        throw ConfigError("theorem.tol must be positive");
    }
    if (source_n < 2 || target_n == 0) {
        throw ConfigError("sample sizes must be positive (source at least 2)");
    }
    if (!(pps_q >= 0.0 && pps_q <= 1.0)) {
        throw ConfigError("sample.pps_q must lie in [0,1]");
    }
    if (probing_grid_n == 0 || !(probing_t_max > 0.0 && probing_t_max < 1.0)) {
        throw ConfigError("probing grid needs grid_n >= 1 and t_max in (0,1)");
    }
    if (!(probing_improvement_eps >= 0.0)) {
        throw ConfigError("probing.improvement_eps must be non-negative");
    }
}

finite::SweepConfig RunConfig::sweep() const {
    finite::SweepConfig s;
    s.min_size = theorem_min_size;
    s.max_size = theorem_max_size;
    s.draws_per_structure = theorem_draws;
    s.random_densities = theorem_random_measures;
    s.seed = seed;
    s.tol = theorem_tol;
    return s;
}

} // namespace covshift::cli
