#pragma once

// Run configuration for the covshift tool. Values come from built-in defaults,
// then an optional `key = value` file, then command-line flags named after the
// same dotted keys.

#include "covshift/binormal.hpp"
#include "covshift/quadrature.hpp"
#include "covshift/theorem_sweep.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace covshift::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::uint64_t seed = 42;
    std::filesystem::path out = ".";

    binormal::BinormalParams model;
    QuadratureConfig quad;

    double figure1_q_step = 0.01;
    double figure2_x_min = -3.0;
    double figure2_x_max = 8.0;
    double figure2_x_step = 0.01;

    std::size_t theorem_min_size = 2;
    std::size_t theorem_max_size = 6;
    std::size_t theorem_draws = 20;
    std::size_t theorem_random_measures = 8;
    double theorem_tol = 1e-9;

    std::size_t source_n = 100000;
    std::size_t target_n = 100000;
    double pps_q = 0.6;
    std::size_t probing_grid_n = 1000;
    double probing_t_max = 0.999;
    std::size_t probing_max_iter = 100;
    double probing_improvement_eps = 1e-12;
    bool probing_dump_index = false;

    /// Split point of the discretized estimator; the Bayes cut when unset.
    std::optional<double> x_threshold;
    std::optional<std::filesystem::path> estimate_source;
    std::optional<std::filesystem::path> estimate_target;

    /// Throws ConfigError (or PreconditionError from the model) on bad values.
    void validate() const;

    finite::SweepConfig sweep() const;
};

struct ConfigKey {
    std::string name;
    std::string help;
    std::function<void(RunConfig&, const std::string&)> set;
};

const std::vector<ConfigKey>& config_keys();

/// Applies one value; unknown keys and unparsable values throw ConfigError.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Parses `key = value` lines; '#' starts a comment. Later lines win.
std::map<std::string, std::string> parse_config_text(const std::string& text);

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

} // namespace covshift::cli
