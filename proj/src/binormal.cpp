#include "covshift/binormal.hpp"

#include "covshift/errors.hpp"

#include <cmath>
#include <random>

namespace covshift::binormal {

void BinormalParams::validate() const {
    if (!std::isfinite(mu) || !std::isfinite(nu) || !std::isfinite(sigma) ||
        !std::isfinite(p) || !std::isfinite(tau)) {
        throw PreconditionError("BinormalParams: parameters must be finite");
    }
    if (!(mu < nu)) {
        throw PreconditionError("BinormalParams: mu < nu required");
    }
    if (!(sigma > 0.0)) {
        throw PreconditionError("BinormalParams: sigma must be positive");
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw PreconditionError("BinormalParams: p must lie in (0,1)");
    }
}

PosteriorCoefficients coefficients(const BinormalParams& params) {
    params.validate();
    const double s2 = params.sigma * params.sigma;
    return {(params.mu - params.nu) / s2,
            (params.nu * params.nu - params.mu * params.mu) / (2.0 * s2) +
                std::log((1.0 - params.p) / params.p)};
}

double posterior(double x, const PosteriorCoefficients& c) {
    const double z = c.a * x + c.b;
    if (z > 0.0) {
        const double e = std::exp(-z);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(z));
}

double posterior(double x, const BinormalParams& params) {
    return posterior(x, coefficients(params));
}

double posterior_inverse(double t, const BinormalParams& params) {
    if (!(t > 0.0 && t < 1.0)) {
        throw PreconditionError("posterior_inverse: t must lie in (0,1)");
    }
    const auto c = coefficients(params);
    return (std::log((1.0 - t) / t) - c.b) / c.a;
}

double target_sigma(const BinormalParams& params) {
    params.validate();
    const double d = params.mu - params.nu;
    return std::sqrt(params.sigma * params.sigma + params.p * (1.0 - params.p) * d * d);
}

ClassRates population_rates(const BinormalParams& params, double threshold) {
    params.validate();
    return {normal_sf((threshold - params.nu) / params.sigma),
            normal_sf((threshold - params.mu) / params.sigma)};
}

double true_target_prior(const BinormalParams& params, const QuadratureConfig& quad) {
    const auto c = coefficients(params);
    return normal_expectation([&](double x) { return posterior(x, c); }, params.tau,
                              target_sigma(params), quad);
}

MonteCarloEstimate mc_target_prior(const BinormalParams& params, std::size_t draws,
                                   std::uint64_t seed) {
    if (draws < 2) {
        throw PreconditionError("mc_target_prior: at least two draws are required");
    }
    const auto c = coefficients(params);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> x_dist(params.tau, target_sigma(params));
    // Welford keeps the variance accurate over 1e7 draws.
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
        const double v = posterior(x_dist(rng), c);
        const double delta = v - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (v - mean);
    }
    const double n = static_cast<double>(draws);
    return {mean, std::sqrt(m2 / (n - 1.0) / n), draws};
}

Discretization discretization_posteriors(const BinormalParams& params, double x) {
    params.validate();
    const double zp = (x - params.nu) / params.sigma;
    const double zn = (x - params.mu) / params.sigma;

    const double pos_below = params.p * normal_cdf(zp);
    const double all_below = pos_below + (1.0 - params.p) * normal_cdf(zn);
    const double pos_above = params.p * normal_sf(zp);
    const double all_above = pos_above + (1.0 - params.p) * normal_sf(zn);

    // Limits: the positive class has the lighter left tail and heavier right tail.
    Discretization d;
    d.posterior_below = all_below < 1e-300 ? 0.0 : pos_below / all_below;
    d.posterior_above = all_above < 1e-300 ? 1.0 : pos_above / all_above;
    return d;
}

double pseudo_prior(const BinormalParams& params, double x) {
    const auto d = discretization_posteriors(params, x);
    const double z = (x - params.tau) / target_sigma(params);
    return normal_cdf(z) * d.posterior_below + normal_sf(z) * d.posterior_above;
}

ClassMeans class_conditional_means(const BinormalParams& params, const QuadratureConfig& quad) {
    const auto c = coefficients(params);
    auto eta = [&](double x) { return posterior(x, c); };
    return {normal_expectation(eta, params.mu, params.sigma, quad),
            normal_expectation(eta, params.nu, params.sigma, quad)};
}

std::vector<Figure1Row> figure1_curves(const BinormalParams& params,
                                       const std::vector<double>& q_grid,
                                       const QuadratureConfig& quad) {
    for (double q : q_grid) {
        if (!(q >= 0.0 && q <= 1.0)) {
            throw PreconditionError("figure1_curves: grid values must lie in [0,1]");
        }
    }
    const auto m = class_conditional_means(params, quad);
    std::vector<Figure1Row> rows;
    rows.reserve(q_grid.size());
    for (double q : q_grid) {
        rows.push_back({q, q, q * m.m1 + (1.0 - q) * m.m0});
    }
    return rows;
}

std::vector<Figure2Row> figure2_curve(const BinormalParams& params,
                                      const std::vector<double>& x_grid,
                                      const QuadratureConfig& quad) {
    for (std::size_t i = 1; i < x_grid.size(); ++i) {
        if (!(x_grid[i - 1] <= x_grid[i])) {
            throw PreconditionError("figure2_curve: grid must be sorted");
        }
    }
    const double truth = true_target_prior(params, quad);
    std::vector<Figure2Row> rows;
    rows.reserve(x_grid.size());
    for (double x : x_grid) {
        rows.push_back({x, pseudo_prior(params, x), truth});
    }
    return rows;
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw PreconditionError("uniform_grid: need lo <= hi and a positive step");
    }
    const double steps = (hi - lo) / step;
    const double rounded = std::round(steps);
    if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps)) {
        throw PreconditionError("uniform_grid: range is not a whole number of steps");
    }
    const auto count = static_cast<std::size_t>(rounded);
    std::vector<double> grid(count + 1);
    for (std::size_t i = 0; i <= count; ++i) {
        grid[i] = count == 0 ? lo : lo + (hi - lo) * static_cast<double>(i) / rounded;
    }
    return grid;
}

namespace {

void require_positive(std::size_t n) {
    if (n == 0) {
        throw PreconditionError("sample size must be at least 1");
    }
}

} // namespace

LabeledSample sample_source(const BinormalParams& params, std::size_t n, std::uint64_t seed) {
    params.validate();
    require_positive(n);
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution label(params.p);
    std::normal_distribution<double> noise(0.0, params.sigma);
    std::vector<double> x(n);
    std::vector<std::uint8_t> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = label(rng) ? 1 : 0;
        x[i] = (y[i] != 0 ? params.nu : params.mu) + noise(rng);
    }
    return LabeledSample(std::move(x), std::move(y), seed);
}

UnlabeledSample sample_target_cs(const BinormalParams& params, std::size_t n, std::uint64_t seed) {
    require_positive(n);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(params.tau, target_sigma(params));
    std::vector<double> x(n);
    for (auto& v : x) {
        v = dist(rng);
    }
    return UnlabeledSample(std::move(x), seed);
}

UnlabeledSample sample_target_pps(const BinormalParams& params, double q, std::size_t n,
                                  std::uint64_t seed) {
    params.validate();
    require_positive(n);
    if (!(q >= 0.0 && q <= 1.0)) {
        throw PreconditionError("sample_target_pps: q must lie in [0,1]");
    }
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution label(q);
    std::normal_distribution<double> noise(0.0, params.sigma);
    std::vector<double> x(n);
    for (auto& v : x) {
        v = (label(rng) ? params.nu : params.mu) + noise(rng);
    }
    return UnlabeledSample(std::move(x), seed);
}

} // namespace covshift::binormal
