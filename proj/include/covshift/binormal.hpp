#pragma once

// The binormal equal-variance model: X | Y=1 ~ N(nu, sigma^2),
// X | Y=0 ~ N(mu, sigma^2), P[Y=1] = p under the source. The covariate-shift
// target is X ~ N(tau, target_sigma^2) with the source posterior carried over.

#include "covshift/quadrature.hpp"
#include "covshift/sample.hpp"

#include <cstdint>
#include <vector>

namespace covshift::binormal {

struct BinormalParams {
    double mu = 0.0;
    double nu = 1.5;
    double sigma = 1.0;
    double p = 0.3;
    double tau = 2.5;

    /// Throws PreconditionError unless mu < nu, sigma > 0, 0 < p < 1, all finite.
    void validate() const;
};

/// Posterior P[Y=1 | X=x] = 1 / (1 + exp(a x + b)).
struct PosteriorCoefficients {
    double a = 0.0;
    double b = 0.0;
};

PosteriorCoefficients coefficients(const BinormalParams& params);

double posterior(double x, const PosteriorCoefficients& c);
double posterior(double x, const BinormalParams& params);

/// The x at which the posterior equals t, for t in (0,1).
double posterior_inverse(double t, const BinormalParams& params);

/// Standard deviation of the source covariate marginal, reused for the target.
double target_sigma(const BinormalParams& params);

/// True and false positive rates of the classifier {x > threshold}.
struct ClassRates {
    double tpr = 0.0;
    double fpr = 0.0;
};

ClassRates population_rates(const BinormalParams& params, double threshold);

/// Q[Y=1] = E_Q[posterior(X)] under the covariate-shift target.
double true_target_prior(const BinormalParams& params, const QuadratureConfig& quad = {});

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t draws = 0;
};

MonteCarloEstimate mc_target_prior(const BinormalParams& params, std::size_t draws,
                                   std::uint64_t seed);

/// Source posteriors on the two cells of the discretization {X <= x}, {X > x}.
struct Discretization {
    double posterior_below = 0.0;
    double posterior_above = 0.0;
};

Discretization discretization_posteriors(const BinormalParams& params, double x);

/// Q[X <= x] P[A|X <= x] + Q[X > x] P[A|X > x].
double pseudo_prior(const BinormalParams& params, double x);

/// m0 = E[posterior(X)] for X ~ N(mu, sigma^2), m1 likewise around nu.
struct ClassMeans {
    double m0 = 0.0;
    double m1 = 0.0;
};

ClassMeans class_conditional_means(const BinormalParams& params, const QuadratureConfig& quad = {});

struct Figure1Row {
    double q = 0.0;
    double pps_estimate = 0.0;
    double cs_estimate = 0.0;
};

std::vector<Figure1Row> figure1_curves(const BinormalParams& params,
                                       const std::vector<double>& q_grid,
                                       const QuadratureConfig& quad = {});

struct Figure2Row {
    double x = 0.0;
    double pseudo_prior = 0.0;
    double true_prior = 0.0;
};

std::vector<Figure2Row> figure2_curve(const BinormalParams& params,
                                      const std::vector<double>& x_grid,
                                      const QuadratureConfig& quad = {});

/// lo, lo + step, ..., hi; hi - lo must be a whole number of steps (to 1e-9).
std::vector<double> uniform_grid(double lo, double hi, double step);

LabeledSample sample_source(const BinormalParams& params, std::size_t n, std::uint64_t seed);
UnlabeledSample sample_target_cs(const BinormalParams& params, std::size_t n, std::uint64_t seed);
/// Mixture of the two class conditionals with weight q on the positive class.
UnlabeledSample sample_target_pps(const BinormalParams& params, double q, std::size_t n,
                                  std::uint64_t seed);

} // namespace covshift::binormal
