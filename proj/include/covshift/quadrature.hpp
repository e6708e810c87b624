#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace covshift {

/// Standard normal CDF via erfc; keeps full relative precision in the lower tail.
double normal_cdf(double z);
/// Upper tail 1 - normal_cdf(z), without cancellation.
double normal_sf(double z);

enum class QuadratureMethod { kAdaptive, kGaussHermite };

struct QuadratureConfig {
    QuadratureMethod method = QuadratureMethod::kAdaptive;
    /// Gauss-Hermite node count; ignored by the adaptive rule.
    std::size_t nodes = 64;
    /// Absolute error target of the adaptive rule.
    double abs_tol = 1e-8;

    void validate() const;
};

/// Nodes and weights for E[f(Z)], Z ~ N(0,1): E[f(Z)] ≈ Σ w_i f(z_i).
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussHermiteRule gauss_hermite_rule(std::size_t n);

/// E[f(X)] for X ~ N(mean, sd^2). The adaptive rule integrates over
/// mean ± 10 sd (outside mass < 2e-23) and throws QuadratureError when its
/// error estimate exceeds abs_tol.
double normal_expectation(const std::function<double(double)>& f, double mean, double sd,
                          const QuadratureConfig& config);

} // namespace covshift
