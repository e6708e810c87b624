#include "covshift/quadrature.hpp"

#include "covshift/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <string>

namespace covshift {

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double normal_sf(double z) {
    return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

void QuadratureConfig::validate() const {
    if (!(abs_tol > 0.0)) {
        throw PreconditionError("QuadratureConfig: tolerance must be positive");
    }
    if (nodes < 3) {
        throw PreconditionError("QuadratureConfig: at least three nodes are required");
    }
}

GaussHermiteRule gauss_hermite_rule(std::size_t n) {
    if (n < 3 || n > 200) {
        throw PreconditionError("gauss_hermite_rule: node count must lie in [3, 200]");
    }
    // Newton iteration on orthonormal physicists' Hermite polynomials with the
    // usual asymptotic starting guesses for the largest roots.
    constexpr double kPiMinusQuarter = 0.7511255444649425;
    const double dn = static_cast<double>(n);
    std::vector<double> x(n);
    std::vector<double> w(n);
    double z = 0.0;
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * dn + 1.0) - 1.85575 * std::pow(2.0 * dn + 1.0, -0.16667);
        } else if (i == 1) {
            z -= 1.14 * std::pow(dn, 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * x[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * x[1];
        } else {
            z = 2.0 * z - x[i - 2];
        }
        double derivative = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = kPiMinusQuarter;
            double p2 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                const double dj = static_cast<double>(j);
                p1 = z * std::sqrt(2.0 / (dj + 1.0)) * p2 - std::sqrt(dj / (dj + 1.0)) * p3;
            }
            derivative = std::sqrt(2.0 * dn) * p2;
            const double previous = z;
            z = previous - p1 / derivative;
            if (std::abs(z - previous) <= 1e-14 * std::max(1.0, std::abs(z))) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = w[n - 1 - i] = 2.0 / (derivative * derivative);
    }
    // Convert from weight exp(-x^2) to the standard normal density.
    GaussHermiteRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        rule.nodes[i] = std::numbers::sqrt2 * x[n - 1 - i];
        rule.weights[i] = w[n - 1 - i] / std::sqrt(std::numbers::pi);
    }
    return rule;
}

double normal_expectation(const std::function<double(double)>& f, double mean, double sd,
                          const QuadratureConfig& config) {
    config.validate();
    if (!(sd > 0.0)) {
        throw PreconditionError("normal_expectation: standard deviation must be positive");
    }
    if (config.method == QuadratureMethod::kGaussHermite) {
        const auto rule = gauss_hermite_rule(config.nodes);
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            sum += rule.weights[i] * f(mean + sd * rule.nodes[i]);
        }
        return sum;
    }

    const double norm = 1.0 / (sd * std::sqrt(2.0 * std::numbers::pi));
    auto integrand = [&](double x) {
        const double u = (x - mean) / sd;
        return f(x) * norm * std::exp(-0.5 * u * u);
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    const double lo = mean - 10.0 * sd;
    const double hi = mean + 10.0 * sd;
    // Boost stops on error <= tol * L1; rescale so the bound is absolute.
    double error = 0.0;
    double l1 = 0.0;
    double value = GK::integrate(integrand, lo, hi, 20, config.abs_tol, &error, &l1);
    if (error > config.abs_tol && l1 > 1.0) {
        value = GK::integrate(integrand, lo, hi, 20, config.abs_tol / l1, &error);
    }
    if (!(error <= config.abs_tol)) {
        throw QuadratureError("normal_expectation: adaptive quadrature did not reach tolerance "
                              "(residual " + std::to_string(error) + ")",
                              error);
    }
    return value;
}

} // namespace covshift
