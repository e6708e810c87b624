#include "covshift/binormal.hpp"
#include "covshift/errors.hpp"
#include "covshift/estimators.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

using namespace covshift;
using namespace covshift::estimators;
using binormal::BinormalParams;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double kTrueTargetPrior = 0.761021695326496325;
constexpr double kVarPosteriorCs = 0.0591364954150640183;
constexpr double kM0 = 0.193309125769215676;
constexpr double kM1 = 0.548945373205163422;
// Q[X > -b/a] under the covariate-shift target.
constexpr double kCcAtHalf = 0.835629400940378965;

ScoreFn model_posterior(const BinormalParams& p) {
    const auto c = binormal::coefficients(p);
    return [c](double x) { return binormal::posterior(x, c); };
}

double sample_variance(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) {
        m += x;
    }
    m /= static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) {
        s += (x - m) * (x - m);
    }
    return s / static_cast<double>(v.size() - 1);
}

} // namespace

TEST_CASE("method names and csv rows", "[estimators]") {
    CHECK(method_name(Method::kPa) == "pa");
    CHECK(method_name(Method::kMeanMatching) == "mean_matching");
    EstimatorReport r;
    r.method = Method::kAcc;
    r.estimate = 1.0;
    r.raw = 1.25;
    r.clipped = true;
    r.n_target = 10;
    CHECK(to_csv_row(r) == "acc,1,10,true,1.25");
    CHECK(kReportCsvHeader == "method,estimate,n_target,clipped,raw");
}

TEST_CASE("probability average", "[estimators]") {
    const UnlabeledSample t({-1.0, 0.0, 2.0});
    const auto r = pa_estimate([](double) { return 0.37; }, t);
    CHECK_THAT(r.estimate, WithinAbs(0.37, 1e-15));
    CHECK(r.n_target == 3);
    CHECK_FALSE(r.clipped);

    const BinormalParams p;
    const std::size_t n = 1000000;
    const auto cs = binormal::sample_target_cs(p, n, 101);
    const auto pa = pa_estimate(model_posterior(p), cs);
    CHECK(std::abs(pa.estimate - kTrueTargetPrior) <= 3.0 * std::sqrt(kVarPosteriorCs / n));

    const double q = 0.6;
    const auto pps = binormal::sample_target_pps(p, q, n, 102);
    std::vector<double> eta(n);
    std::transform(pps.x().begin(), pps.x().end(), eta.begin(), model_posterior(p));
    const auto pa_pps = pa_estimate(model_posterior(p), pps);
    CHECK(std::abs(pa_pps.estimate - (q * kM1 + (1.0 - q) * kM0)) <=
          3.0 * std::sqrt(sample_variance(eta) / n));
}

TEST_CASE("probability average is permutation invariant and subsample consistent",
          "[estimators][property]") {
    const BinormalParams p;
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        auto x = binormal::sample_target_cs(p, 1 + trial * 37, 200 + trial).x();
        const double full = pa_estimate(model_posterior(p), UnlabeledSample(x)).estimate;
        std::shuffle(x.begin(), x.end(), rng);
        REQUIRE(std::abs(pa_estimate(model_posterior(p), UnlabeledSample(x)).estimate - full) <=
                1e-12);
        if (x.size() >= 2) {
            const std::size_t k = 1 + rng() % (x.size() - 1);
            const std::vector<double> left(x.begin(), x.begin() + static_cast<long>(k));
            const std::vector<double> right(x.begin() + static_cast<long>(k), x.end());
            const double combined =
                (pa_estimate(model_posterior(p), UnlabeledSample(left)).estimate * k +
                 pa_estimate(model_posterior(p), UnlabeledSample(right)).estimate *
                     (x.size() - k)) /
                x.size();
            REQUIRE(std::abs(combined - full) <= 1e-12);
        }
    }
}

TEST_CASE("classify and count", "[estimators]") {
    const UnlabeledSample t({-1.0, 0.0, 2.0, 5.0});
    CHECK(cc_estimate({-INFINITY}, t).estimate == 1.0);
    CHECK(cc_estimate({INFINITY}, t).estimate == 0.0);
    CHECK(cc_estimate({0.0}, t).estimate == 0.5);
    CHECK(cc_estimate({0.0, Orientation::kBelow}, t).estimate == 0.25);

    const BinormalParams p;
    const std::size_t n = 1000000;
    const auto cs = binormal::sample_target_cs(p, n, 103);
    const auto r = cc_estimate(model_posterior(p), {0.5}, cs);
    CHECK(std::abs(r.estimate - kCcAtHalf) <= 3.0 * std::sqrt(kCcAtHalf * (1 - kCcAtHalf) / n));
    const auto c = binormal::coefficients(p);
    CHECK(cc_estimate({-c.b / c.a}, cs).estimate == r.estimate);
}

TEST_CASE("classifier rates", "[estimators]") {
    const LabeledSample s({0.0, 1.0, 2.0, 3.0}, {0, 1, 0, 1});
    const auto r = classifier_rates({1.5}, s);
    CHECK(r.tpr == 0.5);
    CHECK(r.fpr == 0.5);
    const auto r2 = classifier_rates({0.5}, s);
    CHECK(r2.tpr == 1.0);
    CHECK(r2.fpr == 0.5);
    CHECK_THROWS_AS(classifier_rates({0.0}, LabeledSample({1.0, 2.0}, {1, 1})),
                    PreconditionError);
}

TEST_CASE("adjusted count", "[estimators]") {
    const auto perfect = adjust_count(0.42, {1.0, 0.0}, 100);
    CHECK_THAT(perfect.estimate, WithinAbs(0.42, 1e-15));
    CHECK(perfect.method == Method::kAcc);
    REQUIRE(perfect.rates.has_value());

    const auto low = adjust_count(0.1, {0.8, 0.2}, 100);
    CHECK(low.estimate == 0.0);
    CHECK(low.clipped);
    CHECK(low.raw < 0.0);

    CHECK_THROWS_AS(adjust_count(0.5, {0.3, 0.3 + 1e-7}, 100), PreconditionError);
    const LabeledSample s({0.0, 1.0, 2.0, 3.0}, {0, 1, 0, 1});
    CHECK_THROWS_AS(acc_estimate({INFINITY}, s, UnlabeledSample({1.0})), PreconditionError);
}

TEST_CASE("adjusted count recovers the prior at population level", "[estimators][property]") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        BinormalParams p;
        p.mu = -2.0 + 2.0 * u(rng);
        p.nu = p.mu + 0.3 + 2.0 * u(rng);
        p.sigma = 0.5 + u(rng);
        p.p = 0.1 + 0.8 * u(rng);
        const double threshold = p.mu - 1.0 + (p.nu - p.mu + 2.0) * u(rng);
        const double q = u(rng);
        const auto rates = binormal::population_rates(p, threshold);
        const double cc = q * rates.tpr + (1.0 - q) * rates.fpr;
        REQUIRE(std::abs(adjust_count(cc, rates, 1).raw - q) <= 1e-9);
    }
}

TEST_CASE("adjusted count on prior-shift samples", "[estimators]") {
    const BinormalParams p;
    const std::size_t n = 1000000;
    const auto source = binormal::sample_source(p, n, 104);
    const auto c = binormal::coefficients(p);
    const ThresholdClassifier clf{-c.b / c.a};
    for (double q : {0.1, 0.5, 0.9}) {
        const auto target = binormal::sample_target_pps(p, q, n, 105);
        const auto r = acc_estimate(clf, source, target);
        REQUIRE(r.rates.has_value());
        const double gap = r.rates->tpr - r.rates->fpr;
        const double cc = cc_estimate(clf, target).raw;
        const double n1 = static_cast<double>(source.positives());
        const double n0 = static_cast<double>(n) - n1;
        const double var = cc * (1 - cc) / n + q * q * r.rates->tpr * (1 - r.rates->tpr) / n1 +
                           (1 - q) * (1 - q) * r.rates->fpr * (1 - r.rates->fpr) / n0;
        CHECK(std::abs(r.estimate - q) <= 3.0 * std::sqrt(var) / gap);
    }
}

TEST_CASE("mean matching", "[estimators]") {
    const BinormalParams p;
    const std::size_t n = 1000000;
    for (double q : {0.1, 0.6, 0.9}) {
        const auto target = binormal::sample_target_pps(p, q, n, 106);
        const double var = p.sigma * p.sigma + q * (1 - q) * (p.nu - p.mu) * (p.nu - p.mu);
        CHECK(std::abs(mean_matching_estimate(p, target).estimate - q) <=
              3.0 * std::sqrt(var / n) / (p.nu - p.mu));
    }
    CHECK(mean_matching_estimate(p, UnlabeledSample({1.5, 1.5, 1.5})).estimate == 1.0);

    const auto cs = binormal::sample_target_cs(p, n, 107);
    const auto r = mean_matching_estimate(p, cs);
    CHECK(r.estimate == 1.0);
    CHECK(r.clipped);
    CHECK(std::abs(r.raw - 2.5 / 1.5) <= 3.0 * std::sqrt(1.4725 / n) / 1.5);

    BinormalParams same = p;
    same.nu = same.mu;
    CHECK_THROWS_AS(mean_matching_estimate(same, cs), PreconditionError);
}

TEST_CASE("discretized estimator", "[estimators]") {
    const BinormalParams p;
    const std::size_t n = 1000000;
    const auto cs = binormal::sample_target_cs(p, n, 108);
    for (double x : {0.0, 1.3, 2.5}) {
        const auto d = binormal::discretization_posteriors(p, x);
        const double qb = covshift::normal_cdf((x - p.tau) / binormal::target_sigma(p));
        const double band = std::abs(d.posterior_below - d.posterior_above) *
                            std::sqrt(qb * (1 - qb) / n);
        CHECK(std::abs(discretized_estimate(p, x, cs).estimate - binormal::pseudo_prior(p, x)) <=
              3.0 * band);
    }
    CHECK_THAT(discretized_estimate(p, -100.0, cs).estimate, WithinAbs(0.3, 1e-12));
    for (double x = -3.0; x <= 8.0; x += 0.1) {
        CHECK(std::abs(discretized_estimate(p, x, cs).estimate - kTrueTargetPrior) >= 0.1);
    }
}

TEST_CASE("estimators on the source itself", "[estimators]") {
    const BinormalParams p;
    const std::size_t n = 1000000;
    const auto source = binormal::sample_source(p, n, 109);
    const auto as_target = source.covariates();
    CHECK(std::abs(pa_estimate(model_posterior(p), as_target).estimate - 0.3) <=
          3.0 * std::sqrt(0.21 / n));
    const double cut = 1.0;
    const auto rates = binormal::population_rates(p, cut);
    const double expected = p.p * rates.tpr + (1 - p.p) * rates.fpr;
    CHECK(std::abs(cc_estimate({cut}, as_target).estimate - expected) <=
          3.0 * std::sqrt(expected * (1 - expected) / n));
}
