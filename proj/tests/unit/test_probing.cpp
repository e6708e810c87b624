#include "covshift/binormal.hpp"
#include "covshift/errors.hpp"
#include "covshift/estimators.hpp"
#include "covshift/probing.hpp"
#include "covshift/quadrature.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

using namespace covshift;
using namespace covshift::probing;
using binormal::BinormalParams;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double kInf = INFINITY;
constexpr double kVarPosteriorCs = 0.0591364954150640183;

double brute_z(const ProbingEnsemble& e, double x) {
    double z = 0.0;
    for (std::size_t i = 1; i <= e.grid().size(); ++i) {
        z += e.contains(i, x) ? e.grid().width(i) : 0.0;
    }
    return z;
}

ProbingEnsemble random_ensemble(const CostGrid& grid, std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> cuts(grid.size());
    for (auto& c : cuts) {
        c = u(rng);
    }
    return ProbingEnsemble(grid, cuts);
}

} // namespace

TEST_CASE("cost grid", "[probing]") {
    const auto g = CostGrid::uniform();
    CHECK(g.size() == 1000);
    CHECK(g.t(0) == 0.0);
    CHECK(g.t(1000) == 0.999);
    CHECK_THAT(g.max_width(), WithinAbs(0.000999, 1e-15));
    CHECK_THROWS_AS(CostGrid({0.0}), PreconditionError);
    CHECK_THROWS_AS(CostGrid({0.1, 0.5}), PreconditionError);
    CHECK_THROWS_AS(CostGrid({0.0, 0.5, 0.5}), PreconditionError);
    CHECK_THROWS_AS(CostGrid({0.0, 0.5, 1.0}), PreconditionError);
    CHECK_THROWS_AS(CostGrid::uniform(0), PreconditionError);
}

TEST_CASE("weighted loss", "[probing]") {
    const BinormalLoss analytic(BinormalParams{});
    CHECK(weighted_loss(-kInf, 0.0, analytic) == 0.0);
    CHECK(weighted_loss(kInf, 1.0, analytic) == 0.0);
    CHECK_THAT(weighted_loss(kInf, 0.0, analytic), WithinAbs(0.3, 1e-15));
    CHECK_THAT(weighted_loss(-kInf, 1.0, analytic), WithinAbs(0.7, 1e-15));
    CHECK_THROWS_AS(weighted_loss(0.0, 1.5, analytic), PreconditionError);

    // The four source cells of {x > c} add up to one.
    for (double c : {-3.0, 0.0, 1.2, 4.0}) {
        const BinormalParams p;
        const double pos_in = p.p * normal_sf((c - p.nu) / p.sigma);
        const double neg_out = (1 - p.p) * normal_cdf((c - p.mu) / p.sigma);
        CHECK_THAT(analytic.missed_positive(c) + analytic.false_alarm(c) + pos_in + neg_out,
                   WithinAbs(1.0, 1e-12));
    }

    const LabeledSample s({0.0, 1.0, 2.0, 3.0}, {0, 0, 1, 1});
    const SampleLoss empirical(s);
    CHECK(empirical.missed_positive(2.0) == 0.25);
    CHECK(empirical.false_alarm(0.5) == 0.25);
    CHECK(weighted_loss(1.0, 0.5, empirical) == 0.0);
    CHECK(empirical.candidate_cuts() == std::vector<double>{-kInf, 0.0, 1.0, 2.0, 3.0});
}

TEST_CASE("Bayes cuts minimize the weighted loss", "[probing]") {
    const BinormalParams p;
    const BinormalLoss analytic(p);
    for (double t : {0.05, 0.2, 0.5, 0.8, 0.95}) {
        const double cut = binormal::posterior_inverse(t, p);
        const double best = weighted_loss(cut, t, analytic);
        for (int k = 0; k < 50; ++k) {
            const double other = -4.0 + 10.0 * k / 49.0;
            CHECK(weighted_loss(other, t, analytic) >= best);
        }
    }
}

TEST_CASE("bayes family", "[probing]") {
    const BinormalParams p;
    const BinormalLoss analytic(p);
    const auto grid = CostGrid::uniform();
    const auto e = fit_ensemble(grid, analytic, Family::kBayes);
    const auto c = binormal::coefficients(p);
    for (std::size_t i = 1; i <= grid.size(); ++i) {
        const double t = grid.t(i);
        CHECK_THAT(e.cut(i), WithinAbs((-std::log(t / (1 - t)) - c.b) / c.a, 1e-9));
        if (i > 1) {
            CHECK(e.cut(i) > e.cut(i - 1));
        }
    }
    const auto fine = CostGrid({0.0, 1e-9, 0.5});
    CHECK(analytic.missed_positive(fit_ensemble(fine, analytic, Family::kBayes).cut(1)) < 1e-6);

    const SampleLoss empirical(LabeledSample({0.0, 1.0}, {1, 0}));
    CHECK_THROWS_AS(fit_ensemble(grid, empirical, Family::kBayes), PreconditionError);
    CHECK_THROWS_AS(fit_ensemble(grid, analytic, Family::kEmpiricalThreshold), PreconditionError);
}

TEST_CASE("Z of the bayes family tracks the posterior", "[probing]") {
    const BinormalParams p;
    const BinormalLoss analytic(p);
    const auto grid = CostGrid::uniform();
    const auto e = fit_ensemble(grid, analytic, Family::kBayes);
    const auto z = e.z();
    for (double x = -6.0; x <= 10.0; x += 0.013) {
        const double eta = binormal::posterior(x, p);
        REQUIRE(std::abs(z(x) - std::min(eta, grid.t(grid.size()))) <= grid.max_width() + 1e-12);
    }
}

TEST_CASE("Z and its superlevel sets", "[probing][property]") {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 200; ++trial) {
        const auto grid = CostGrid::uniform(1 + trial % 40, 0.5 + 0.49 * (trial % 7) / 6.0);
        auto e = random_ensemble(grid, rng, -3.0, 3.0);
        if (trial % 5 == 0) {
            auto cuts = e.cuts();
            cuts[0] = -kInf;
            cuts.back() = kInf;
            e = ProbingEnsemble(grid, cuts);
        }
        const auto z = e.z();
        std::uniform_real_distribution<double> ux(-4.0, 4.0);
        std::uniform_real_distribution<double> ut(0.0, 1.0);
        for (int k = 0; k < 50; ++k) {
            // Probe both generic points and the cuts themselves.
            const double x = k % 2 == 0 ? ux(rng) : e.cuts()[rng() % e.cuts().size()];
            const double zx = z(x);
            REQUIRE(std::abs(zx - brute_z(e, x)) <= 1e-12);
            REQUIRE(zx >= 0.0);
            REQUIRE(zx <= grid.t(grid.size()) + 1e-12);
            const double t = ut(rng);
            REQUIRE((x > z.superlevel_cut(t)) == (zx > t));
        }
    }
}

TEST_CASE("empirical family prefers the smaller positive region on ties", "[probing]") {
    // At t = 0.5 cutting below everything and above everything both cost 0.25.
    const SampleLoss src(LabeledSample({0.0, 1.0}, {1, 0}));
    const auto e = fit_ensemble(CostGrid({0.0, 0.5}), src, Family::kEmpiricalThreshold);
    CHECK(e.cut(1) == 1.0);

    const SampleLoss separable(LabeledSample({0.0, 1.0, 2.0, 3.0}, {0, 0, 1, 1}));
    const auto e2 = fit_ensemble(CostGrid::uniform(10, 0.9), separable,
                                 Family::kEmpiricalThreshold);
    for (double c : e2.cuts()) {
        CHECK(c == 1.0);
    }
}

TEST_CASE("empirical family is loss-minimal among thresholds", "[probing][property]") {
    const BinormalParams p;
    const auto source = binormal::sample_source(p, 2000, 52);
    const SampleLoss src(source);
    const auto grid = CostGrid::uniform(50, 0.98);
    const auto e = fit_ensemble(grid, src, Family::kEmpiricalThreshold);
    for (std::size_t i = 1; i <= grid.size(); ++i) {
        const double best = weighted_loss(e.cut(i), grid.t(i), src);
        for (double c : src.candidate_cuts()) {
            REQUIRE(weighted_loss(c, grid.t(i), src) >= best);
        }
    }
}

TEST_CASE("corrupted ensemble", "[probing]") {
    const BinormalParams p;
    const BinormalLoss analytic(p);
    const auto grid = CostGrid::uniform();
    const auto bayes = fit_ensemble(grid, analytic, Family::kBayes);
    const auto bad = fit_ensemble(grid, analytic, Family::kCorrupted);
    const auto opt = bayes.losses(analytic);
    const auto got = bad.losses(analytic);
    for (std::size_t i = 0; i < opt.size(); ++i) {
        REQUIRE(std::abs(got[i] - 1.1 * opt[i]) <= 1e-9 * std::max(1.0, opt[i]));
    }
    CHECK_THROWS_AS(corrupt_ensemble(bayes, analytic, 1.0), PreconditionError);
}

TEST_CASE("refinement", "[probing]") {
    const BinormalParams p;
    const BinormalLoss analytic(p);
    const auto grid = CostGrid::uniform();

    const auto bayes = fit_ensemble(grid, analytic, Family::kBayes);
    const auto kept = refine(bayes, analytic);
    CHECK(kept.replacements == 0);
    CHECK(kept.iterations == 1);
    CHECK(kept.converged);
    CHECK(kept.ensemble.cuts() == bayes.cuts());

    const auto bad = fit_ensemble(grid, analytic, Family::kCorrupted);
    const auto fixed = refine(bad, analytic);
    CHECK(fixed.replacements >= 1);
    CHECK(fixed.converged);
    CHECK(fixed.iterations <= 100);
    CHECK(fixed.total_loss.back() < fixed.total_loss.front());
    CHECK(fixed.total_loss.back() >= bayes.total_loss(analytic) - 1e-12);

    const auto none = refine(bad, analytic, 0);
    CHECK_FALSE(none.converged);
    CHECK(none.iterations == 0);
    CHECK(none.ensemble.cuts() == bad.cuts());
}

TEST_CASE("refinement never increases a loss", "[probing][property]") {
    std::mt19937_64 rng(53);
    const BinormalParams p;
    const BinormalLoss analytic(p);
    const SampleLoss empirical(binormal::sample_source(p, 500, 54));
    for (int trial = 0; trial < 60; ++trial) {
        const auto grid = CostGrid::uniform(5 + trial, 0.95);
        const LossEvaluator& src =
            trial % 2 == 0 ? static_cast<const LossEvaluator&>(analytic) : empirical;
        const auto start = random_ensemble(grid, rng, -2.0, 4.0);
        const auto r = refine(start, src, 100);
        for (std::size_t k = 1; k < r.total_loss.size(); ++k) {
            REQUIRE(r.total_loss[k] <= r.total_loss[k - 1] + 1e-12);
        }
        const auto before = start.losses(src);
        const auto after = r.ensemble.losses(src);
        for (std::size_t i = 0; i < before.size(); ++i) {
            REQUIRE(after[i] <= before[i]);
        }
        REQUIRE(r.converged);
    }
}

TEST_CASE("prior estimate", "[probing]") {
    const auto grid = CostGrid::uniform(100, 0.99);
    const UnlabeledSample t({-1.0, 0.0, 3.0});
    CHECK_THAT(probing_estimate(ProbingEnsemble(grid, std::vector<double>(100, -kInf)), t),
               WithinAbs(0.99, 1e-12));
    CHECK(probing_estimate(ProbingEnsemble(grid, std::vector<double>(100, kInf)), t) == 0.0);
    CHECK_THAT(probing_estimate(ProbingEnsemble(grid, std::vector<double>(100, 0.0)), t),
               WithinAbs(0.99 / 3.0, 1e-12));
}

TEST_CASE("probing matches the probability average under covariate shift", "[probing]") {
    const BinormalParams p;
    const BinormalLoss analytic(p);
    const auto grid = CostGrid::uniform();
    const auto refined = refine(fit_ensemble(grid, analytic, Family::kBayes), analytic);
    const std::size_t n = 1000000;
    const auto target = binormal::sample_target_cs(p, n, 55);
    const auto result = estimate_prior(refined, analytic, target);
    const auto c = binormal::coefficients(p);
    const double pa = estimators::pa_estimate(
                          [&](double x) { return binormal::posterior(x, c); }, target)
                          .estimate;
    CHECK(std::abs(result.q_hat - pa) <= 1e-3 + 3.0 * std::sqrt(kVarPosteriorCs / n));
    CHECK(result.converged);
    CHECK(result.iterations == 1);
    CHECK(result.t.size() == 1000);

    double recomputed = 0.0;
    for (std::size_t i = 0; i < result.t.size(); ++i) {
        recomputed += grid.width(i + 1) * result.target_freq[i];
    }
    CHECK_THAT(result.q_hat, WithinAbs(recomputed, 1e-15));
}

TEST_CASE("population Riemann sum is within one spacing of the target prior", "[probing]") {
    const BinormalParams p;
    const BinormalLoss analytic(p);
    const double truth = binormal::true_target_prior(p);
    const double ts = binormal::target_sigma(p);
    for (std::size_t n : {10u, 100u, 1000u}) {
        const auto grid = CostGrid::uniform(n, 1.0 - 1.0 / (n + 1.0));
        const auto e = fit_ensemble(grid, analytic, Family::kBayes);
        double q = 0.0;
        for (std::size_t i = 1; i <= n; ++i) {
            q += grid.width(i) * normal_sf((e.cut(i) - p.tau) / ts);
        }
        // The lower sum misses at most one spacing of a [0,1]-valued
        // decreasing integrand, plus the tail above t_n.
        CHECK(q <= truth);
        CHECK(truth - q <= grid.max_width() + (1.0 - grid.t(n)));
    }
}

TEST_CASE("prior estimate is permutation invariant", "[probing][property]") {
    const BinormalParams p;
    const BinormalLoss analytic(p);
    const auto refined = refine(fit_ensemble(CostGrid::uniform(200, 0.99), analytic,
                                             Family::kBayes),
                                analytic);
    std::mt19937_64 rng(56);
    for (int trial = 0; trial < 20; ++trial) {
        auto x = binormal::sample_target_cs(p, 1000, 57 + trial).x();
        const double a = estimate_prior(refined, analytic, UnlabeledSample(x)).q_hat;
        std::shuffle(x.begin(), x.end(), rng);
        REQUIRE(estimate_prior(refined, analytic, UnlabeledSample(x)).q_hat == a);
    }
}

TEST_CASE("probing result csv", "[probing]") {
    ProbingResult r;
    r.q_hat = 0.5;
    r.iterations = 3;
    r.converged = true;
    r.t = {0.25, 0.5};
    r.losses = {0.1, 0.2};
    r.target_freq = {1.0, 0.75};
    CHECK(to_csv_row(r) == "0.5,3,true");
    CHECK(index_rows(r) == std::vector<std::string>{"1,0.25,0.1,1", "2,0.5,0.2,0.75"});
    CHECK(kResultCsvHeader == "q_hat,iterations,converged");
    CHECK(kIndexCsvHeader == "i,t_i,loss_i,target_freq_i");
}
