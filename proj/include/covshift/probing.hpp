#pragma once

// Prior estimation by probing: near-optimal cost-sensitive classifiers H(t_i)
// over a cost grid, the aggregate score Z = sum (t_i - t_{i-1}) 1{H(t_i)},
// refinement of H(t_j) by {Z > t_j}, and q = sum (t_i - t_{i-1}) Q[H(t_i)].
//
// Classifiers are upper sets {x > cut} of the covariate with cut in
// [-inf, +inf]. Superlevel sets of Z are again of this form, so refinement
// never leaves the family.

#include "covshift/binormal.hpp"
#include "covshift/sample.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace covshift::probing {

inline constexpr double kImprovementEps = 1e-12;
inline constexpr std::size_t kDefaultMaxIter = 100;

/// 0 = t_0 < t_1 < ... < t_n < 1.
class CostGrid {
public:
    explicit CostGrid(std::vector<double> t);

    /// t_i = t_max * i / n.
    static CostGrid uniform(std::size_t n = 1000, double t_max = 0.999);

    /// Number of classifiers n (t_0 excluded).
    std::size_t size() const noexcept { return t_.size() - 1; }
    /// t_i for i in 0..n.
    double t(std::size_t i) const { return t_.at(i); }
    /// t_i - t_{i-1} for i in 1..n.
    double width(std::size_t i) const { return t_.at(i) - t_.at(i - 1); }
    double max_width() const;
    const std::vector<double>& values() const noexcept { return t_; }

private:
    std::vector<double> t_;
};

/// Source probabilities of the two error cells of {x > cut}.
class LossEvaluator {
public:
    virtual ~LossEvaluator() = default;
    /// P[A1 ∩ {x <= cut}], the missed positives.
    virtual double missed_positive(double cut) const = 0;
    /// P[A0 ∩ {x > cut}], the false alarms.
    virtual double false_alarm(double cut) const = 0;
};

class BinormalLoss final : public LossEvaluator {
public:
    explicit BinormalLoss(binormal::BinormalParams params);
    double missed_positive(double cut) const override;
    double false_alarm(double cut) const override;
    const binormal::BinormalParams& params() const noexcept { return params_; }

private:
    binormal::BinormalParams params_;
};

class SampleLoss final : public LossEvaluator {
public:
    explicit SampleLoss(const LabeledSample& source);
    double missed_positive(double cut) const override;
    double false_alarm(double cut) const override;
    /// -inf followed by the distinct covariate values, ascending: every
    /// distinct empirical threshold classifier.
    const std::vector<double>& candidate_cuts() const noexcept { return candidates_; }

private:
    std::vector<double> positives_;
    std::vector<double> negatives_;
    std::vector<double> candidates_;
    double n_ = 0.0;
};

/// (1 - t) P[A1 ∩ H^c] + t P[A0 ∩ H] for H = {x > cut}.
double weighted_loss(double cut, double t, const LossEvaluator& src);

/// Step function Z, evaluated through its sorted cuts.
class ZFunction {
public:
    ZFunction(const std::vector<double>& cuts, const CostGrid& grid);

    double operator()(double x) const;
    /// The cut of {Z > t}; +inf when the set is empty.
    double superlevel_cut(double t) const;

private:
    std::vector<double> sorted_cuts_;
    std::vector<double> cumulative_;
};

class ProbingEnsemble {
public:
    /// cuts[i - 1] defines H(t_i).
    ProbingEnsemble(CostGrid grid, std::vector<double> cuts);

    const CostGrid& grid() const noexcept { return grid_; }
    const std::vector<double>& cuts() const noexcept { return cuts_; }
    double cut(std::size_t i) const { return cuts_.at(i - 1); }
    bool contains(std::size_t i, double x) const { return x > cut(i); }

    ZFunction z() const { return ZFunction(cuts_, grid_); }
    double total_loss(const LossEvaluator& src) const;
    std::vector<double> losses(const LossEvaluator& src) const;

private:
    CostGrid grid_;
    std::vector<double> cuts_;
};

enum class Family {
    /// {posterior > t_i}; analytic backend only.
    kBayes,
    /// Best empirical threshold per t_i; sample backend only.
    kEmpiricalThreshold,
    /// Bayes cuts moved until each loss is 10% above optimal.
    kCorrupted,
};

ProbingEnsemble fit_ensemble(const CostGrid& grid, const LossEvaluator& src, Family family);

/// Moves every cut of a Bayes ensemble so that its loss is `factor` times the
/// optimum, alternating sides by index.
ProbingEnsemble corrupt_ensemble(const ProbingEnsemble& bayes, const BinormalLoss& src,
                                 double factor = 1.1);

struct RefineResult {
    ProbingEnsemble ensemble;
    std::size_t iterations = 0;
    bool converged = false;
    std::size_t replacements = 0;
    /// Total loss before the first pass and after each pass.
    std::vector<double> total_loss;
};

RefineResult refine(const ProbingEnsemble& ens, const LossEvaluator& src,
                    std::size_t max_iter = kDefaultMaxIter, double improvement_eps = kImprovementEps);

struct ProbingResult {
    double q_hat = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<double> t;
    std::vector<double> losses;
    std::vector<double> target_freq;
};

/// sum_i (t_i - t_{i-1}) * (share of the target in H(t_i)).
double probing_estimate(const ProbingEnsemble& ens, const UnlabeledSample& target);

ProbingResult estimate_prior(const RefineResult& refined, const LossEvaluator& src,
                             const UnlabeledSample& target);

inline constexpr std::string_view kResultCsvHeader = "q_hat,iterations,converged";
inline constexpr std::string_view kIndexCsvHeader = "i,t_i,loss_i,target_freq_i";

std::string to_csv_row(const ProbingResult& r);
/// One row per grid index, without the header.
std::vector<std::string> index_rows(const ProbingResult& r);

} // namespace covshift::probing
