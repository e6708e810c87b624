#include "covshift/probing.hpp"

#include "covshift/csv.hpp"
#include "covshift/errors.hpp"
#include "covshift/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace covshift::probing {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> sorted_copy(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
}

// Share of sorted values strictly above cut.
double share_above(const std::vector<double>& sorted, double cut) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), cut);
    return static_cast<double>(sorted.end() - it) / static_cast<double>(sorted.size());
}

} // namespace

CostGrid::CostGrid(std::vector<double> t) : t_(std::move(t)) {
    if (t_.size() < 2) {
        throw PreconditionError("CostGrid: need t_0 and at least one more point");
    }
    if (t_.front() != 0.0) {
        throw PreconditionError("CostGrid: t_0 must be 0");
    }
    for (std::size_t i = 1; i < t_.size(); ++i) {
        if (!(t_[i] > t_[i - 1])) {
            throw PreconditionError("CostGrid: points must be strictly increasing");
        }
    }
    if (!(t_.back() < 1.0)) {
        throw PreconditionError("CostGrid: t_n must be below 1");
    }
}

CostGrid CostGrid::uniform(std::size_t n, double t_max) {
    if (n == 0 || !(t_max > 0.0 && t_max < 1.0)) {
        throw PreconditionError("CostGrid::uniform: need n >= 1 and t_max in (0,1)");
    }
    std::vector<double> t(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        t[i] = t_max * static_cast<double>(i) / static_cast<double>(n);
    }
    return CostGrid(std::move(t));
}

double CostGrid::max_width() const {
    double w = 0.0;
    for (std::size_t i = 1; i < t_.size(); ++i) {
        w = std::max(w, width(i));
    }
    return w;
}

BinormalLoss::BinormalLoss(binormal::BinormalParams params) : params_(params) {
    params_.validate();
}

double BinormalLoss::missed_positive(double cut) const {
    return params_.p * normal_cdf((cut - params_.nu) / params_.sigma);
}

double BinormalLoss::false_alarm(double cut) const {
    return (1.0 - params_.p) * normal_sf((cut - params_.mu) / params_.sigma);
}

SampleLoss::SampleLoss(const LabeledSample& source) : n_(static_cast<double>(source.size())) {
    for (std::size_t i = 0; i < source.size(); ++i) {
        (source.y()[i] != 0 ? positives_ : negatives_).push_back(source.x()[i]);
    }
    std::sort(positives_.begin(), positives_.end());
    std::sort(negatives_.begin(), negatives_.end());
    candidates_ = sorted_copy(source.x());
    candidates_.erase(std::unique(candidates_.begin(), candidates_.end()), candidates_.end());
    candidates_.insert(candidates_.begin(), -kInf);
}

double SampleLoss::missed_positive(double cut) const {
    const auto it = std::upper_bound(positives_.begin(), positives_.end(), cut);
    return static_cast<double>(it - positives_.begin()) / n_;
}

double SampleLoss::false_alarm(double cut) const {
    const auto it = std::upper_bound(negatives_.begin(), negatives_.end(), cut);
    return static_cast<double>(negatives_.end() - it) / n_;
}

double weighted_loss(double cut, double t, const LossEvaluator& src) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw PreconditionError("weighted_loss: t must lie in [0,1]");
    }
    return (1.0 - t) * src.missed_positive(cut) + t * src.false_alarm(cut);
}

ZFunction::ZFunction(const std::vector<double>& cuts, const CostGrid& grid) {
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(cuts.size());
    for (std::size_t i = 1; i <= cuts.size(); ++i) {
        pairs.emplace_back(cuts[i - 1], grid.width(i));
    }
    std::sort(pairs.begin(), pairs.end());
    double acc = 0.0;
    for (const auto& [cut, w] : pairs) {
        acc += w;
        sorted_cuts_.push_back(cut);
        cumulative_.push_back(acc);
    }
}

double ZFunction::operator()(double x) const {
    // Cuts strictly below x are the sets containing x.
    const auto k = std::lower_bound(sorted_cuts_.begin(), sorted_cuts_.end(), x) -
                   sorted_cuts_.begin();
    return k == 0 ? 0.0 : cumulative_[static_cast<std::size_t>(k - 1)];
}

double ZFunction::superlevel_cut(double t) const {
    // Z > t exactly above the first cut whose cumulative weight exceeds t.
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), t);
    if (it == cumulative_.end()) {
        return kInf;
    }
    return sorted_cuts_[static_cast<std::size_t>(it - cumulative_.begin())];
}

ProbingEnsemble::ProbingEnsemble(CostGrid grid, std::vector<double> cuts)
    : grid_(std::move(grid)), cuts_(std::move(cuts)) {
    if (cuts_.size() != grid_.size()) {
        throw StructuralError("ProbingEnsemble: one classifier per grid index is required");
    }
    for (double c : cuts_) {
        if (std::isnan(c)) {
            throw PreconditionError("ProbingEnsemble: cut must not be NaN");
        }
    }
}

std::vector<double> ProbingEnsemble::losses(const LossEvaluator& src) const {
    std::vector<double> out(cuts_.size());
    for (std::size_t i = 1; i <= cuts_.size(); ++i) {
        out[i - 1] = weighted_loss(cut(i), grid_.t(i), src);
    }
    return out;
}

double ProbingEnsemble::total_loss(const LossEvaluator& src) const {
    double total = 0.0;
    for (double l : losses(src)) {
        total += l;
    }
    return total;
}

namespace {

ProbingEnsemble fit_bayes(const CostGrid& grid, const BinormalLoss& src) {
    std::vector<double> cuts(grid.size());
    for (std::size_t i = 1; i <= grid.size(); ++i) {
        cuts[i - 1] = binormal::posterior_inverse(grid.t(i), src.params());
    }
    return ProbingEnsemble(grid, std::move(cuts));
}

ProbingEnsemble fit_empirical(const CostGrid& grid, const SampleLoss& src) {
    const auto& cand = src.candidate_cuts();
    std::vector<double> missed(cand.size());
    std::vector<double> alarm(cand.size());
    for (std::size_t k = 0; k < cand.size(); ++k) {
        missed[k] = src.missed_positive(cand[k]);
        alarm[k] = src.false_alarm(cand[k]);
    }
    std::vector<double> cuts(grid.size());
    for (std::size_t i = 1; i <= grid.size(); ++i) {
        const double t = grid.t(i);
        std::size_t best = 0;
        double best_loss = kInf;
        // "<=" keeps the largest cut among ties, the smallest positive region.
        for (std::size_t k = 0; k < cand.size(); ++k) {
            const double loss = (1.0 - t) * missed[k] + t * alarm[k];
            if (loss <= best_loss) {
                best_loss = loss;
                best = k;
            }
        }
        cuts[i - 1] = cand[best];
    }
    return ProbingEnsemble(grid, std::move(cuts));
}

const BinormalLoss& require_analytic(const LossEvaluator& src, const char* what) {
    const auto* analytic = dynamic_cast<const BinormalLoss*>(&src);
    if (analytic == nullptr) {
        throw PreconditionError(std::string(what) + " requires the analytic binormal backend");
    }
    return *analytic;
}

// Cut on one side of `opt` where the loss reaches `target`, or nullopt when
// that side never gets there.
std::optional<double> cut_with_loss(double opt, double t, double target, double direction,
                                    const BinormalLoss& src) {
    const double limit = weighted_loss(direction * kInf, t, src);
    if (!(limit > target)) {
        return std::nullopt;
    }
    double span = 1.0;
    while (weighted_loss(opt + direction * span, t, src) < target) {
        span *= 2.0;
        if (span > 1e6) {
            return std::nullopt;
        }
    }
    double lo = 0.0;
    double hi = span;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (weighted_loss(opt + direction * mid, t, src) < target ? lo : hi) = mid;
    }
    return opt + direction * hi;
}

} // namespace

ProbingEnsemble fit_ensemble(const CostGrid& grid, const LossEvaluator& src, Family family) {
    switch (family) {
    case Family::kBayes:
        return fit_bayes(grid, require_analytic(src, "bayes family"));
    case Family::kCorrupted: {
        const auto& analytic = require_analytic(src, "corrupted family");
        return corrupt_ensemble(fit_bayes(grid, analytic), analytic);
    }
    case Family::kEmpiricalThreshold: {
        const auto* sample = dynamic_cast<const SampleLoss*>(&src);
        if (sample == nullptr) {
            throw PreconditionError("empirical-threshold family requires a labeled sample backend");
        }
        return fit_empirical(grid, *sample);
    }
    }
    throw PreconditionError("fit_ensemble: unknown family");
}

ProbingEnsemble corrupt_ensemble(const ProbingEnsemble& bayes, const BinormalLoss& src,
                                 double factor) {
    if (!(factor > 1.0)) {
        throw PreconditionError("corrupt_ensemble: factor must exceed 1");
    }
    const auto& grid = bayes.grid();
    std::vector<double> cuts(bayes.cuts());
    for (std::size_t i = 1; i <= grid.size(); ++i) {
        const double t = grid.t(i);
        const double opt = bayes.cut(i);
        const double target = factor * weighted_loss(opt, t, src);
        const double first = i % 2 == 1 ? 1.0 : -1.0;
        auto moved = cut_with_loss(opt, t, target, first, src);
        if (!moved) {
            moved = cut_with_loss(opt, t, target, -first, src);
        }
        if (!moved) {
            // Neither side gets that bad; take the worse of the two trivial sets.
            moved = weighted_loss(kInf, t, src) >= weighted_loss(-kInf, t, src) ? kInf : -kInf;
        }
        cuts[i - 1] = *moved;
    }
    return ProbingEnsemble(grid, std::move(cuts));
}

RefineResult refine(const ProbingEnsemble& ens, const LossEvaluator& src, std::size_t max_iter,
                    double improvement_eps) {
    RefineResult result{ens, 0, false, 0, {}};
    std::vector<double> cuts = ens.cuts();
    const auto& grid = ens.grid();
    std::vector<double> losses = ens.losses(src);
    auto total = [&] {
        double s = 0.0;
        for (double l : losses) {
            s += l;
        }
        return s;
    };
    result.total_loss.push_back(total());

    while (result.iterations < max_iter) {
        ++result.iterations;
        const ZFunction z(cuts, grid);
        std::size_t replaced = 0;
        for (std::size_t j = 1; j <= grid.size(); ++j) {
            const double candidate = z.superlevel_cut(grid.t(j));
            const double loss = weighted_loss(candidate, grid.t(j), src);
            if (loss < losses[j - 1] - improvement_eps) {
                cuts[j - 1] = candidate;
                losses[j - 1] = loss;
                ++replaced;
            }
        }
        result.replacements += replaced;
        result.total_loss.push_back(total());
        if (replaced == 0) {
            result.converged = true;
            break;
        }
    }
    result.ensemble = ProbingEnsemble(grid, std::move(cuts));
    return result;
}

namespace {

std::vector<double> target_frequencies(const ProbingEnsemble& ens, const UnlabeledSample& target) {
    const auto sorted = sorted_copy(target.x());
    std::vector<double> freq(ens.grid().size());
    for (std::size_t i = 1; i <= freq.size(); ++i) {
        freq[i - 1] = share_above(sorted, ens.cut(i));
    }
    return freq;
}

double riemann_sum(const CostGrid& grid, const std::vector<double>& freq) {
    double q = 0.0;
    for (std::size_t i = 1; i <= grid.size(); ++i) {
        q += grid.width(i) * freq[i - 1];
    }
    return std::clamp(q, 0.0, 1.0);
}

} // namespace

double probing_estimate(const ProbingEnsemble& ens, const UnlabeledSample& target) {
    return riemann_sum(ens.grid(), target_frequencies(ens, target));
}

ProbingResult estimate_prior(const RefineResult& refined, const LossEvaluator& src,
                             const UnlabeledSample& target) {
    ProbingResult r;
    const auto& ens = refined.ensemble;
    r.target_freq = target_frequencies(ens, target);
    r.q_hat = riemann_sum(ens.grid(), r.target_freq);
    r.iterations = refined.iterations;
    r.converged = refined.converged;
    r.t.assign(ens.grid().values().begin() + 1, ens.grid().values().end());
    r.losses = ens.losses(src);
    return r;
}

std::string to_csv_row(const ProbingResult& r) {
    return format_real(r.q_hat) + "," + std::to_string(r.iterations) + "," +
           format_bool(r.converged);
}

std::vector<std::string> index_rows(const ProbingResult& r) {
    std::vector<std::string> rows;
    rows.reserve(r.t.size());
    for (std::size_t i = 0; i < r.t.size(); ++i) {
        rows.push_back(std::to_string(i + 1) + "," + format_real(r.t[i]) + "," +
                       format_real(r.losses[i]) + "," + format_real(r.target_freq[i]));
    }
    return rows;
}

} // namespace covshift::probing
