#include "covshift/estimators.hpp"

#include "covshift/csv.hpp"
#include "covshift/errors.hpp"

#include <algorithm>
#include <cmath>

namespace covshift::estimators {

namespace {

EstimatorReport make_report(Method m, double raw, std::size_t n) {
    EstimatorReport r;
    r.method = m;
    r.raw = raw;
    r.n_target = n;
    r.estimate = std::clamp(raw, 0.0, 1.0);
    r.clipped = r.estimate != raw;
    return r;
}

double fraction_positive(const UnlabeledSample& target, const auto& predict) {
    std::size_t hits = 0;
    for (double x : target.x()) {
        hits += predict(x) ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(target.size());
}

} // namespace

std::string_view method_name(Method m) {
    switch (m) {
    case Method::kPa: return "pa";
    case Method::kCc: return "cc";
    case Method::kAcc: return "acc";
    case Method::kMeanMatching: return "mean_matching";
    case Method::kDiscretized: return "discretized";
    }
    return "unknown";
}

std::string to_csv_row(const EstimatorReport& r) {
    return std::string(method_name(r.method)) + "," + format_real(r.estimate) + "," +
           std::to_string(r.n_target) + "," + format_bool(r.clipped) + "," + format_real(r.raw);
}

EstimatorReport pa_estimate(const ScoreFn& posterior, const UnlabeledSample& target) {
    long double sum = 0.0L;
    for (double x : target.x()) {
        sum += posterior(x);
    }
    return make_report(Method::kPa, static_cast<double>(sum / target.size()), target.size());
}

EstimatorReport cc_estimate(const ThresholdClassifier& clf, const UnlabeledSample& target) {
    return make_report(Method::kCc,
                       fraction_positive(target, [&](double x) { return clf.predict(x); }),
                       target.size());
}

EstimatorReport cc_estimate(const ScoreFn& score, const ThresholdClassifier& clf,
                            const UnlabeledSample& target) {
    return make_report(Method::kCc,
                       fraction_positive(target, [&](double x) { return clf.predict(score(x)); }),
                       target.size());
}

binormal::ClassRates classifier_rates(const ThresholdClassifier& clf, const LabeledSample& source) {
    const std::size_t pos = source.positives();
    const std::size_t neg = source.size() - pos;
    if (pos == 0 || neg == 0) {
        throw PreconditionError("classifier_rates: source sample needs both classes");
    }
    std::size_t tp = 0;
    std::size_t fp = 0;
    for (std::size_t i = 0; i < source.size(); ++i) {
        if (clf.predict(source.x()[i])) {
            (source.y()[i] != 0 ? tp : fp) += 1;
        }
    }
    return {static_cast<double>(tp) / static_cast<double>(pos),
            static_cast<double>(fp) / static_cast<double>(neg)};
}

EstimatorReport adjust_count(double cc, const binormal::ClassRates& rates, std::size_t n_target) {
    const double gap = rates.tpr - rates.fpr;
    if (std::abs(gap) < 1e-6) {
        throw PreconditionError("acc_estimate: uninformative classifier (tpr == fpr)");
    }
    auto r = make_report(Method::kAcc, (cc - rates.fpr) / gap, n_target);
    r.rates = rates;
    return r;
}

EstimatorReport acc_estimate(const ThresholdClassifier& clf, const LabeledSample& source,
                             const UnlabeledSample& target) {
    const auto rates = classifier_rates(clf, source);
    return adjust_count(cc_estimate(clf, target).raw, rates, target.size());
}

EstimatorReport mean_matching_estimate(const binormal::BinormalParams& params,
                                       const UnlabeledSample& target) {
    if (params.nu == params.mu) {
        throw PreconditionError("mean_matching_estimate: class means coincide");
    }
    long double sum = 0.0L;
    for (double x : target.x()) {
        sum += x;
    }
    const double mean = static_cast<double>(sum / target.size());
    return make_report(Method::kMeanMatching, (mean - params.mu) / (params.nu - params.mu),
                       target.size());
}

EstimatorReport discretized_estimate(const binormal::BinormalParams& params, double x_threshold,
                                     const UnlabeledSample& target) {
    const auto d = binormal::discretization_posteriors(params, x_threshold);
    const double below =
        fraction_positive(target, [&](double x) { return x <= x_threshold; });
    return make_report(Method::kDiscretized,
                       below * d.posterior_below + (1.0 - below) * d.posterior_above,
                       target.size());
}

} // namespace covshift::estimators
