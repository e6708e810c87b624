#pragma once

// Class prior estimators on a target sample: probability average (PA),
// classify & count (CC), adjusted count (ACC), mean matching and the
// discretized estimator built from a single split {X <= x}.

#include "covshift/binormal.hpp"
#include "covshift/sample.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace covshift::estimators {

enum class Method { kPa, kCc, kAcc, kMeanMatching, kDiscretized };

std::string_view method_name(Method m);

struct EstimatorReport {
    Method method = Method::kPa;
    /// Clipped to [0,1].
    double estimate = 0.0;
    std::size_t n_target = 0;
    bool clipped = false;
    /// Value before clipping.
    double raw = 0.0;
    /// Rates behind an adjusted count.
    std::optional<binormal::ClassRates> rates;
};

inline constexpr std::string_view kReportCsvHeader = "method,estimate,n_target,clipped,raw";

std::string to_csv_row(const EstimatorReport& r);

enum class Orientation { kAbove, kBelow };

/// Predicts 1 when score > threshold (kAbove) or score < threshold (kBelow).
/// Thresholds may be +-infinity.
struct ThresholdClassifier {
    double threshold = 0.0;
    Orientation orientation = Orientation::kAbove;

    bool predict(double score) const {
        return orientation == Orientation::kAbove ? score > threshold : score < threshold;
    }
};

using ScoreFn = std::function<double(double)>;

EstimatorReport pa_estimate(const ScoreFn& posterior, const UnlabeledSample& target);

/// Classifies the raw covariate.
EstimatorReport cc_estimate(const ThresholdClassifier& clf, const UnlabeledSample& target);
/// Classifies score(x).
EstimatorReport cc_estimate(const ScoreFn& score, const ThresholdClassifier& clf,
                            const UnlabeledSample& target);

/// Empirical tpr/fpr; the source needs both classes.
binormal::ClassRates classifier_rates(const ThresholdClassifier& clf, const LabeledSample& source);

/// (cc - fpr)/(tpr - fpr), clipped. Throws PreconditionError when
/// |tpr - fpr| < 1e-6 (uninformative classifier).
EstimatorReport adjust_count(double cc, const binormal::ClassRates& rates, std::size_t n_target);

EstimatorReport acc_estimate(const ThresholdClassifier& clf, const LabeledSample& source,
                             const UnlabeledSample& target);

/// (mean(x) - mu)/(nu - mu), clipped.
EstimatorReport mean_matching_estimate(const binormal::BinormalParams& params,
                                       const UnlabeledSample& target);

/// Empirical Q[X <= x] combined with the model's posteriors on both sides of x.
EstimatorReport discretized_estimate(const binormal::BinormalParams& params, double x_threshold,
                                     const UnlabeledSample& target);

} // namespace covshift::estimators
