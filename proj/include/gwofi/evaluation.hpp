#ifndef GWOFI_EVALUATION_HPP
#define GWOFI_EVALUATION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gwofi/classifiers.hpp"

namespace gwofi {

struct ConfusionCounts {
    long long tp = 0;
    long long fn = 0;
    long long fp = 0;
    long long tn = 0;

    long long total() const { return tp + fn + fp + tn; }
};

ConfusionCounts confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred);

/// Ratios undefined on an empty denominator stay disengaged.
struct ClassifierMetrics {
    std::optional<double> accuracy;
    std::optional<double> sensitivity;   // recall on the positive class
    std::optional<double> specificity;
    std::optional<double> precision;
    std::optional<double> f1;
};

ClassifierMetrics metrics_from_confusion(const ConfusionCounts& c);

/// Area under the ROC curve by the rank-sum route: average ranks over the
/// pooled scores (ties get the mean rank), AUROC = (R_pos - P(P+1)/2) / (P*N).
/// Needs at least one positive and one negative.
double auroc(const std::vector<int>& y_true, const std::vector<double>& scores);

/// Row indices for a holdout split, stratified by class: per class,
/// round(fraction * class size) rows go to test after a seeded shuffle.
struct HoldoutSplit {
    std::vector<int> train;
    std::vector<int> test;
};

HoldoutSplit stratified_holdout(const std::vector<int>& y, double test_fraction,
                                std::uint64_t seed);

/// k stratified folds; fold f of the result holds the test rows of fold f.
/// Requires 2 <= k <= count of the rarer class.
std::vector<std::vector<int>> stratified_folds(const std::vector<int>& y, int k,
                                               std::uint64_t seed);

struct MetricsReport {
    ConfusionCounts counts;
    ClassifierMetrics metrics;
    double auroc_value = 0.0;
};

/// Trains with `settings` on the train block and evaluates on the test block.
MetricsReport evaluate_model(const Eigen::MatrixXd& X_train, const std::vector<int>& y_train,
                             const Eigen::MatrixXd& X_test, const std::vector<int>& y_test,
                             const std::vector<bool>& is_binary, const TrainSettings& settings);

/// One tab-separated report row: method, selected count, accuracy as a
/// percentage, sensitivity, specificity, auroc; undefined ratios print NA.
std::string metrics_row(const std::string& method, const std::string& phase, long long selected,
                        const MetricsReport& report);

} // namespace gwofi

#endif
