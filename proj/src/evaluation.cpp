#include "gwofi/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gwofi/errors.hpp"
#include "gwofi/rng.hpp"

namespace gwofi {

static void check_binary_labels(const std::vector<int>& y) {
    for (int v : y)
        if (v != 0 && v != 1) throw DataError("labels must be 0 or 1, got " + std::to_string(v));
}

ConfusionCounts confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size())
        throw ConfigError("label and prediction vectors differ in length");
    check_binary_labels(y_true);
    check_binary_labels(y_pred);
    ConfusionCounts c;
    for (size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == 1) (y_pred[i] == 1 ? c.tp : c.fn)++;
        else (y_pred[i] == 1 ? c.fp : c.tn)++;
    }
    return c;
}

static std::optional<double> ratio(long long num, long long den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

ClassifierMetrics metrics_from_confusion(const ConfusionCounts& c) {
    ClassifierMetrics m;
    m.accuracy = ratio(c.tp + c.tn, c.total());
    m.sensitivity = ratio(c.tp, c.tp + c.fn);
    m.specificity = ratio(c.tn, c.tn + c.fp);
    m.precision = ratio(c.tp, c.tp + c.fp);
    m.f1 = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
    return m;
}

double auroc(const std::vector<int>& y_true, const std::vector<double>& scores) {
    if (y_true.size() != scores.size())
        throw ConfigError("label and score vectors differ in length");
    check_binary_labels(y_true);
    for (double s : scores)
        if (!std::isfinite(s)) throw NumericError("scores must be finite for ranking");
    long long pos = 0, neg = 0;
    for (int v : y_true) (v == 1 ? pos : neg)++;
    if (pos == 0 || neg == 0)
        throw DataError("ranking needs at least one positive and one negative");

    std::vector<int> order(y_true.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return scores[a] < scores[b]; });

    // average ranks across each tie group, 1-based
    double rank_sum_pos = 0.0;
    size_t i = 0;
    while (i < order.size()) {
        size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
        double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (size_t q = i; q <= j; ++q)
            if (y_true[order[q]] == 1) rank_sum_pos += avg_rank;
        i = j + 1;
    }
    double p = static_cast<double>(pos);
    double n = static_cast<double>(neg);
    return (rank_sum_pos - p * (p + 1.0) / 2.0) / (p * n);
}

static std::vector<std::vector<int>> shuffled_by_class(const std::vector<int>& y, SplitMix& rng) {
    std::vector<std::vector<int>> byclass(2);
    for (size_t i = 0; i < y.size(); ++i) byclass[static_cast<size_t>(y[i])].push_back(static_cast<int>(i));
    // positives first so a seed change reshuffles both classes coherently
    fisher_yates(byclass[1], rng);
    fisher_yates(byclass[0], rng);
    return byclass;
}

HoldoutSplit stratified_holdout(const std::vector<int>& y, double test_fraction,
                                std::uint64_t seed) {
    check_binary_labels(y);
    if (!(test_fraction > 0.0) || !(test_fraction < 1.0))
        throw ConfigError("test fraction must lie strictly between 0 and 1");
    SplitMix rng(mix_indices(seed, 0x686f6c64));  // "hold"
    auto byclass = shuffled_by_class(y, rng);

    HoldoutSplit split;
    for (int cls : {1, 0}) {
        const auto& rows = byclass[static_cast<size_t>(cls)];
        long long take = std::llround(test_fraction * static_cast<double>(rows.size()));
        if (take > static_cast<long long>(rows.size())) take = static_cast<long long>(rows.size());
        for (size_t i = 0; i < rows.size(); ++i) {
            if (static_cast<long long>(i) < take) split.test.push_back(rows[i]);
            else split.train.push_back(rows[i]);
        }
    }
    if (split.train.empty() || split.test.empty())
        throw ConfigError("holdout split left one side empty; adjust the test fraction");
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

MetricsReport evaluate_model(const Eigen::MatrixXd& X_train, const std::vector<int>& y_train,
                             const Eigen::MatrixXd& X_test, const std::vector<int>& y_test,
                             const std::vector<bool>& is_binary, const TrainSettings& settings) {
    if (X_train.cols() != X_test.cols())
        throw ConfigError("train and test matrices have different widths");
    Model model = train_classifier(X_train, y_train, is_binary, settings);
    MetricsReport report;
    auto scores = score_matrix(model, X_test);
    std::vector<int> preds(scores.size());
    for (size_t i = 0; i < scores.size(); ++i) preds[i] = scores[i] >= 0.0 ? 1 : 0;
    report.counts = confusion(y_test, preds);
    report.metrics = metrics_from_confusion(report.counts);
    report.auroc_value = auroc(y_test, scores);
    return report;
}

static std::string opt_cell(const std::optional<double>& v, double scale, int digits) {
    if (!v) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, *v * scale);
    return buf;
}

std::string metrics_row(const std::string& method, const std::string& phase, long long selected,
                        const MetricsReport& report) {
    std::string row = method;
    row += '\t';
    row += phase;
    row += '\t';
    row += std::to_string(selected);
    row += '\t';
    row += opt_cell(report.metrics.accuracy, 100.0, 2);
    row += '\t';
    row += opt_cell(report.metrics.sensitivity, 1.0, 4);
    row += '\t';
    row += opt_cell(report.metrics.specificity, 1.0, 4);
    row += '\t';
    row += opt_cell(report.auroc_value, 1.0, 4);
    return row;
}

std::vector<std::vector<int>> stratified_folds(const std::vector<int>& y, int k,
                                               std::uint64_t seed) {
    check_binary_labels(y);
    if (k < 2) throw ConfigError("need at least 2 folds");
    long long pos = 0, neg = 0;
    for (int v : y) (v == 1 ? pos : neg)++;
    // the cap counts only classes that are actually present, so a one-class
    // label vector still supports up to leave-one-out folding
    long long minority = std::min(pos > 0 ? pos : neg, neg > 0 ? neg : pos);
    if (static_cast<long long>(k) > minority)
        throw ConfigError("fold count " + std::to_string(k) + " exceeds the rarer class size " +
                          std::to_string(minority));

    SplitMix rng(mix_indices(seed, 0x666f6c64));  // "fold"
    auto byclass = shuffled_by_class(y, rng);

    std::vector<std::vector<int>> folds(static_cast<size_t>(k));
    // one round-robin counter across both classes keeps fold sizes within one
    long long counter = 0;
    for (int cls : {1, 0})
        for (int row : byclass[static_cast<size_t>(cls)])
            folds[static_cast<size_t>(counter++ % k)].push_back(row);
    for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

} // namespace gwofi
