#include "gwofi/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "gwofi/dataset.hpp"
#include "gwofi/errors.hpp"
#include "gwofi/rng.hpp"

namespace gwofi {

ClassifierKind classifier_from_name(const std::string& name) {
    if (name == "naive_bayes" || name == "nb") return ClassifierKind::NaiveBayes;
    if (name == "decision_tree" || name == "tree" || name == "cart")
        return ClassifierKind::DecisionTree;
    if (name == "linear_svm" || name == "svm") return ClassifierKind::LinearSvm;
    throw ConfigError("unknown classifier '" + name + "'");
}

std::string to_string(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::NaiveBayes: return "naive_bayes";
        case ClassifierKind::DecisionTree: return "decision_tree";
        case ClassifierKind::LinearSvm: return "linear_svm";
    }
    return "?";
}

static void check_training_inputs(const Eigen::MatrixXd& X, const std::vector<int>& y) {
    if (X.rows() == 0 || X.cols() == 0) throw DataError("training matrix is empty");
    if (static_cast<size_t>(X.rows()) != y.size())
        throw ConfigError("label vector length does not match the matrix");
    for (int v : y)
        if (v != 0 && v != 1) throw DataError("labels must be 0 or 1");
    if (!X.allFinite()) throw NumericError("training matrix has non-finite entries");
}

static void require_both_classes(const std::vector<int>& y) {
    long long pos = 0;
    for (int v : y) pos += v;
    if (pos == 0 || pos == static_cast<long long>(y.size()))
        throw DataError("training labels contain a single class");
}

// ---- naive Bayes ----

Model train_naive_bayes(const Eigen::MatrixXd& X, const std::vector<int>& y,
                        const std::vector<bool>& is_binary, double smoothing) {
    check_training_inputs(X, y);
    require_both_classes(y);
    if (!(smoothing > 0.0)) throw ConfigError("smoothing must be positive");
    const Eigen::Index d = X.cols();
    if (static_cast<Eigen::Index>(is_binary.size()) != d)
        throw ConfigError("is_binary length does not match the matrix");

    Model model;
    model.kind = ClassifierKind::NaiveBayes;
    auto& nb = model.nb;
    nb.is_binary = is_binary;
    nb.p1 = Eigen::MatrixXd::Zero(2, d);
    nb.mean = Eigen::MatrixXd::Zero(2, d);
    nb.var = Eigen::MatrixXd::Zero(2, d);

    long long n_c[2] = {0, 0};
    for (int v : y) ++n_c[v];
    const long long n = X.rows();
    for (int c = 0; c < 2; ++c)
        nb.log_prior[c] = std::log(static_cast<double>(n_c[c]) / static_cast<double>(n));

    for (Eigen::Index j = 0; j < d; ++j) {
        if (is_binary[static_cast<size_t>(j)]) {
            long long ones[2] = {0, 0};
            for (Eigen::Index i = 0; i < n; ++i)
                if (X(i, j) >= 0.5) ++ones[y[static_cast<size_t>(i)]];
            for (int c = 0; c < 2; ++c)
                nb.p1(c, j) = (static_cast<double>(ones[c]) + smoothing) /
                              (static_cast<double>(n_c[c]) + 2.0 * smoothing);
        } else {
            double sum[2] = {0.0, 0.0}, sumsq[2] = {0.0, 0.0};
            for (Eigen::Index i = 0; i < n; ++i) {
                double v = X(i, j);
                int c = y[static_cast<size_t>(i)];
                sum[c] += v;
                sumsq[c] += v * v;
            }
            for (int c = 0; c < 2; ++c) {
                double m = sum[c] / static_cast<double>(n_c[c]);
                double var = sumsq[c] / static_cast<double>(n_c[c]) - m * m;
                nb.mean(c, j) = m;
                nb.var(c, j) = std::max(var, 1e-9);
            }
        }
    }
    return model;
}

static double nb_score(const NaiveBayesModel& nb, const Eigen::VectorXd& x) {
    double s = nb.log_prior[1] - nb.log_prior[0];
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        double v = x(j);
        if (nb.is_binary[static_cast<size_t>(j)]) {
            if (v >= 0.5)
                s += std::log(nb.p1(1, j)) - std::log(nb.p1(0, j));
            else
                s += std::log(1.0 - nb.p1(1, j)) - std::log(1.0 - nb.p1(0, j));
        } else {
            double d1 = v - nb.mean(1, j);
            double d0 = v - nb.mean(0, j);
            s += -0.5 * (std::log(nb.var(1, j)) - std::log(nb.var(0, j)));
            s += -0.5 * (d1 * d1 / nb.var(1, j) - d0 * d0 / nb.var(0, j));
        }
    }
    return s;
}

// ---- decision tree ----

double gini_impurity(long long pos, long long neg) {
    long long n = pos + neg;
    if (n == 0) throw ConfigError("impurity of an empty node is undefined");
    double p = static_cast<double>(pos) / static_cast<double>(n);
    double q = static_cast<double>(neg) / static_cast<double>(n);
    return 1.0 - p * p - q * q;
}

Model train_decision_tree(const Eigen::MatrixXd& X, const std::vector<int>& y, int max_depth,
                          int min_leaf) {
    check_training_inputs(X, y);
    require_both_classes(y);
    if (max_depth < 0) throw ConfigError("max_depth must be >= 0");
    if (min_leaf < 1) throw ConfigError("min_leaf must be >= 1");

    Model model;
    model.kind = ClassifierKind::DecisionTree;
    auto& nodes = model.tree.nodes;

    std::function<int(std::vector<int>&, int)> build = [&](std::vector<int>& rows,
                                                           int depth) -> int {
        long long pos = 0;
        for (int r : rows) pos += y[static_cast<size_t>(r)];
        const long long m = static_cast<long long>(rows.size());
        const long long neg = m - pos;

        int index = static_cast<int>(nodes.size());
        nodes.emplace_back();
        nodes[static_cast<size_t>(index)].prob = static_cast<double>(pos) / static_cast<double>(m);

        if (depth >= max_depth || pos == 0 || neg == 0 || m < 2 * static_cast<long long>(min_leaf))
            return index;

        // pick the split with the lowest weighted impurity; scanning features
        // ascending and thresholds ascending with strict improvement gives the
        // lowest-feature, lowest-threshold tie rule for free
        int best_feature = -1;
        double best_threshold = 0.0;
        double best_score = std::numeric_limits<double>::infinity();
        std::vector<int> order(rows);
        for (Eigen::Index j = 0; j < X.cols(); ++j) {
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                if (X(a, j) != X(b, j)) return X(a, j) < X(b, j);
                return a < b;
            });
            long long left_pos = 0;
            for (long long i = 0; i + 1 < m; ++i) {
                left_pos += y[static_cast<size_t>(order[static_cast<size_t>(i)])];
                double lo = X(order[static_cast<size_t>(i)], j);
                double hi = X(order[static_cast<size_t>(i + 1)], j);
                if (lo == hi) continue;
                long long n_left = i + 1;
                long long n_right = m - n_left;
                if (n_left < min_leaf || n_right < min_leaf) continue;
                double score =
                    (static_cast<double>(n_left) * gini_impurity(left_pos, n_left - left_pos) +
                     static_cast<double>(n_right) * gini_impurity(pos - left_pos, n_right - (pos - left_pos))) /
                    static_cast<double>(m);
                if (score < best_score) {
                    best_score = score;
                    best_feature = static_cast<int>(j);
                    best_threshold = 0.5 * (lo + hi);
                }
            }
        }
        if (best_feature < 0) return index;  // every usable feature is constant here

        std::vector<int> left_rows, right_rows;
        for (int r : rows)
            (X(r, best_feature) < best_threshold ? left_rows : right_rows).push_back(r);
        rows.clear();
        rows.shrink_to_fit();

        int left = build(left_rows, depth + 1);
        int right = build(right_rows, depth + 1);
        auto& node = nodes[static_cast<size_t>(index)];
        node.is_leaf = false;
        node.feature = best_feature;
        node.threshold = best_threshold;
        node.left = left;
        node.right = right;
        return index;
    };

    std::vector<int> all(static_cast<size_t>(X.rows()));
    for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    build(all, 0);
    return model;
}

static double tree_score(const DecisionTreeModel& tree, const Eigen::VectorXd& x) {
    int i = 0;
    while (!tree.nodes[static_cast<size_t>(i)].is_leaf) {
        const auto& node = tree.nodes[static_cast<size_t>(i)];
        if (node.feature < 0 || node.feature >= x.size())
            throw ConfigError("feature vector length does not match the model");
        i = x(node.feature) < node.threshold ? node.left : node.right;
    }
    return tree.nodes[static_cast<size_t>(i)].prob - 0.5;
}

// ---- linear SVM ----

Model train_linear_svm(const Eigen::MatrixXd& X, const std::vector<int>& y, double lambda,
                       int epochs, bool class_weights, std::uint64_t seed) {
    check_training_inputs(X, y);
    require_both_classes(y);
    if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");

    const Eigen::Index n = X.rows();
    const Eigen::Index d = X.cols();
    long long n_c[2] = {0, 0};
    for (int v : y) ++n_c[v];
    double weight[2] = {1.0, 1.0};
    if (class_weights)
        for (int c = 0; c < 2; ++c)
            weight[c] = static_cast<double>(n) / (2.0 * static_cast<double>(n_c[c]));

    Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
    double b = 0.0;
    Eigen::VectorXd w_sum = Eigen::VectorXd::Zero(d);
    double b_sum = 0.0;
    long long t = 0;

    std::vector<int> order(static_cast<size_t>(n));
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    for (int epoch = 0; epoch < epochs; ++epoch) {
        SplitMix rng(mix_indices(seed, 0x7376u, static_cast<std::uint64_t>(epoch)));
        fisher_yates(order, rng);
        for (int i : order) {
            ++t;
            double eta = 1.0 / (lambda * static_cast<double>(t));
            int label = y[static_cast<size_t>(i)];
            double yi = label == 1 ? 1.0 : -1.0;
            double margin = yi * (w.dot(X.row(i)) + b);
            w *= (1.0 - eta * lambda);
            if (margin < 1.0) {
                w += eta * weight[label] * yi * X.row(i).transpose();
                // the bias stays out of the regularizer and follows the plain
                // averaged rate 1/t; the lambda-amplified rate would let the
                // first few steps fling it three orders of magnitude out
                b += weight[label] * yi / static_cast<double>(t);
            }
            w_sum += w;
            b_sum += b;
        }
    }

    Model model;
    model.kind = ClassifierKind::LinearSvm;
    model.svm.w = w_sum / static_cast<double>(t);
    model.svm.bias = b_sum / static_cast<double>(t);
    if (!model.svm.w.allFinite() || !std::isfinite(model.svm.bias))
        throw NumericError("svm training diverged to non-finite weights");
    return model;
}

// ---- shared entry points ----

Model train_classifier(const Eigen::MatrixXd& X, const std::vector<int>& y,
                       const std::vector<bool>& is_binary, const TrainSettings& s) {
    switch (s.kind) {
        case ClassifierKind::NaiveBayes:
            return train_naive_bayes(X, y, is_binary, s.nb_smoothing);
        case ClassifierKind::DecisionTree:
            return train_decision_tree(X, y, s.tree_max_depth, s.tree_min_leaf);
        case ClassifierKind::LinearSvm:
            return train_linear_svm(X, y, s.svm_lambda, s.svm_epochs, s.svm_class_weights, s.seed);
    }
    throw ConfigError("unknown classifier kind");
}

double score_row(const Model& model, const Eigen::VectorXd& x) {
    switch (model.kind) {
        case ClassifierKind::NaiveBayes:
            if (x.size() != static_cast<Eigen::Index>(model.nb.is_binary.size()))
                throw ConfigError("feature vector length does not match the model");
            return nb_score(model.nb, x);
        case ClassifierKind::DecisionTree:
            return tree_score(model.tree, x);
        case ClassifierKind::LinearSvm:
            if (x.size() != model.svm.w.size())
                throw ConfigError("feature vector length does not match the model");
            return model.svm.w.dot(x) + model.svm.bias;
    }
    throw ConfigError("unknown classifier kind");
}

int predict_row(const Model& model, const Eigen::VectorXd& x) {
    return score_row(model, x) >= 0.0 ? 1 : 0;
}

std::vector<double> score_matrix(const Model& model, const Eigen::MatrixXd& X) {
    std::vector<double> out(static_cast<size_t>(X.rows()));
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        out[static_cast<size_t>(i)] = score_row(model, X.row(i).transpose());
    return out;
}

std::vector<int> predict_matrix(const Model& model, const Eigen::MatrixXd& X) {
    std::vector<int> out(static_cast<size_t>(X.rows()));
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        out[static_cast<size_t>(i)] = predict_row(model, X.row(i).transpose());
    return out;
}

// ---- serialization ----

static const char* kMagic = "gwofi-model";
static const int kVersion = 1;

void save_model(const Model& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write model file '" + path + "'");
    out << kMagic << ' ' << kVersion << '\n';
    out << "kind " << to_string(model.kind) << '\n';
    out << "features " << model.feature_names.size() << '\n';
    for (const auto& name : model.feature_names) out << name << '\n';

    switch (model.kind) {
        case ClassifierKind::NaiveBayes: {
            const auto& nb = model.nb;
            out << "priors " << format_double(nb.log_prior[0]) << ' '
                << format_double(nb.log_prior[1]) << '\n';
            out << "columns " << nb.is_binary.size() << '\n';
            for (size_t j = 0; j < nb.is_binary.size(); ++j) {
                Eigen::Index col = static_cast<Eigen::Index>(j);
                if (nb.is_binary[j])
                    out << "bin " << format_double(nb.p1(0, col)) << ' '
                        << format_double(nb.p1(1, col)) << '\n';
                else
                    out << "num " << format_double(nb.mean(0, col)) << ' '
                        << format_double(nb.var(0, col)) << ' ' << format_double(nb.mean(1, col))
                        << ' ' << format_double(nb.var(1, col)) << '\n';
            }
            break;
        }
        case ClassifierKind::DecisionTree: {
            out << "nodes " << model.tree.nodes.size() << '\n';
            for (const auto& node : model.tree.nodes) {
                if (node.is_leaf)
                    out << "leaf " << format_double(node.prob) << '\n';
                else
                    out << "split " << node.feature << ' ' << format_double(node.threshold) << ' '
                        << node.left << ' ' << node.right << '\n';
            }
            break;
        }
        case ClassifierKind::LinearSvm: {
            out << "weights " << model.svm.w.size() << '\n';
            for (Eigen::Index j = 0; j < model.svm.w.size(); ++j)
                out << format_double(model.svm.w(j)) << '\n';
            out << "bias " << format_double(model.svm.bias) << '\n';
            break;
        }
    }
    if (!out) throw DataError("failed while writing model file '" + path + "'");
}

namespace {

struct LineReader {
    std::ifstream in;
    std::string path;
    int lineno = 0;

    explicit LineReader(const std::string& p) : in(p, std::ios::binary), path(p) {
        if (!in) throw DataError("cannot open model file '" + p + "'");
    }

    std::string next() {
        std::string line;
        if (!std::getline(in, line))
            throw DataError(path + ": model file ends early at line " + std::to_string(lineno + 1));
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    }

    [[noreturn]] void fail(const std::string& what) {
        throw DataError(path + ":" + std::to_string(lineno) + ": " + what);
    }

    std::vector<std::string> tokens() {
        std::istringstream ss(next());
        std::vector<std::string> out;
        std::string tok;
        while (ss >> tok) out.push_back(tok);
        return out;
    }

    double num(const std::string& s) {
        double v = 0.0;
        if (!parse_double_strict(s, v)) fail("bad number '" + s + "'");
        return v;
    }

    long long integer(const std::string& s) {
        try {
            size_t used = 0;
            long long v = std::stoll(s, &used);
            if (used != s.size()) fail("bad integer '" + s + "'");
            return v;
        } catch (const std::exception&) {
            fail("bad integer '" + s + "'");
        }
    }
};

} // namespace

Model load_model(const std::string& path) {
    LineReader r(path);
    auto head = r.tokens();
    if (head.size() != 2 || head[0] != kMagic) r.fail("not a model file");
    if (r.integer(head[1]) != kVersion) r.fail("unsupported model version " + head[1]);

    Model model;
    auto kind_line = r.tokens();
    if (kind_line.size() != 2 || kind_line[0] != "kind") r.fail("expected the kind line");
    model.kind = classifier_from_name(kind_line[1]);

    auto feat_line = r.tokens();
    if (feat_line.size() != 2 || feat_line[0] != "features") r.fail("expected the features line");
    long long n_features = r.integer(feat_line[1]);
    if (n_features < 0 || n_features > 1000000) r.fail("implausible feature count");
    model.feature_names.reserve(static_cast<size_t>(n_features));
    for (long long i = 0; i < n_features; ++i) model.feature_names.push_back(r.next());

    switch (model.kind) {
        case ClassifierKind::NaiveBayes: {
            auto& nb = model.nb;
            auto priors = r.tokens();
            if (priors.size() != 3 || priors[0] != "priors") r.fail("expected the priors line");
            nb.log_prior[0] = r.num(priors[1]);
            nb.log_prior[1] = r.num(priors[2]);
            auto cols = r.tokens();
            if (cols.size() != 2 || cols[0] != "columns") r.fail("expected the columns line");
            long long d = r.integer(cols[1]);
            if (d < 0 || d > 1000000) r.fail("implausible column count");
            nb.is_binary.resize(static_cast<size_t>(d));
            nb.p1 = Eigen::MatrixXd::Zero(2, d);
            nb.mean = Eigen::MatrixXd::Zero(2, d);
            nb.var = Eigen::MatrixXd::Zero(2, d);
            for (long long j = 0; j < d; ++j) {
                auto row = r.tokens();
                if (row.size() == 3 && row[0] == "bin") {
                    nb.is_binary[static_cast<size_t>(j)] = true;
                    nb.p1(0, j) = r.num(row[1]);
                    nb.p1(1, j) = r.num(row[2]);
                } else if (row.size() == 5 && row[0] == "num") {
                    nb.is_binary[static_cast<size_t>(j)] = false;
                    nb.mean(0, j) = r.num(row[1]);
                    nb.var(0, j) = r.num(row[2]);
                    nb.mean(1, j) = r.num(row[3]);
                    nb.var(1, j) = r.num(row[4]);
                } else {
                    r.fail("expected a bin or num column line");
                }
            }
            break;
        }
        case ClassifierKind::DecisionTree: {
            auto count = r.tokens();
            if (count.size() != 2 || count[0] != "nodes") r.fail("expected the nodes line");
            long long m = r.integer(count[1]);
            if (m < 1 || m > 100000000) r.fail("implausible node count");
            model.tree.nodes.resize(static_cast<size_t>(m));
            for (long long i = 0; i < m; ++i) {
                auto row = r.tokens();
                auto& node = model.tree.nodes[static_cast<size_t>(i)];
                if (row.size() == 2 && row[0] == "leaf") {
                    node.is_leaf = true;
                    node.prob = r.num(row[1]);
                } else if (row.size() == 5 && row[0] == "split") {
                    node.is_leaf = false;
                    node.feature = static_cast<int>(r.integer(row[1]));
                    node.threshold = r.num(row[2]);
                    node.left = static_cast<int>(r.integer(row[3]));
                    node.right = static_cast<int>(r.integer(row[4]));
                    if (node.left < 0 || node.left >= m || node.right < 0 || node.right >= m)
                        r.fail("node child index out of range");
                } else {
                    r.fail("expected a leaf or split line");
                }
            }
            break;
        }
        case ClassifierKind::LinearSvm: {
            auto count = r.tokens();
            if (count.size() != 2 || count[0] != "weights") r.fail("expected the weights line");
            long long d = r.integer(count[1]);
            if (d < 0 || d > 1000000) r.fail("implausible weight count");
            model.svm.w.resize(d);
            for (long long j = 0; j < d; ++j) {
                auto row = r.tokens();
                if (row.size() != 1) r.fail("expected one weight per line");
                model.svm.w(j) = r.num(row[0]);
            }
            auto bias = r.tokens();
            if (bias.size() != 2 || bias[0] != "bias") r.fail("expected the bias line");
            model.svm.bias = r.num(bias[1]);
            break;
        }
    }
    return model;
}

} // namespace gwofi
