#ifndef GWOFI_CLASSIFIERS_HPP
#define GWOFI_CLASSIFIERS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gwofi {

enum class ClassifierKind { NaiveBayes, DecisionTree, LinearSvm };

ClassifierKind classifier_from_name(const std::string& name);
std::string to_string(ClassifierKind k);

/// Mixed naive Bayes: Bernoulli per binary column, Gaussian per continuous
/// column. All probabilities are kept as the sufficient statistics.
struct NaiveBayesModel {
    double log_prior[2] = {0.0, 0.0};
    std::vector<bool> is_binary;
    Eigen::MatrixXd p1;    // 2 x d, P(x=1 | class), used for binary columns
    Eigen::MatrixXd mean;  // 2 x d, used for continuous columns
    Eigen::MatrixXd var;   // 2 x d, floored away from zero
};

struct TreeNode {
    bool is_leaf = true;
    double prob = 0.0;       // positive fraction at the leaf
    int feature = -1;
    double threshold = 0.0;  // x[feature] < threshold goes left
    int left = -1;
    int right = -1;
};

struct DecisionTreeModel {
    std::vector<TreeNode> nodes;  // node 0 is the root
};

struct LinearSvmModel {
    Eigen::VectorXd w;
    double bias = 0.0;
};

/// One trained classifier. `score` is a real margin; predictions take the
/// positive class when score >= 0.
struct Model {
    ClassifierKind kind = ClassifierKind::NaiveBayes;
    std::vector<std::string> feature_names;  // the columns the model consumes, in order
    NaiveBayesModel nb;
    DecisionTreeModel tree;
    LinearSvmModel svm;
};

double score_row(const Model& model, const Eigen::VectorXd& x);
int predict_row(const Model& model, const Eigen::VectorXd& x);
std::vector<double> score_matrix(const Model& model, const Eigen::MatrixXd& X);
std::vector<int> predict_matrix(const Model& model, const Eigen::MatrixXd& X);

/// 1 - p0^2 - p1^2 over the two class counts.
double gini_impurity(long long pos, long long neg);

Model train_naive_bayes(const Eigen::MatrixXd& X, const std::vector<int>& y,
                        const std::vector<bool>& is_binary, double smoothing);

/// Greedy binary CART on the Gini criterion. Thresholds are midpoints of
/// consecutive distinct values; zero-gain splits are allowed so stacked
/// splits can express parity-like concepts; ties prefer the lowest feature
/// index, then the lowest threshold.
Model train_decision_tree(const Eigen::MatrixXd& X, const std::vector<int>& y, int max_depth,
                          int min_leaf);

/// Pegasos-style primal subgradient descent with learning rate 1/(lambda*t),
/// an unregularized bias, optional inverse-frequency class weights and an
/// averaged iterate as the returned model.
Model train_linear_svm(const Eigen::MatrixXd& X, const std::vector<int>& y, double lambda,
                       int epochs, bool class_weights, std::uint64_t seed);

/// Everything the generic trainer needs; each classifier reads its own slice.
struct TrainSettings {
    ClassifierKind kind = ClassifierKind::NaiveBayes;
    double nb_smoothing = 1.0;
    int tree_max_depth = 6;
    int tree_min_leaf = 1;
    double svm_lambda = 1e-3;
    int svm_epochs = 20;
    bool svm_class_weights = true;
    std::uint64_t seed = 0;
};

Model train_classifier(const Eigen::MatrixXd& X, const std::vector<int>& y,
                       const std::vector<bool>& is_binary, const TrainSettings& s);

/// Versioned flat text, loadable on any platform; numbers survive the round
/// trip bit for bit.
void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

} // namespace gwofi

#endif
