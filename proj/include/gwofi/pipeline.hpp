#ifndef GWOFI_PIPELINE_HPP
#define GWOFI_PIPELINE_HPP

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "gwofi/apriori.hpp"
#include "gwofi/classifiers.hpp"
#include "gwofi/dataset.hpp"
#include "gwofi/evaluation.hpp"
#include "gwofi/gwo.hpp"

namespace gwofi {

enum class RuleMode { Multi, SingleAntecedent, FilteredAntecedent };

RuleMode rule_mode_from_name(const std::string& name);

struct FitnessWeights {
    double w_err = 0.99;
    double w_size = 0.01;
};

struct SplitProtocol {
    int cv_folds = 5;
    double holdout_fraction = 0.2;
};

struct PipelineConfig {
    // data
    std::string data_path;
    std::string schema_path;
    std::string bins_path;              // empty: no discretization pass
    std::string target;
    std::vector<std::string> exclude;   // columns kept out of the classifier features
    std::string gender_column = "Gender";
    EncodingMode encoding = EncodingMode::OneHot;
    int impute_sweeps = 3;

    // mining / augmentation
    MiningConfig mining;
    int augment_min_len = 2;            // 1-itemsets duplicate base columns
    double prefilter_confidence = 0.0;  // 0 disables the discriminative prefilter
    bool augment = true;

    // optimizer / classifier / fitness
    GwoConfig gwo;
    ClassifierKind classifier = ClassifierKind::NaiveBayes;
    int svm_epochs = 20;
    bool svm_class_weights = true;
    FitnessWeights fitness;
    SplitProtocol split;

    // rule reports
    RuleMode rule_mode = RuleMode::Multi;
    std::vector<std::string> antecedent_filter;
    Measure rule_sort = Measure::MaxConfidence;
    bool emit_rules = true;

    // run
    std::uint64_t seed = 0;
    std::string out_dir;                // empty: nothing is written
};

/// `key = value` lines, # comments, keys namespaced like mining.min_support.
PipelineConfig load_config(const std::string& path);
void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value);
void validate(const PipelineConfig& cfg);

/// Base feature matrix plus one indicator column per supplied itemset; a
/// registry keeps every column nameable.
struct AugmentedMatrix {
    Eigen::MatrixXd X;
    std::vector<std::string> names;
    std::vector<bool> is_binary;
    std::vector<bool> is_itemset;  // true for appended conjunction columns
    int base_cols = 0;

    int cols() const { return static_cast<int>(X.cols()); }
};

/// Appends itemset indicator columns to the base matrix; any itemset whose
/// tokens touch `target_column` is rejected as leakage. Transactions must be
/// row-aligned with the base matrix.
AugmentedMatrix augment_features(const FeatureMatrix& base, const std::vector<Itemset>& itemsets,
                                 const TransactionSet& tx, const std::string& target_column);

/// Mask bit per feature column, then the classifier's tuning dimensions:
/// linear svm lambda in [1e-4, 1e2] (log), tree depth in [1, 20] and
/// min_leaf in [1, 50] (rounded at use), naive Bayes alpha in [1e-3, 10] (log).
SearchSpace build_search_space(int n_features_total, ClassifierKind kind);

/// Applies decoded tuning values onto a settings block.
TrainSettings settings_from_params(const PipelineConfig& cfg, const std::vector<double>& params);

/// Everything the wrapper fitness needs, fixed for one optimizer run.
struct FitnessContext {
    const AugmentedMatrix* data = nullptr;
    const std::vector<int>* labels = nullptr;          // all rows
    std::vector<std::vector<int>> folds;               // CV test blocks, global row ids
    PipelineConfig cfg;
};

FitnessContext make_fitness_context(const AugmentedMatrix& data, const std::vector<int>& labels,
                                    const std::vector<int>& train_rows, const PipelineConfig& cfg);

/// w_err * (1 - mean CV auroc) + w_size * (selected / total columns); the
/// all-zero mask scores the worst possible 1.0, and a trainer failure on any
/// fold does too (with a warning on stderr) so the search never crashes.
double gwofi_fitness(const FitnessContext& ctx, const std::vector<std::uint8_t>& mask,
                     const std::vector<double>& params);

struct RuleTable {
    std::string consequent_token;
    std::vector<Rule> rules;
};

/// Ranked rule tables, one per target token. Multi mode allows any
/// antecedent (items of the consequent's own column excluded); single mode
/// keeps |antecedent| = 1; filtered mode restricts antecedent items to the
/// given columns, each entry either a column name or column=value pin.
std::vector<RuleTable> mine_factor_rules(const TransactionSet& tx, const MiningConfig& mining,
                                         const std::vector<std::string>& target_tokens,
                                         RuleMode mode,
                                         const std::vector<std::string>& antecedent_filter,
                                         Measure sort_key);

/// Tab-separated rule table with a header; measures print with 4 decimals.
void write_rule_table(std::ostream& out, const std::vector<RuleTable>& tables,
                      const TransactionSet& tx);

struct RunReport {
    std::string method;                     // classifier + search tag
    std::vector<std::string> selected_names;
    std::vector<std::uint8_t> best_mask;
    long long selected_count = 0;
    std::vector<std::string> param_names;
    std::vector<double> tuned_params;
    double best_fitness = 0.0;
    double cv_auroc = 0.0;                  // mean over folds at the chosen point
    std::vector<double> fold_aurocs;
    MetricsReport holdout;
    long long train_rows = 0;
    long long test_rows = 0;
    std::vector<double> alpha_history;
    std::string trace;                      // optimizer trace lines
    Model final_model;
    std::vector<RuleTable> rule_tables;
    TransactionSet rule_items;              // token universe behind rule_tables
};

/// Full flow: load, impute, discretize, tokenize, mine, augment, optimize,
/// final fit, holdout evaluation, rule tables. Writes report.tsv,
/// rules_<target>.tsv, trace.log and model.txt into cfg.out_dir when set.
RunReport run_gwofi(const PipelineConfig& cfg);

/// The shared front of every subcommand: load, impute, discretize.
Dataset load_prepared(const PipelineConfig& cfg);

/// The token universe of a column within a transaction set.
std::vector<std::string> target_tokens_for(const TransactionSet& tx, const std::string& column);

} // namespace gwofi

#endif
