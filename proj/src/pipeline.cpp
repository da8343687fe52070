#include "gwofi/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "gwofi/errors.hpp"
#include "gwofi/rng.hpp"

namespace gwofi {

// ---- config ----

static std::string trim_copy(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

static bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
    if (value == "0" || value == "false" || value == "no" || value == "off") return false;
    throw ConfigError("config key '" + key + "': expected a boolean, got '" + value + "'");
}

static double parse_num(const std::string& key, const std::string& value) {
    double v = 0.0;
    if (!parse_double_strict(value, v))
        throw ConfigError("config key '" + key + "': expected a number, got '" + value + "'");
    return v;
}

static long long parse_int(const std::string& key, const std::string& value) {
    double v = parse_num(key, value);
    long long i = static_cast<long long>(v);
    if (static_cast<double>(i) != v)
        throw ConfigError("config key '" + key + "': expected an integer, got '" + value + "'");
    return i;
}

static std::vector<std::string> parse_list(const std::string& value) {
    std::vector<std::string> out;
    size_t start = 0;
    while (start <= value.size()) {
        size_t comma = value.find(',', start);
        std::string piece = trim_copy(comma == std::string::npos ? value.substr(start)
                                                                 : value.substr(start, comma - start));
        if (!piece.empty()) out.push_back(piece);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "data.path") cfg.data_path = value;
    else if (key == "data.schema") cfg.schema_path = value;
    else if (key == "data.bins") cfg.bins_path = value;
    else if (key == "data.target") cfg.target = value;
    else if (key == "data.exclude") cfg.exclude = parse_list(value);
    else if (key == "data.gender_column") cfg.gender_column = value;
    else if (key == "data.encoding") {
        if (value == "onehot") cfg.encoding = EncodingMode::OneHot;
        else if (value == "label_integer") cfg.encoding = EncodingMode::LabelInteger;
        else throw ConfigError("data.encoding must be onehot or label_integer");
    } else if (key == "data.impute_sweeps") cfg.impute_sweeps = static_cast<int>(parse_int(key, value));
    else if (key == "mining.min_support") cfg.mining.min_support = parse_num(key, value);
    else if (key == "mining.max_len") cfg.mining.max_len = static_cast<int>(parse_int(key, value));
    else if (key == "mining.augment_min_len") cfg.augment_min_len = static_cast<int>(parse_int(key, value));
    else if (key == "mining.prefilter_confidence") cfg.prefilter_confidence = parse_num(key, value);
    else if (key == "gwo.pack_size") cfg.gwo.wolves = static_cast<int>(parse_int(key, value));
    else if (key == "gwo.iterations") cfg.gwo.iters = static_cast<int>(parse_int(key, value));
    else if (key == "gwo.steepness") cfg.gwo.steepness = parse_num(key, value);
    else if (key == "gwo.parallel") cfg.gwo.parallel = parse_bool(key, value);
    else if (key == "classifier.kind") cfg.classifier = classifier_from_name(value);
    else if (key == "classifier.svm_epochs") cfg.svm_epochs = static_cast<int>(parse_int(key, value));
    else if (key == "classifier.svm_class_weights") cfg.svm_class_weights = parse_bool(key, value);
    else if (key == "fitness.w_err") cfg.fitness.w_err = parse_num(key, value);
    else if (key == "fitness.w_size") cfg.fitness.w_size = parse_num(key, value);
    else if (key == "split.cv_folds") cfg.split.cv_folds = static_cast<int>(parse_int(key, value));
    else if (key == "split.holdout_fraction") cfg.split.holdout_fraction = parse_num(key, value);
    else if (key == "rules.mode") cfg.rule_mode = rule_mode_from_name(value);
    else if (key == "rules.antecedent_filter") cfg.antecedent_filter = parse_list(value);
    else if (key == "rules.sort") cfg.rule_sort = measure_from_name(value);
    else if (key == "run.seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "run.out_dir") cfg.out_dir = value;
    else if (key == "run.augment") cfg.augment = parse_bool(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    PipelineConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string t = trim_copy(line);
        if (t.empty()) continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim_copy(t.substr(0, eq));
        std::string value = trim_copy(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) + ": empty config key");
        try {
            apply_config_entry(cfg, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

void validate(const PipelineConfig& cfg) {
    if (!(cfg.fitness.w_err > 0.0) || cfg.fitness.w_err > 1.0)
        throw ConfigError("fitness.w_err must lie in (0, 1]");
    if (std::abs(cfg.fitness.w_err + cfg.fitness.w_size - 1.0) > 1e-9)
        throw ConfigError("fitness weights must sum to 1");
    if (cfg.split.cv_folds < 2) throw ConfigError("split.cv_folds must be >= 2");
    if (!(cfg.split.holdout_fraction > 0.0) || !(cfg.split.holdout_fraction < 1.0))
        throw ConfigError("split.holdout_fraction must lie strictly between 0 and 1");
    if (cfg.augment_min_len < 1) throw ConfigError("mining.augment_min_len must be >= 1");
    if (cfg.prefilter_confidence < 0.0 || cfg.prefilter_confidence > 1.0)
        throw ConfigError("mining.prefilter_confidence must lie in [0, 1]");
    if (cfg.impute_sweeps < 0) throw ConfigError("data.impute_sweeps must be >= 0");
}

// ---- augmentation ----

static bool txn_contains(const std::vector<int>& txn, const std::vector<int>& items) {
    size_t i = 0;
    for (int want : items) {
        while (i < txn.size() && txn[i] < want) ++i;
        if (i == txn.size() || txn[i] != want) return false;
        ++i;
    }
    return true;
}

static std::string itemset_name(const TransactionSet& tx, const std::vector<int>& items) {
    std::string name;
    for (size_t i = 0; i < items.size(); ++i) {
        if (i) name += " & ";
        name += tx.token(items[i]);
    }
    return name;
}

AugmentedMatrix augment_features(const FeatureMatrix& base, const std::vector<Itemset>& itemsets,
                                 const TransactionSet& tx, const std::string& target_column) {
    if (static_cast<long long>(tx.transactions.size()) != base.rows())
        throw ConfigError("transactions are not row-aligned with the feature matrix");
    const std::string target_prefix = target_column + "=";

    AugmentedMatrix am;
    am.base_cols = base.cols();
    am.X.resize(base.rows(), base.cols() + static_cast<Eigen::Index>(itemsets.size()));
    am.X.leftCols(base.cols()) = base.X;
    am.names = base.names;
    am.is_binary = base.is_binary;
    am.is_itemset.assign(base.names.size(), false);

    for (size_t k = 0; k < itemsets.size(); ++k) {
        const auto& items = itemsets[k].items;
        for (int id : items) {
            const std::string& token = tx.token(id);
            if (token.rfind(target_prefix, 0) == 0)
                throw DataError("leakage: itemset '" + itemset_name(tx, items) +
                                "' references the target column '" + target_column + "'");
        }
        Eigen::Index col = base.cols() + static_cast<Eigen::Index>(k);
        for (long long r = 0; r < base.rows(); ++r)
            am.X(r, col) = txn_contains(tx.transactions[static_cast<size_t>(r)], items) ? 1.0 : 0.0;
        am.names.push_back(itemset_name(tx, items));
        am.is_binary.push_back(true);
        am.is_itemset.push_back(true);
    }
    return am;
}

// ---- search space / settings ----

SearchSpace build_search_space(int n_features_total, ClassifierKind kind) {
    if (n_features_total < 1) throw ConfigError("the search space needs at least one feature");
    SearchSpace space;
    space.n_bits = n_features_total;
    switch (kind) {
        case ClassifierKind::NaiveBayes:
            space.dims.push_back({"alpha", 1e-3, 10.0, true});
            break;
        case ClassifierKind::DecisionTree:
            space.dims.push_back({"max_depth", 1.0, 20.0, false});
            space.dims.push_back({"min_leaf", 1.0, 50.0, false});
            break;
        case ClassifierKind::LinearSvm:
            space.dims.push_back({"lambda", 1e-4, 1e2, true});
            break;
    }
    return space;
}

static int round_clamped(double v, int lo, int hi) {
    long long r = std::llround(v);
    if (r < lo) r = lo;
    if (r > hi) r = hi;
    return static_cast<int>(r);
}

TrainSettings settings_from_params(const PipelineConfig& cfg, const std::vector<double>& params) {
    TrainSettings s;
    s.kind = cfg.classifier;
    s.svm_epochs = cfg.svm_epochs;
    s.svm_class_weights = cfg.svm_class_weights;
    switch (cfg.classifier) {
        case ClassifierKind::NaiveBayes:
            if (params.size() != 1) throw ConfigError("naive Bayes tunes exactly one value");
            s.nb_smoothing = params[0];
            break;
        case ClassifierKind::DecisionTree:
            if (params.size() != 2) throw ConfigError("the tree tunes exactly two values");
            s.tree_max_depth = round_clamped(params[0], 1, 20);
            s.tree_min_leaf = round_clamped(params[1], 1, 50);
            break;
        case ClassifierKind::LinearSvm:
            if (params.size() != 1) throw ConfigError("the linear svm tunes exactly one value");
            s.svm_lambda = params[0];
            break;
    }
    return s;
}

// ---- fitness ----

static Eigen::MatrixXd take(const Eigen::MatrixXd& X, const std::vector<int>& rows,
                            const std::vector<int>& cols) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols.size(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = X(rows[i], cols[j]);
    return out;
}

static std::vector<int> take_labels(const std::vector<int>& y, const std::vector<int>& rows) {
    std::vector<int> out;
    out.reserve(rows.size());
    for (int r : rows) out.push_back(y[static_cast<size_t>(r)]);
    return out;
}

FitnessContext make_fitness_context(const AugmentedMatrix& data, const std::vector<int>& labels,
                                    const std::vector<int>& train_rows, const PipelineConfig& cfg) {
    FitnessContext ctx;
    ctx.data = &data;
    ctx.labels = &labels;
    ctx.cfg = cfg;

    std::vector<int> y_train = take_labels(labels, train_rows);
    auto local_folds = stratified_folds(y_train, cfg.split.cv_folds, mix_indices(cfg.seed, 0x6376));
    ctx.folds.resize(local_folds.size());
    for (size_t f = 0; f < local_folds.size(); ++f) {
        ctx.folds[f].reserve(local_folds[f].size());
        for (int local : local_folds[f])
            ctx.folds[f].push_back(train_rows[static_cast<size_t>(local)]);
    }
    return ctx;
}

double gwofi_fitness(const FitnessContext& ctx, const std::vector<std::uint8_t>& mask,
                     const std::vector<double>& params) {
    const AugmentedMatrix& am = *ctx.data;
    if (mask.size() != static_cast<size_t>(am.cols()))
        throw ConfigError("mask length does not match the feature matrix");

    std::vector<int> cols;
    for (size_t j = 0; j < mask.size(); ++j)
        if (mask[j]) cols.push_back(static_cast<int>(j));
    if (cols.empty()) return 1.0;  // the empty subset is the worst citizen

    TrainSettings settings = settings_from_params(ctx.cfg, params);
    settings.seed = mix_indices(ctx.cfg.seed, 0x666974);

    std::vector<bool> is_binary_sel;
    is_binary_sel.reserve(cols.size());
    for (int c : cols) is_binary_sel.push_back(am.is_binary[static_cast<size_t>(c)]);

    double auc_sum = 0.0;
    for (size_t f = 0; f < ctx.folds.size(); ++f) {
        std::vector<int> test_rows = ctx.folds[f];
        std::vector<int> train_rows;
        for (size_t g = 0; g < ctx.folds.size(); ++g)
            if (g != f) train_rows.insert(train_rows.end(), ctx.folds[g].begin(), ctx.folds[g].end());
        std::sort(train_rows.begin(), train_rows.end());
        try {
            Eigen::MatrixXd X_tr = take(am.X, train_rows, cols);
            Eigen::MatrixXd X_te = take(am.X, test_rows, cols);
            Model model = train_classifier(X_tr, take_labels(*ctx.labels, train_rows),
                                           is_binary_sel, settings);
            auc_sum += auroc(take_labels(*ctx.labels, test_rows), score_matrix(model, X_te));
        } catch (const std::exception& e) {
            std::fprintf(stderr, "warning: fold %zu trainer failed (%s); scoring worst fitness\n",
                         f, e.what());
            return 1.0;
        }
    }
    double mean_auc = auc_sum / static_cast<double>(ctx.folds.size());
    double size_frac = static_cast<double>(cols.size()) / static_cast<double>(am.cols());
    return ctx.cfg.fitness.w_err * (1.0 - mean_auc) + ctx.cfg.fitness.w_size * size_frac;
}

// ---- rule modes ----

RuleMode rule_mode_from_name(const std::string& name) {
    if (name == "multi") return RuleMode::Multi;
    if (name == "single" || name == "single_antecedent") return RuleMode::SingleAntecedent;
    if (name == "filtered" || name == "filtered_antecedent") return RuleMode::FilteredAntecedent;
    throw ConfigError("unknown rule mode '" + name + "' (use multi, single or filtered)");
}

static std::string column_of_token(const std::string& token) {
    size_t eq = token.find('=');
    return eq == std::string::npos ? token : token.substr(0, eq);
}

std::vector<std::string> target_tokens_for(const TransactionSet& tx, const std::string& column) {
    std::vector<std::string> out;
    const std::string prefix = column + "=";
    for (const auto& token : tx.items)
        if (token.rfind(prefix, 0) == 0) out.push_back(token);
    return out;
}

std::vector<RuleTable> mine_factor_rules(const TransactionSet& tx, const MiningConfig& mining,
                                         const std::vector<std::string>& target_tokens,
                                         RuleMode mode,
                                         const std::vector<std::string>& antecedent_filter,
                                         Measure sort_key) {
    if (target_tokens.empty()) throw ConfigError("no target tokens given for rule mining");
    if (mode == RuleMode::FilteredAntecedent && antecedent_filter.empty())
        throw ConfigError("filtered mode needs at least one antecedent column");

    // filter entries are either a column name or a column=value pin
    std::vector<std::pair<std::string, std::string>> filter;  // (column, value or "")
    for (const auto& entry : antecedent_filter) {
        size_t eq = entry.find('=');
        if (eq == std::string::npos) filter.emplace_back(entry, "");
        else filter.emplace_back(entry.substr(0, eq), entry.substr(eq + 1));
    }

    auto frequent = mine_frequent(tx, mining);

    std::vector<RuleTable> tables;
    for (const auto& token : target_tokens) {
        int id = tx.item_id(token);
        if (id < 0)
            throw DataError("target token '" + token + "' does not occur in the transactions");
        std::string target_column = column_of_token(token);

        auto rules = generate_rules(tx, frequent, id);
        std::vector<Rule> kept;
        for (auto& rule : rules) {
            bool ok = true;
            for (int item : rule.antecedent) {
                const std::string& tok = tx.token(item);
                if (column_of_token(tok) == target_column) { ok = false; break; }
                if (mode == RuleMode::FilteredAntecedent) {
                    bool matched = false;
                    std::string col = column_of_token(tok);
                    std::string val = tok.substr(col.size() + (tok.size() > col.size() ? 1 : 0));
                    for (const auto& [fcol, fval] : filter)
                        if (fcol == col && (fval.empty() || fval == val)) { matched = true; break; }
                    if (!matched) { ok = false; break; }
                }
            }
            if (mode == RuleMode::SingleAntecedent && rule.antecedent.size() != 1) ok = false;
            if (ok) kept.push_back(std::move(rule));
        }
        rank_rules(kept, sort_key);
        tables.push_back(RuleTable{token, std::move(kept)});
    }
    return tables;
}

static std::string fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

void write_rule_table(std::ostream& out, const std::vector<RuleTable>& tables,
                      const TransactionSet& tx) {
    out << "antecedent\tconsequent\tsupport\tcount\tconfidence\tmax_confidence\tkulczynski\t"
           "cosine\timbalance_ratio\n";
    for (const auto& table : tables) {
        for (const auto& rule : table.rules) {
            out << itemset_name(tx, rule.antecedent) << '\t' << table.consequent_token << '\t'
                << fixed4(rule.m.support) << '\t' << rule.count << '\t' << fixed4(rule.m.confidence)
                << '\t' << fixed4(rule.m.max_confidence) << '\t' << fixed4(rule.m.kulczynski)
                << '\t' << fixed4(rule.m.cosine) << '\t' << fixed4(rule.m.imbalance_ratio) << '\n';
        }
    }
}

// ---- the full run ----

template <typename F>
static auto with_stage(const char* stage, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string(stage) + ": " + e.what());
    } catch (const SchemaError& e) {
        throw SchemaError(std::string(stage) + ": " + e.what());
    } catch (const DataError& e) {
        throw DataError(std::string(stage) + ": " + e.what());
    } catch (const NumericError& e) {
        throw NumericError(std::string(stage) + ": " + e.what());
    }
}

Dataset load_prepared(const PipelineConfig& cfg) {
    auto schema = with_stage("load", [&] { return load_schema(cfg.schema_path); });
    Dataset ds = with_stage("load", [&] { return load_table(cfg.data_path, schema); });
    ds = with_stage("impute",
                    [&] { return impute_chained(ds, cfg.impute_sweeps, mix_indices(cfg.seed, 0x696d70)); });
    if (!cfg.bins_path.empty())
        ds = with_stage("discretize", [&] {
            return discretize(ds, load_binspecs(cfg.bins_path), cfg.gender_column);
        });
    return ds;
}

RunReport run_gwofi(const PipelineConfig& cfg) {
    validate(cfg);
    if (cfg.target.empty()) throw ConfigError("no target column configured");

    Dataset ds = load_prepared(cfg);
    std::vector<int> y = with_stage("load", [&] { return binary_target(ds, cfg.target); });

    // classifier view: excluded columns (and the target itself) carry no
    // feature columns and no augmentation tokens; rule mining keeps them
    Dataset ds_feat = ds;
    {
        int t = ds_feat.column_index(cfg.target);
        ds_feat.schema[static_cast<size_t>(t)].role = ColumnRole::Target;
        for (const auto& name : cfg.exclude) {
            int idx = ds_feat.column_index(name);
            if (idx < 0) throw ConfigError("data.exclude names unknown column '" + name + "'");
            ds_feat.schema[static_cast<size_t>(idx)].role = ColumnRole::Ignore;
        }
    }

    std::set<std::string> feat_drop(cfg.exclude.begin(), cfg.exclude.end());
    feat_drop.insert(cfg.target);
    TransactionSet tx_feat = to_transactions(ds, feat_drop);
    TransactionSet tx_rules = to_transactions(ds, {});

    auto frequent = with_stage("mine", [&] { return mine_frequent(tx_feat, cfg.mining); });

    std::vector<Itemset> to_append;
    if (cfg.augment) {
        for (const auto& itemset : frequent) {
            if (static_cast<int>(itemset.items.size()) < cfg.augment_min_len) continue;
            if (cfg.prefilter_confidence > 0.0) {
                long long with_pos = 0, with_neg = 0;
                for (size_t r = 0; r < tx_feat.transactions.size(); ++r)
                    if (txn_contains(tx_feat.transactions[r], itemset.items))
                        (y[r] == 1 ? with_pos : with_neg)++;
                double conf = static_cast<double>(std::max(with_pos, with_neg)) /
                              static_cast<double>(itemset.count);
                if (conf < cfg.prefilter_confidence) continue;
            }
            to_append.push_back(itemset);
        }
    }

    HoldoutSplit split = with_stage("split", [&] {
        return stratified_holdout(y, cfg.split.holdout_fraction, cfg.seed);
    });

    FeatureMatrix base = with_stage("encode", [&] {
        return binarize_features(ds_feat, cfg.encoding, &split.train);
    });
    AugmentedMatrix am = with_stage("augment", [&] {
        return augment_features(base, to_append, tx_feat, cfg.target);
    });

    FitnessContext ctx = with_stage("split", [&] {
        return make_fitness_context(am, y, split.train, cfg);
    });

    SearchSpace space = build_search_space(am.cols(), cfg.classifier);
    GwoConfig gwo_cfg = cfg.gwo;
    gwo_cfg.seed = mix_indices(cfg.seed, 0x67776f);

    std::ostringstream trace;
    GwoResult opt = with_stage("optimize", [&] {
        return optimize(space, [&](const std::vector<std::uint8_t>& mask,
                                   const std::vector<double>& params) {
            return gwofi_fitness(ctx, mask, params);
        }, gwo_cfg, &trace);
    });

    RunReport report;
    report.method = to_string(cfg.classifier) + (cfg.augment ? "+gwofi" : "+gwo");
    report.best_mask = opt.leaders.alpha.mask;
    report.best_fitness = opt.leaders.alpha.fitness;
    report.alpha_history = opt.alpha_history;
    report.trace = trace.str();

    std::vector<int> sel_cols;
    for (size_t j = 0; j < report.best_mask.size(); ++j)
        if (report.best_mask[j]) sel_cols.push_back(static_cast<int>(j));
    if (sel_cols.empty())
        throw NumericError("optimize: the search ended on an empty feature subset");
    report.selected_count = static_cast<long long>(sel_cols.size());
    for (int c : sel_cols) report.selected_names.push_back(am.names[static_cast<size_t>(c)]);

    std::vector<double> params = decode_params(space, opt.leaders.alpha.pos);
    report.tuned_params = params;
    for (const auto& dim : space.dims) report.param_names.push_back(dim.name);

    // cross-validation metrics at the chosen point, same folds as the search
    TrainSettings cv_settings = settings_from_params(cfg, params);
    cv_settings.seed = mix_indices(cfg.seed, 0x666974);
    std::vector<bool> is_binary_sel;
    for (int c : sel_cols) is_binary_sel.push_back(am.is_binary[static_cast<size_t>(c)]);
    with_stage("evaluate", [&] {
        for (size_t f = 0; f < ctx.folds.size(); ++f) {
            std::vector<int> fold_train;
            for (size_t g = 0; g < ctx.folds.size(); ++g)
                if (g != f) fold_train.insert(fold_train.end(), ctx.folds[g].begin(), ctx.folds[g].end());
            std::sort(fold_train.begin(), fold_train.end());
            Model m = train_classifier(take(am.X, fold_train, sel_cols),
                                       take_labels(y, fold_train), is_binary_sel, cv_settings);
            report.fold_aurocs.push_back(
                auroc(take_labels(y, ctx.folds[f]), score_matrix(m, take(am.X, ctx.folds[f], sel_cols))));
        }
        return 0;
    });
    double auc_sum = 0.0;
    for (double a : report.fold_aurocs) auc_sum += a;
    report.cv_auroc = auc_sum / static_cast<double>(report.fold_aurocs.size());

    // final fit on the whole training side, judged on the untouched holdout
    TrainSettings final_settings = settings_from_params(cfg, params);
    final_settings.seed = mix_indices(cfg.seed, 0x66696e);
    Eigen::MatrixXd X_tr = take(am.X, split.train, sel_cols);
    Eigen::MatrixXd X_te = take(am.X, split.test, sel_cols);
    std::vector<int> y_tr = take_labels(y, split.train);
    std::vector<int> y_te = take_labels(y, split.test);
    report.holdout = with_stage("evaluate", [&] {
        return evaluate_model(X_tr, y_tr, X_te, y_te, is_binary_sel, final_settings);
    });
    report.final_model = with_stage("evaluate", [&] {
        return train_classifier(X_tr, y_tr, is_binary_sel, final_settings);
    });
    report.final_model.feature_names = report.selected_names;
    report.train_rows = static_cast<long long>(split.train.size());
    report.test_rows = static_cast<long long>(split.test.size());

    if (cfg.emit_rules) {
        report.rule_tables = with_stage("rules", [&] {
            return mine_factor_rules(tx_rules, cfg.mining, target_tokens_for(tx_rules, cfg.target),
                                     cfg.rule_mode, cfg.antecedent_filter, cfg.rule_sort);
        });
    }
    report.rule_items = tx_rules;

    if (!cfg.out_dir.empty()) {
        with_stage("write", [&] {
            namespace fs = std::filesystem;
            fs::create_directories(cfg.out_dir);
            {
                std::ofstream out(cfg.out_dir + "/report.tsv", std::ios::binary);
                if (!out) throw DataError("cannot write report.tsv");
                out << "method\tphase\tselected\taccuracy_pct\tsensitivity\tspecificity\tauroc\n";
                MetricsReport cv_report;
                cv_report.auroc_value = report.cv_auroc;
                out << metrics_row(report.method, "cv", report.selected_count, cv_report) << '\n';
                out << metrics_row(report.method, "holdout", report.selected_count, report.holdout)
                    << '\n';
            }
            if (cfg.emit_rules) {
                std::ofstream out(cfg.out_dir + "/rules_" + cfg.target + ".tsv", std::ios::binary);
                if (!out) throw DataError("cannot write the rules table");
                write_rule_table(out, report.rule_tables, report.rule_items);
            }
            {
                std::ofstream out(cfg.out_dir + "/trace.log", std::ios::binary);
                if (!out) throw DataError("cannot write trace.log");
                out << report.trace;
            }
            save_model(report.final_model, cfg.out_dir + "/model.txt");
            return 0;
        });
    }
    return report;
}

} // namespace gwofi
