// command line front end: mine itemsets, report rules, train and evaluate
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gwofi/errors.hpp"
#include "gwofi/pipeline.hpp"
#include "gwofi/synthetic.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string dataset;
    std::string target;
    std::string out;
    std::optional<double> min_support;
    std::optional<int> max_len;
    std::optional<std::uint64_t> seed;
    bool no_augment = false;
    std::string mode;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "config file with key = value lines");
    cmd->add_option("dataset", args.dataset, "CSV table (overrides data.path from the config)");
    cmd->add_option("--seed", args.seed, "master seed");
    cmd->add_option("--min-support", args.min_support, "minimum itemset support in (0,1]");
    cmd->add_option("--max-len", args.max_len, "largest itemset size to mine");
    cmd->add_option("--target", args.target, "target column name");
    cmd->add_option("--out", args.out, "output directory");
}

gwofi::PipelineConfig make_config(const CommonArgs& args) {
    gwofi::PipelineConfig cfg;
    if (!args.config_path.empty()) cfg = gwofi::load_config(args.config_path);
    if (!args.dataset.empty()) cfg.data_path = args.dataset;
    if (!args.target.empty()) cfg.target = args.target;
    if (!args.out.empty()) cfg.out_dir = args.out;
    if (args.min_support) cfg.mining.min_support = *args.min_support;
    if (args.max_len) cfg.mining.max_len = *args.max_len;
    if (args.seed) cfg.seed = *args.seed;
    if (args.no_augment) cfg.augment = false;
    if (!args.mode.empty()) cfg.rule_mode = gwofi::rule_mode_from_name(args.mode);
    if (cfg.data_path.empty())
        throw gwofi::ConfigError(
            "no dataset given: pass a dataset argument or a --config with data.path");
    if (cfg.schema_path.empty())
        throw gwofi::ConfigError("no schema given: set data.schema in the config");
    return cfg;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir + "/" + name, std::ios::binary);
    if (!out) throw gwofi::DataError("cannot write " + dir + "/" + name);
    return out;
}

int cmd_mine(const CommonArgs& args) {
    auto cfg = make_config(args);
    gwofi::Dataset ds = gwofi::load_prepared(cfg);
    auto tx = gwofi::to_transactions(ds, {});
    auto frequent = gwofi::mine_frequent(tx, cfg.mining);

    auto emit = [&](std::ostream& out) {
        out << "items\tsize\tcount\tsupport\n";
        for (const auto& itemset : frequent) {
            for (size_t i = 0; i < itemset.items.size(); ++i) {
                if (i) out << " & ";
                out << tx.token(itemset.items[i]);
            }
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.4f", itemset.support);
            out << '\t' << itemset.items.size() << '\t' << itemset.count << '\t' << buf << '\n';
        }
    };
    if (cfg.out_dir.empty()) {
        emit(std::cout);
    } else {
        auto out = open_out(cfg.out_dir, "itemsets.tsv");
        emit(out);
    }
    return 0;
}

int cmd_rules(const CommonArgs& args) {
    auto cfg = make_config(args);
    if (cfg.target.empty()) throw gwofi::ConfigError("rules needs --target or data.target");
    gwofi::Dataset ds = gwofi::load_prepared(cfg);
    auto tx = gwofi::to_transactions(ds, {});
    auto tokens = gwofi::target_tokens_for(tx, cfg.target);
    if (tokens.empty())
        throw gwofi::DataError("target column '" + cfg.target + "' produced no tokens");
    auto tables = gwofi::mine_factor_rules(tx, cfg.mining, tokens, cfg.rule_mode,
                                           cfg.antecedent_filter, cfg.rule_sort);
    if (cfg.out_dir.empty()) {
        gwofi::write_rule_table(std::cout, tables, tx);
    } else {
        auto out = open_out(cfg.out_dir, "rules_" + cfg.target + ".tsv");
        gwofi::write_rule_table(out, tables, tx);
    }
    return 0;
}

int cmd_train(const CommonArgs& args, bool emit_rules) {
    auto cfg = make_config(args);
    cfg.emit_rules = emit_rules;
    auto report = gwofi::run_gwofi(cfg);
    std::cout << "method\tphase\tselected\taccuracy_pct\tsensitivity\tspecificity\tauroc\n";
    gwofi::MetricsReport cv;
    cv.auroc_value = report.cv_auroc;
    std::cout << gwofi::metrics_row(report.method, "cv", report.selected_count, cv) << '\n';
    std::cout << gwofi::metrics_row(report.method, "holdout", report.selected_count, report.holdout)
              << '\n';
    return 0;
}

int cmd_report(const CommonArgs& args) {
    auto cfg = make_config(args);
    if (cfg.out_dir.empty())
        throw gwofi::ConfigError("report needs --out pointing at a directory with model.txt");
    gwofi::Model model = gwofi::load_model(cfg.out_dir + "/model.txt");

    gwofi::Dataset ds = gwofi::load_prepared(cfg);
    std::vector<int> y = gwofi::binary_target(ds, cfg.target);

    gwofi::Dataset ds_feat = ds;
    {
        int t = ds_feat.column_index(cfg.target);
        if (t < 0) throw gwofi::SchemaError("no column named '" + cfg.target + "'");
        ds_feat.schema[static_cast<size_t>(t)].role = gwofi::ColumnRole::Target;
        for (const auto& name : cfg.exclude) {
            int idx = ds_feat.column_index(name);
            if (idx < 0) throw gwofi::ConfigError("data.exclude names unknown column '" + name + "'");
            ds_feat.schema[static_cast<size_t>(idx)].role = gwofi::ColumnRole::Ignore;
        }
    }
    auto split = gwofi::stratified_holdout(y, cfg.split.holdout_fraction, cfg.seed);
    auto base = gwofi::binarize_features(ds_feat, cfg.encoding, &split.train);

    std::set<std::string> drop(cfg.exclude.begin(), cfg.exclude.end());
    drop.insert(cfg.target);
    auto tx = gwofi::to_transactions(ds, drop);
    auto frequent = gwofi::mine_frequent(tx, cfg.mining);
    std::vector<gwofi::Itemset> keep;
    for (const auto& itemset : frequent)
        if (static_cast<int>(itemset.items.size()) >= cfg.augment_min_len) keep.push_back(itemset);
    auto am = gwofi::augment_features(base, cfg.augment ? keep : std::vector<gwofi::Itemset>{}, tx,
                                      cfg.target);

    // the saved model names the columns it consumes; find them again
    std::vector<int> cols;
    std::vector<bool> is_binary_sel;
    for (const auto& name : model.feature_names) {
        int found = -1;
        for (size_t j = 0; j < am.names.size(); ++j)
            if (am.names[j] == name) { found = static_cast<int>(j); break; }
        if (found < 0)
            throw gwofi::DataError("model feature '" + name + "' is absent from this dataset");
        cols.push_back(found);
        is_binary_sel.push_back(am.is_binary[static_cast<size_t>(found)]);
    }

    Eigen::MatrixXd X_te(static_cast<Eigen::Index>(split.test.size()),
                         static_cast<Eigen::Index>(cols.size()));
    std::vector<int> y_te;
    for (size_t i = 0; i < split.test.size(); ++i) {
        y_te.push_back(y[static_cast<size_t>(split.test[i])]);
        for (size_t j = 0; j < cols.size(); ++j)
            X_te(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                am.X(split.test[i], cols[j]);
    }
    auto scores = gwofi::score_matrix(model, X_te);
    std::vector<int> preds(scores.size());
    for (size_t i = 0; i < scores.size(); ++i) preds[i] = scores[i] >= 0.0 ? 1 : 0;

    gwofi::MetricsReport rep;
    rep.counts = gwofi::confusion(y_te, preds);
    rep.metrics = gwofi::metrics_from_confusion(rep.counts);
    rep.auroc_value = gwofi::auroc(y_te, scores);

    std::cout << "method\tphase\tselected\taccuracy_pct\tsensitivity\tspecificity\tauroc\n";
    std::cout << gwofi::metrics_row(gwofi::to_string(model.kind), "holdout",
                                    static_cast<long long>(cols.size()), rep)
              << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"frequent-itemset mining with grey-wolf feature selection"};
    app.require_subcommand(1);

    CommonArgs mine_args, rules_args, train_args, run_args, report_args;

    auto* mine = app.add_subcommand("mine", "mine frequent itemsets to a TSV");
    add_common(mine, mine_args);

    auto* rules = app.add_subcommand("rules", "rank association rules toward a target");
    add_common(rules, rules_args);
    rules->add_option("--mode", rules_args.mode, "multi, single or filtered");

    auto* train = app.add_subcommand("train", "select features, tune and fit a classifier");
    add_common(train, train_args);
    train->add_flag("--no-augment", train_args.no_augment, "skip itemset feature augmentation");

    auto* run = app.add_subcommand("run", "full pipeline: train plus rule reports");
    add_common(run, run_args);
    run->add_flag("--no-augment", run_args.no_augment, "skip itemset feature augmentation");

    auto* report = app.add_subcommand("report", "re-evaluate a saved model on the holdout");
    add_common(report, report_args);

    try {
        app.parse(argc, argv);
        if (mine->parsed()) return cmd_mine(mine_args);
        if (rules->parsed()) return cmd_rules(rules_args);
        if (train->parsed()) return cmd_train(train_args, false);
        if (run->parsed()) return cmd_train(run_args, true);
        if (report->parsed()) return cmd_report(report_args);
        return 1;
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const gwofi::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help() << std::flush;
        return 1;
    } catch (const gwofi::SchemaError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const gwofi::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
