#include "gwofi/apriori.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gwofi/errors.hpp"

namespace gwofi {

static bool contains_sorted(const std::vector<int>& txn, const std::vector<int>& items) {
    size_t i = 0;
    for (int want : items) {
        while (i < txn.size() && txn[i] < want) ++i;
        if (i == txn.size() || txn[i] != want) return false;
        ++i;
    }
    return true;
}

long long itemset_support(const TransactionSet& tx, const std::vector<int>& items) {
    for (size_t i = 0; i < items.size(); ++i) {
        if (items[i] < 0 || items[i] >= static_cast<int>(tx.items.size()))
            throw ConfigError("itemset refers to unknown item id " + std::to_string(items[i]));
        if (i && items[i] <= items[i - 1])
            throw ConfigError("itemset ids must be strictly increasing");
    }
    long long count = 0;
    for (const auto& txn : tx.transactions)
        if (contains_sorted(txn, items)) ++count;
    return count;
}

std::vector<Itemset> mine_frequent(const TransactionSet& tx, const MiningConfig& cfg) {
    if (!(cfg.min_support > 0.0) || cfg.min_support > 1.0)
        throw ConfigError("min_support must be in (0, 1]");
    if (cfg.max_len < 1) throw ConfigError("max_len must be >= 1");
    const long long n = tx.n();
    if (n == 0) return {};

    auto frequent_enough = [&](long long count) {
        return static_cast<double>(count) / static_cast<double>(n) >= cfg.min_support;
    };

    std::vector<Itemset> result;

    // level 1: plain item counts
    std::vector<long long> item_counts(tx.items.size(), 0);
    for (const auto& txn : tx.transactions)
        for (int id : txn) ++item_counts[static_cast<size_t>(id)];
    std::vector<Itemset> level;
    for (size_t id = 0; id < item_counts.size(); ++id)
        if (frequent_enough(item_counts[id]))
            level.push_back(Itemset{{static_cast<int>(id)},
                                    item_counts[id],
                                    static_cast<double>(item_counts[id]) / static_cast<double>(n)});
    result.insert(result.end(), level.begin(), level.end());

    for (int k = 2; k <= cfg.max_len && level.size() >= 2; ++k) {
        // join step: pairs sharing their first k-2 items give the candidates,
        // which come out already sorted because the previous level is sorted
        std::vector<std::vector<int>> candidates;
        for (size_t i = 0; i < level.size(); ++i) {
            for (size_t j = i + 1; j < level.size(); ++j) {
                const auto& a = level[i].items;
                const auto& b = level[j].items;
                if (!std::equal(a.begin(), a.end() - 1, b.begin(), b.end() - 1)) break;
                std::vector<int> cand(a);
                cand.push_back(b.back());

                // prune: every (k-1)-subset must itself be frequent
                bool ok = true;
                std::vector<int> sub(cand.size() - 1);
                for (size_t drop = 0; ok && drop + 2 < cand.size(); ++drop) {
                    size_t w = 0;
                    for (size_t q = 0; q < cand.size(); ++q)
                        if (q != drop) sub[w++] = cand[q];
                    ok = std::binary_search(level.begin(), level.end(), sub,
                                            [](const auto& x, const auto& y) {
                                                if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Itemset>)
                                                    return x.items < y;
                                                else
                                                    return x < y.items;
                                            });
                }
                if (ok) candidates.push_back(std::move(cand));
            }
        }
        if (candidates.empty()) break;

        std::vector<long long> counts(candidates.size(), 0);
        for (const auto& txn : tx.transactions) {
            if (static_cast<int>(txn.size()) < k) continue;
            for (size_t c = 0; c < candidates.size(); ++c)
                if (contains_sorted(txn, candidates[c])) ++counts[c];
        }
        std::vector<Itemset> next;
        for (size_t c = 0; c < candidates.size(); ++c)
            if (frequent_enough(counts[c]))
                next.push_back(Itemset{std::move(candidates[c]),
                                       counts[c],
                                       static_cast<double>(counts[c]) / static_cast<double>(n)});
        result.insert(result.end(), next.begin(), next.end());
        level = std::move(next);
    }
    return result;
}

RuleMeasures compute_measures(long long n_a, long long n_b, long long n_ab, long long n) {
    if (n <= 0) throw ConfigError("measure counts need n > 0");
    if (n_a <= 0 || n_b <= 0) throw ConfigError("measure counts need n_a > 0 and n_b > 0");
    if (n_ab < 0 || n_ab > n_a || n_ab > n_b || n_a > n || n_b > n || n_ab < n_a + n_b - n)
        throw ConfigError("inconsistent measure counts");
    RuleMeasures m;
    double a = static_cast<double>(n_a);
    double b = static_cast<double>(n_b);
    double ab = static_cast<double>(n_ab);
    m.support = ab / static_cast<double>(n);
    double conf_ab = ab / a;
    double conf_ba = ab / b;
    m.confidence = conf_ab;
    m.max_confidence = std::max(conf_ab, conf_ba);
    m.kulczynski = 0.5 * (conf_ab + conf_ba);
    m.cosine = ab / std::sqrt(a * b);
    m.imbalance_ratio = std::abs(a - b) / (a + b - ab);
    return m;
}

std::vector<Rule> generate_rules(const TransactionSet& tx, const std::vector<Itemset>& frequent,
                                 int consequent_item) {
    std::map<std::vector<int>, long long> count_of;
    for (const auto& is : frequent) count_of[is.items] = is.count;
    const long long n = tx.n();
    if (n == 0) throw DataError("cannot derive rules from an empty transaction set");

    auto lookup = [&](const std::vector<int>& items) {
        auto it = count_of.find(items);
        if (it != count_of.end()) return it->second;
        // a subset of a frequent itemset is frequent, so this only happens
        // for an inconsistent table; fall back to an exact count
        return itemset_support(tx, items);
    };

    std::vector<Rule> rules;
    for (const auto& is : frequent) {
        if (is.items.size() < 2) continue;
        for (size_t drop = 0; drop < is.items.size(); ++drop) {
            int b = is.items[drop];
            if (consequent_item >= 0 && b != consequent_item) continue;
            Rule rule;
            rule.consequent = b;
            rule.antecedent.reserve(is.items.size() - 1);
            for (size_t q = 0; q < is.items.size(); ++q)
                if (q != drop) rule.antecedent.push_back(is.items[q]);
            rule.count = is.count;
            long long n_a = lookup(rule.antecedent);
            long long n_b = lookup({b});
            rule.m = compute_measures(n_a, n_b, is.count, n);
            rules.push_back(std::move(rule));
        }
    }
    return rules;
}

Measure measure_from_name(const std::string& name) {
    if (name == "support") return Measure::Support;
    if (name == "confidence") return Measure::Confidence;
    if (name == "max_confidence") return Measure::MaxConfidence;
    if (name == "kulczynski") return Measure::Kulczynski;
    if (name == "cosine") return Measure::Cosine;
    if (name == "imbalance_ratio") return Measure::ImbalanceRatio;
    throw ConfigError("unknown measure '" + name + "'");
}

std::string to_string(Measure m) {
    switch (m) {
        case Measure::Support: return "support";
        case Measure::Confidence: return "confidence";
        case Measure::MaxConfidence: return "max_confidence";
        case Measure::Kulczynski: return "kulczynski";
        case Measure::Cosine: return "cosine";
        case Measure::ImbalanceRatio: return "imbalance_ratio";
    }
    return "?";
}

double measure_value(const RuleMeasures& m, Measure key) {
    switch (key) {
        case Measure::Support: return m.support;
        case Measure::Confidence: return m.confidence;
        case Measure::MaxConfidence: return m.max_confidence;
        case Measure::Kulczynski: return m.kulczynski;
        case Measure::Cosine: return m.cosine;
        case Measure::ImbalanceRatio: return m.imbalance_ratio;
    }
    return 0.0;
}

void rank_rules(std::vector<Rule>& rules, Measure key) {
    std::stable_sort(rules.begin(), rules.end(), [&](const Rule& x, const Rule& y) {
        double vx = measure_value(x.m, key);
        double vy = measure_value(y.m, key);
        if (vx != vy) return vx > vy;
        if (x.count != y.count) return x.count > y.count;
        if (x.antecedent != y.antecedent) return x.antecedent < y.antecedent;
        return x.consequent < y.consequent;
    });
}

} // namespace gwofi
