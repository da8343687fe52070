#ifndef GWOFI_APRIORI_HPP
#define GWOFI_APRIORI_HPP

#include <string>
#include <vector>

#include "gwofi/transactions.hpp"

namespace gwofi {

/// Item ids sorted ascending; `support` is count / |transactions|.
struct Itemset {
    std::vector<int> items;
    long long count = 0;
    double support = 0.0;
};

struct MiningConfig {
    double min_support = 0.005;
    int max_len = 4;
};

/// Exact number of transactions containing every item of `items`.
long long itemset_support(const TransactionSet& tx, const std::vector<int>& items);

/// Levelwise search with downward-closure pruning. Result is ordered by
/// itemset size, then by item ids; every reported count is exact.
std::vector<Itemset> mine_frequent(const TransactionSet& tx, const MiningConfig& cfg);

/// The six interestingness measures, all functions of the four counts alone.
struct RuleMeasures {
    double support = 0.0;
    double confidence = 0.0;
    double max_confidence = 0.0;
    double kulczynski = 0.0;
    double cosine = 0.0;
    double imbalance_ratio = 0.0;
};

/// n_a = |A|, n_b = |B|, n_ab = |A and B|, n = total transactions.
RuleMeasures compute_measures(long long n_a, long long n_b, long long n_ab, long long n);

struct Rule {
    std::vector<int> antecedent;   // sorted item ids, never empty
    int consequent = -1;           // single item id
    long long count = 0;           // joint count
    RuleMeasures m;
};

/// Splits every frequent itemset of size >= 2 into (rest -> item) rules.
/// When `consequent_item` >= 0 only rules with that consequent are kept.
/// All counts are read from the frequent table (closed under subsets).
std::vector<Rule> generate_rules(const TransactionSet& tx, const std::vector<Itemset>& frequent,
                                 int consequent_item = -1);

enum class Measure { Support, Confidence, MaxConfidence, Kulczynski, Cosine, ImbalanceRatio };

Measure measure_from_name(const std::string& name);
std::string to_string(Measure m);
double measure_value(const RuleMeasures& m, Measure key);

/// Stable ranking: descending by the chosen measure, ties broken by higher
/// joint count, then by antecedent item ids.
void rank_rules(std::vector<Rule>& rules, Measure key);

} // namespace gwofi

#endif
