#ifndef GWOFI_TRANSACTIONS_HPP
#define GWOFI_TRANSACTIONS_HPP

#include <algorithm>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gwofi {

/// One row per source record, each reduced to the set of `column=value`
/// tokens it contains. Items are interned: `items` is the sorted token
/// universe and transactions hold item ids, so id order equals
/// lexicographic token order.
struct TransactionSet {
    std::vector<std::string> items;              // sorted universe, id = index
    std::vector<std::vector<int>> transactions;  // sorted ids per row

    long long n() const { return static_cast<long long>(transactions.size()); }

    int item_id(std::string_view token) const {
        auto it = index_.find(std::string(token));
        return it == index_.end() ? -1 : it->second;
    }

    const std::string& token(int id) const { return items[static_cast<std::size_t>(id)]; }

    static TransactionSet from_tokens(const std::vector<std::vector<std::string>>& rows) {
        TransactionSet t;
        for (const auto& row : rows)
            for (const auto& tok : row) t.index_.emplace(tok, 0);
        t.items.reserve(t.index_.size());
        for (const auto& [tok, _] : t.index_) t.items.push_back(tok);
        std::sort(t.items.begin(), t.items.end());
        for (std::size_t i = 0; i < t.items.size(); ++i) t.index_[t.items[i]] = static_cast<int>(i);
        t.transactions.reserve(rows.size());
        for (const auto& row : rows) {
            std::vector<int> ids;
            ids.reserve(row.size());
            for (const auto& tok : row) ids.push_back(t.index_.at(tok));
            std::sort(ids.begin(), ids.end());
            ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
            t.transactions.push_back(std::move(ids));
        }
        return t;
    }

private:
    std::unordered_map<std::string, int> index_;
};

} // namespace gwofi

#endif
