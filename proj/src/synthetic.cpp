#include "gwofi/synthetic.hpp"

#include <cmath>
#include <cstdio>

#include "gwofi/errors.hpp"
#include "gwofi/rng.hpp"

namespace gwofi::synth {

static std::string feature_name(const char* prefix, int i, int width) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%0*d", prefix, width, i);
    return buf;
}

static ColumnSchema binary_feature(const std::string& name) {
    return ColumnSchema{name, ColumnKind::Binary, ColumnRole::Feature, false};
}

static Cell coin(SplitMix& rng, double p) {
    return Cell{rng.uniform01() < p ? std::string("yes") : std::string("no")};
}

static bool is_yes(const Cell& c) { return label(c) == "yes"; }

Dataset conjunction_dataset(int n, int n_features, double flip_prob, double feature_p,
                            std::uint64_t seed) {
    if (n < 1 || n_features < 2) throw ConfigError("conjunction dataset needs n >= 1, features >= 2");
    Dataset ds;
    for (int j = 1; j <= n_features; ++j) ds.schema.push_back(binary_feature(feature_name("f", j, 2)));
    ds.schema.push_back(ColumnSchema{"outcome", ColumnKind::Binary, ColumnRole::Target, false});
    ds.provenance.source_path = "synth:conjunction";

    SplitMix rng(mix_indices(seed, 0x636f6e6a));
    for (int r = 0; r < n; ++r) {
        Record rec;
        rec.values.reserve(ds.schema.size());
        for (int j = 0; j < n_features; ++j) rec.values.push_back(coin(rng, feature_p));
        bool y = is_yes(rec.values[0]) && is_yes(rec.values[1]);
        if (rng.uniform01() < flip_prob) y = !y;
        rec.values.push_back(Cell{y ? std::string("yes") : std::string("no")});
        ds.records.push_back(std::move(rec));
    }
    return ds;
}

Dataset planted_mask_dataset(int n, int n_noise, double flip_prob, std::uint64_t seed) {
    if (n < 1 || n_noise < 0) throw ConfigError("planted mask dataset needs n >= 1, noise >= 0");
    Dataset ds;
    for (int j = 1; j <= 3; ++j) ds.schema.push_back(binary_feature(feature_name("g", j, 1)));
    for (int j = 1; j <= n_noise; ++j) ds.schema.push_back(binary_feature(feature_name("n", j, 2)));
    ds.schema.push_back(ColumnSchema{"outcome", ColumnKind::Binary, ColumnRole::Target, false});
    ds.provenance.source_path = "synth:planted_mask";

    SplitMix rng(mix_indices(seed, 0x6d61736b));
    for (int r = 0; r < n; ++r) {
        Record rec;
        rec.values.reserve(ds.schema.size());
        int votes = 0;
        for (int j = 0; j < 3; ++j) {
            rec.values.push_back(coin(rng, 0.5));
            votes += is_yes(rec.values.back()) ? 1 : 0;
        }
        for (int j = 0; j < n_noise; ++j) rec.values.push_back(coin(rng, 0.5));
        bool y = votes >= 2;
        if (rng.uniform01() < flip_prob) y = !y;
        rec.values.push_back(Cell{y ? std::string("yes") : std::string("no")});
        ds.records.push_back(std::move(rec));
    }
    return ds;
}

Dataset implication_dataset(int n, int n_noise, double p_rule, std::uint64_t seed) {
    if (n < 1 || n_noise < 0) throw ConfigError("implication dataset needs n >= 1, noise >= 0");
    Dataset ds;
    ds.schema.push_back(binary_feature("marker"));
    for (int j = 1; j <= n_noise; ++j) ds.schema.push_back(binary_feature(feature_name("x", j, 2)));
    ds.schema.push_back(ColumnSchema{"outcome", ColumnKind::Binary, ColumnRole::Target, false});
    ds.provenance.source_path = "synth:implication";

    SplitMix rng(mix_indices(seed, 0x72756c65));
    for (int r = 0; r < n; ++r) {
        Record rec;
        rec.values.reserve(ds.schema.size());
        Cell marker = coin(rng, p_rule);
        rec.values.push_back(marker);
        for (int j = 0; j < n_noise; ++j) rec.values.push_back(coin(rng, 0.5));
        rec.values.push_back(Cell{is_yes(marker) ? std::string("yes") : std::string("no")});
        ds.records.push_back(std::move(rec));
    }
    return ds;
}

Dataset random_mixed(int n, std::uint64_t seed) {
    if (n < 1) throw ConfigError("mixed dataset needs n >= 1");
    Dataset ds;
    ds.schema = {
        ColumnSchema{"Age", ColumnKind::Numeric, ColumnRole::Feature, false},
        ColumnSchema{"Score", ColumnKind::Numeric, ColumnRole::Feature, false},
        ColumnSchema{"Gender", ColumnKind::Categorical, ColumnRole::Feature, false},
        ColumnSchema{"Note", ColumnKind::Categorical, ColumnRole::Feature, false},
        ColumnSchema{"Treated", ColumnKind::Binary, ColumnRole::Feature, false},
        ColumnSchema{"outcome", ColumnKind::Binary, ColumnRole::Target, false},
    };
    ds.provenance.source_path = "synth:mixed";

    // labels that poke at the quoting rules on purpose
    const char* notes[] = {"plain", "with,comma", "with \"quotes\"", "tab\tinside", "ok"};

    SplitMix rng(mix_indices(seed, 0x6d697865));
    for (int r = 0; r < n; ++r) {
        Record rec;
        auto maybe_missing = [&](Cell c) {
            return rng.uniform01() < 0.1 ? Cell{} : c;
        };
        rec.values.push_back(maybe_missing(Cell{20.0 + 60.0 * rng.uniform01()}));
        rec.values.push_back(maybe_missing(Cell{std::floor(1000.0 * rng.uniform01()) / 7.0}));
        rec.values.push_back(maybe_missing(Cell{rng.uniform01() < 0.5 ? std::string("male")
                                                                      : std::string("female")}));
        rec.values.push_back(maybe_missing(Cell{std::string(notes[rng.below(5)])}));
        rec.values.push_back(maybe_missing(coin(rng, 0.4)));
        rec.values.push_back(coin(rng, 0.3));  // the target never goes missing
        ds.records.push_back(std::move(rec));
    }
    return ds;
}

} // namespace gwofi::synth
