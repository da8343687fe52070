#ifndef GWOFI_DATASET_HPP
#define GWOFI_DATASET_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "gwofi/transactions.hpp"

namespace gwofi {

enum class ColumnKind { Numeric, Categorical, Binary };
enum class ColumnRole { Feature, Target, Ignore };

std::string to_string(ColumnKind k);
std::string to_string(ColumnRole r);

struct ColumnSchema {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
    ColumnRole role = ColumnRole::Feature;
    bool sex_conditional = false;  // bin thresholds depend on the gender column
};

/// A cell is numeric, a category label, or missing.
using Cell = std::variant<std::monostate, double, std::string>;

inline bool is_missing(const Cell& c) { return std::holds_alternative<std::monostate>(c); }
inline double numeric(const Cell& c) { return std::get<double>(c); }
inline const std::string& label(const Cell& c) { return std::get<std::string>(c); }

/// Cell values in schema column order.
struct Record {
    std::vector<Cell> values;
};

struct Provenance {
    std::string source_path;
};

/// Immutable once constructed; all transformations return a new Dataset.
struct Dataset {
    std::vector<ColumnSchema> schema;
    std::vector<Record> records;
    Provenance provenance;

    int column_index(const std::string& name) const;
    const ColumnSchema& column(const std::string& name) const;
    long long n_rows() const { return static_cast<long long>(records.size()); }
};

bool operator==(const Record& a, const Record& b);
bool operator==(const Dataset& a, const Dataset& b);

/// One labeled interval of a numeric binning rule. Bounds may be +-inf;
/// `sex` restricts the bin to records with that gender value.
struct Bin {
    std::string label;
    double lower = 0.0;
    double upper = 0.0;
    bool lower_inclusive = true;   // default policy: [lower, upper)
    bool upper_inclusive = false;
    std::optional<std::string> sex;
};

struct BinSpec {
    std::string column;
    std::vector<Bin> bins;
    std::string output_column;
};

// ---- schema / binspec / table files ----

/// Tab-separated lines: name, kind, role, optional "sex_conditional".
std::vector<ColumnSchema> load_schema(const std::string& path);
void save_schema(const std::vector<ColumnSchema>& schema, const std::string& path);

/// Tab-separated lines: column, label, low, high, inclusivity ("[)", "[]",
/// "(]", "()"), optional sex ("male"/"female"/"-"), output_column.
std::vector<BinSpec> load_binspecs(const std::string& path);

/// CSV with a single header row; header must match the schema's column set
/// (order-insensitive). Empty cells, "NA" and "NaN" (case-insensitive) parse
/// as missing.
Dataset load_table(const std::string& path, const std::vector<ColumnSchema>& schema);
void save_table(const Dataset& ds, const std::string& path);

// ---- preprocessing operations ----

/// Simplified chained-equations imputation: numeric gaps are filled by
/// iterated per-column least-squares regressions on the other numeric
/// columns (mean-initialized, `sweeps` passes); categorical/binary gaps take
/// the per-column mode. Deterministic; returns a complete dataset.
Dataset impute_chained(const Dataset& ds, int sweeps, std::uint64_t seed);

/// Appends one categorical column per spec and demotes each source numeric
/// column to role=ignore. A value that falls in no bin is an error.
Dataset discretize(const Dataset& ds, const std::vector<BinSpec>& specs,
                   const std::string& gender_column = "Gender");

/// Tokenizes every categorical/binary non-ignored column (target included
/// unless listed in `exclude`) as `column=value`. Numeric columns never
/// produce tokens. |transactions| == |records|.
TransactionSet to_transactions(const Dataset& ds, const std::set<std::string>& exclude = {});

enum class EncodingMode { OneHot, LabelInteger };

/// Classifier-ready matrix: one column per binary feature (yes=1/no=0), one
/// indicator column per categorical level (or one integer-coded column in
/// LabelInteger mode), numeric feature columns standardized. When
/// `train_rows` is given the standardization statistics come from those rows
/// only.
struct FeatureMatrix {
    Eigen::MatrixXd X;
    std::vector<std::string> names;
    std::vector<bool> is_binary;  // indicator columns vs standardized numerics

    int cols() const { return static_cast<int>(X.cols()); }
    long long rows() const { return X.rows(); }
};

FeatureMatrix binarize_features(const Dataset& ds, EncodingMode mode = EncodingMode::OneHot,
                                const std::vector<int>* train_rows = nullptr);

/// 0/1 labels for a two-valued column; with levels {a,b} sorted
/// lexicographically, b maps to 1 (so yes=1 against no).
std::vector<int> binary_target(const Dataset& ds, const std::string& column);

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

/// Locale-independent full-string parse; false when `s` is not a number.
bool parse_double_strict(const std::string& s, double& out);

} // namespace gwofi

#endif
