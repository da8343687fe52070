#include "gwofi/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "gwofi/errors.hpp"

namespace gwofi {

std::string to_string(ColumnKind k) {
    switch (k) {
        case ColumnKind::Numeric: return "numeric";
        case ColumnKind::Categorical: return "categorical";
        case ColumnKind::Binary: return "binary";
    }
    return "?";
}

std::string to_string(ColumnRole r) {
    switch (r) {
        case ColumnRole::Feature: return "feature";
        case ColumnRole::Target: return "target";
        case ColumnRole::Ignore: return "ignore";
    }
    return "?";
}

int Dataset::column_index(const std::string& name) const {
    for (size_t i = 0; i < schema.size(); ++i)
        if (schema[i].name == name) return static_cast<int>(i);
    return -1;
}

const ColumnSchema& Dataset::column(const std::string& name) const {
    int i = column_index(name);
    if (i < 0) throw SchemaError("no column named '" + name + "'");
    return schema[i];
}

bool operator==(const Record& a, const Record& b) { return a.values == b.values; }

static bool schema_equal(const ColumnSchema& a, const ColumnSchema& b) {
    return a.name == b.name && a.kind == b.kind && a.role == b.role &&
           a.sex_conditional == b.sex_conditional;
}

bool operator==(const Dataset& a, const Dataset& b) {
    // provenance intentionally excluded: a round-tripped copy is still equal
    if (a.schema.size() != b.schema.size()) return false;
    for (size_t i = 0; i < a.schema.size(); ++i)
        if (!schema_equal(a.schema[i], b.schema[i])) return false;
    return a.records == b.records;
}

// ---- small string helpers ----

static std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

static std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool parse_double_strict(const std::string& s, double& out) {
    const char* b = s.data();
    const char* e = b + s.size();
    if (b != e && *b == '+') ++b;  // from_chars rejects a leading plus
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e && b != e;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back = 0.0;
        if (parse_double_strict(buf, back) && back == v) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

static std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, tab - start)));
        start = tab + 1;
    }
    return out;
}

// ---- schema files ----

std::vector<ColumnSchema> load_schema(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open schema file '" + path + "'");
    std::vector<ColumnSchema> schema;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto fields = split_tabs(line);
        if (fields.size() < 3 || fields.size() > 4)
            throw SchemaError(path + ":" + std::to_string(lineno) +
                              ": expected 3 or 4 tab-separated fields");
        ColumnSchema col;
        col.name = fields[0];
        if (col.name.empty())
            throw SchemaError(path + ":" + std::to_string(lineno) + ": empty column name");
        std::string kind = lower(fields[1]);
        if (kind == "numeric") col.kind = ColumnKind::Numeric;
        else if (kind == "categorical") col.kind = ColumnKind::Categorical;
        else if (kind == "binary") col.kind = ColumnKind::Binary;
        else throw SchemaError(path + ":" + std::to_string(lineno) + ": unknown kind '" +
                               fields[1] + "'");
        std::string role = lower(fields[2]);
        if (role == "feature") col.role = ColumnRole::Feature;
        else if (role == "target") col.role = ColumnRole::Target;
        else if (role == "ignore") col.role = ColumnRole::Ignore;
        else throw SchemaError(path + ":" + std::to_string(lineno) + ": unknown role '" +
                               fields[2] + "'");
        if (fields.size() == 4 && !fields[3].empty()) {
            if (lower(fields[3]) != "sex_conditional")
                throw SchemaError(path + ":" + std::to_string(lineno) +
                                  ": unexpected flag '" + fields[3] + "'");
            col.sex_conditional = true;
        }
        for (const auto& existing : schema)
            if (existing.name == col.name)
                throw SchemaError(path + ":" + std::to_string(lineno) +
                                  ": duplicate column '" + col.name + "'");
        schema.push_back(std::move(col));
    }
    if (schema.empty()) throw SchemaError("schema file '" + path + "' defines no columns");
    return schema;
}

void save_schema(const std::vector<ColumnSchema>& schema, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write schema file '" + path + "'");
    for (const auto& col : schema) {
        out << col.name << '\t' << to_string(col.kind) << '\t' << to_string(col.role);
        if (col.sex_conditional) out << "\tsex_conditional";
        out << '\n';
    }
}

// ---- binspec files ----

static double parse_bound(const std::string& s, const std::string& where) {
    std::string t = lower(s);
    if (t == "-inf") return -std::numeric_limits<double>::infinity();
    if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
    double v = 0.0;
    if (!parse_double_strict(s, v)) throw SchemaError(where + ": bad bound '" + s + "'");
    return v;
}

std::vector<BinSpec> load_binspecs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open bin file '" + path + "'");
    std::vector<BinSpec> specs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::string where = path + ":" + std::to_string(lineno);
        auto fields = split_tabs(line);
        if (fields.size() != 7)
            throw SchemaError(where + ": expected 7 tab-separated fields, got " +
                              std::to_string(fields.size()));
        Bin bin;
        bin.label = fields[1];
        bin.lower = parse_bound(fields[2], where);
        bin.upper = parse_bound(fields[3], where);
        const std::string& inc = fields[4];
        if (inc == "[)") { bin.lower_inclusive = true; bin.upper_inclusive = false; }
        else if (inc == "[]") { bin.lower_inclusive = true; bin.upper_inclusive = true; }
        else if (inc == "(]") { bin.lower_inclusive = false; bin.upper_inclusive = true; }
        else if (inc == "()") { bin.lower_inclusive = false; bin.upper_inclusive = false; }
        else throw SchemaError(where + ": bad inclusivity '" + inc + "' (use [), [], (], ())");
        if (bin.lower > bin.upper)
            throw SchemaError(where + ": lower bound exceeds upper bound");
        if (fields[5] != "-" && !fields[5].empty()) bin.sex = fields[5];
        const std::string& column = fields[0];
        const std::string& output = fields[6];
        if (column.empty() || output.empty() || bin.label.empty())
            throw SchemaError(where + ": column, label and output_column must be non-empty");
        BinSpec* spec = nullptr;
        for (auto& s : specs)
            if (s.column == column && s.output_column == output) { spec = &s; break; }
        if (!spec) {
            specs.push_back(BinSpec{column, {}, output});
            spec = &specs.back();
        }
        spec->bins.push_back(std::move(bin));
    }
    if (specs.empty()) throw SchemaError("bin file '" + path + "' defines no bins");
    return specs;
}

// ---- CSV ----

static std::vector<std::vector<std::string>> parse_csv(const std::string& text,
                                                       const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    size_t i = 0;
    auto end_field = [&] {
        row.push_back(field_was_quoted ? field : trim(field));
        field.clear();
        field_was_quoted = false;
    };
    auto end_row = [&] {
        end_field();
        if (!(row.size() == 1 && row[0].empty())) rows.push_back(row);  // skip blank lines
        row.clear();
    };
    while (i < text.size()) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') { field += '"'; i += 2; continue; }
                in_quotes = false;
                ++i;
            } else {
                field += c;
                ++i;
            }
        } else if (c == '"' && trim(field).empty() && !field_was_quoted) {
            in_quotes = true;
            field_was_quoted = true;
            field.clear();
            ++i;
        } else if (c == ',') {
            end_field();
            ++i;
        } else if (c == '\n') {
            end_row();
            ++i;
        } else if (c == '\r') {
            ++i;  // swallow; \r\n handled by the \n branch
        } else {
            field += c;
            ++i;
        }
    }
    if (in_quotes) throw DataError(path + ": unterminated quoted field");
    if (!field.empty() || field_was_quoted || !row.empty()) end_row();
    return rows;
}

static bool is_missing_token(const std::string& s) {
    if (s.empty()) return true;
    std::string t = lower(s);
    return t == "na" || t == "nan";
}

Dataset load_table(const std::string& path, const std::vector<ColumnSchema>& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open table '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    auto rows = parse_csv(ss.str(), path);
    if (rows.empty()) throw DataError(path + ": no header row");

    const auto& header = rows[0];
    std::vector<int> source_of(schema.size(), -1);  // schema column -> csv column
    for (size_t s = 0; s < schema.size(); ++s) {
        for (size_t h = 0; h < header.size(); ++h)
            if (header[h] == schema[s].name) { source_of[s] = static_cast<int>(h); break; }
        if (source_of[s] < 0)
            throw SchemaError(path + ": header is missing column '" + schema[s].name + "'");
    }
    for (size_t h = 0; h < header.size(); ++h) {
        bool known = false;
        for (const auto& col : schema)
            if (col.name == header[h]) { known = true; break; }
        if (!known)
            throw SchemaError(path + ": header column '" + header[h] + "' is not in the schema");
    }
    for (size_t h = 0; h < header.size(); ++h)
        for (size_t g = h + 1; g < header.size(); ++g)
            if (header[h] == header[g])
                throw SchemaError(path + ": duplicate header column '" + header[h] + "'");

    Dataset ds;
    ds.schema = schema;
    ds.provenance.source_path = path;
    ds.records.reserve(rows.size() - 1);
    for (size_t r = 1; r < rows.size(); ++r) {
        const auto& cells = rows[r];
        if (cells.size() != header.size())
            throw DataError(path + ": row " + std::to_string(r) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(header.size()));
        Record rec;
        rec.values.resize(schema.size());
        for (size_t s = 0; s < schema.size(); ++s) {
            const std::string& raw = cells[static_cast<size_t>(source_of[s])];
            if (is_missing_token(raw)) continue;  // stays monostate
            if (schema[s].kind == ColumnKind::Numeric) {
                double v = 0.0;
                if (!parse_double_strict(raw, v))
                    throw DataError(path + ": row " + std::to_string(r) + ", column '" +
                                    schema[s].name + "': cannot parse '" + raw +
                                    "' as a number");
                rec.values[s] = v;
            } else {
                rec.values[s] = raw;
            }
        }
        ds.records.push_back(std::move(rec));
    }
    return ds;
}

static std::string csv_quote(const std::string& s) {
    // edge whitespace must survive the reader's trim, so quote it too
    bool padded = !s.empty() && (std::isspace(static_cast<unsigned char>(s.front())) ||
                                 std::isspace(static_cast<unsigned char>(s.back())));
    if (!padded && s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

void save_table(const Dataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write table '" + path + "'");
    for (size_t s = 0; s < ds.schema.size(); ++s) {
        if (s) out << ',';
        out << csv_quote(ds.schema[s].name);
    }
    out << '\n';
    for (const auto& rec : ds.records) {
        for (size_t s = 0; s < ds.schema.size(); ++s) {
            if (s) out << ',';
            const Cell& c = rec.values[s];
            if (is_missing(c)) continue;
            if (std::holds_alternative<double>(c)) out << format_double(numeric(c));
            else out << csv_quote(label(c));
        }
        out << '\n';
    }
}

// ---- imputation ----

Dataset impute_chained(const Dataset& ds, int sweeps, std::uint64_t /*seed*/) {
    if (sweeps < 0) throw ConfigError("imputation sweeps must be >= 0");
    Dataset out = ds;
    const long long n = out.n_rows();
    if (n == 0) return out;

    std::vector<int> numeric_cols;
    for (size_t s = 0; s < out.schema.size(); ++s)
        if (out.schema[s].kind == ColumnKind::Numeric) numeric_cols.push_back(static_cast<int>(s));

    // discrete columns: per-column mode, lexicographically smallest label on ties
    for (size_t s = 0; s < out.schema.size(); ++s) {
        if (out.schema[s].kind == ColumnKind::Numeric) continue;
        std::map<std::string, long long> counts;
        bool any_missing = false;
        for (const auto& rec : out.records) {
            const Cell& c = rec.values[s];
            if (is_missing(c)) any_missing = true;
            else ++counts[label(c)];
        }
        if (!any_missing) continue;
        if (counts.empty())
            throw DataError("column '" + out.schema[s].name +
                            "' has no observed values to impute from");
        std::string mode;
        long long best = -1;
        for (const auto& [lab, cnt] : counts)
            if (cnt > best) { best = cnt; mode = lab; }
        for (auto& rec : out.records)
            if (is_missing(rec.values[s])) rec.values[s] = mode;
    }

    // numeric columns: mean-initialize the gaps, then refine each column by
    // regressing it on the other numeric columns for a few sweeps
    std::vector<std::vector<char>> was_missing(numeric_cols.size());
    std::vector<bool> col_has_gaps(numeric_cols.size(), false);
    for (size_t j = 0; j < numeric_cols.size(); ++j) {
        int s = numeric_cols[j];
        was_missing[j].assign(static_cast<size_t>(n), 0);
        double sum = 0.0;
        long long observed = 0;
        for (long long r = 0; r < n; ++r) {
            const Cell& c = out.records[static_cast<size_t>(r)].values[s];
            if (is_missing(c)) {
                was_missing[j][static_cast<size_t>(r)] = 1;
                col_has_gaps[j] = true;
            } else {
                sum += numeric(c);
                ++observed;
            }
        }
        if (!col_has_gaps[j]) continue;
        if (observed == 0)
            throw DataError("column '" + out.schema[s].name +
                            "' has no observed values to impute from");
        double mean = sum / static_cast<double>(observed);
        for (long long r = 0; r < n; ++r)
            if (was_missing[j][static_cast<size_t>(r)])
                out.records[static_cast<size_t>(r)].values[s] = mean;
    }

    if (numeric_cols.size() < 2) return out;

    for (int sweep = 0; sweep < sweeps; ++sweep) {
        for (size_t j = 0; j < numeric_cols.size(); ++j) {
            if (!col_has_gaps[j]) continue;
            int target = numeric_cols[j];
            long long n_obs = 0;
            for (long long r = 0; r < n; ++r)
                if (!was_missing[j][static_cast<size_t>(r)]) ++n_obs;
            const int p = static_cast<int>(numeric_cols.size());  // others + intercept
            if (n_obs < p) continue;  // too few rows to fit; keep current values
            Eigen::MatrixXd A(n_obs, p);
            Eigen::VectorXd b(n_obs);
            long long row = 0;
            for (long long r = 0; r < n; ++r) {
                if (was_missing[j][static_cast<size_t>(r)]) continue;
                A(row, 0) = 1.0;
                int k = 1;
                for (size_t q = 0; q < numeric_cols.size(); ++q) {
                    if (q == j) continue;
                    A(row, k++) = numeric(out.records[static_cast<size_t>(r)].values[numeric_cols[q]]);
                }
                b(row) = numeric(out.records[static_cast<size_t>(r)].values[target]);
                ++row;
            }
            Eigen::VectorXd coef = A.colPivHouseholderQr().solve(b);
            for (long long r = 0; r < n; ++r) {
                if (!was_missing[j][static_cast<size_t>(r)]) continue;
                double pred = coef(0);
                int k = 1;
                for (size_t q = 0; q < numeric_cols.size(); ++q) {
                    if (q == j) continue;
                    pred += coef(k++) * numeric(out.records[static_cast<size_t>(r)].values[numeric_cols[q]]);
                }
                if (!std::isfinite(pred))
                    throw NumericError("imputation produced a non-finite value in column '" +
                                       out.schema[target].name + "'");
                out.records[static_cast<size_t>(r)].values[target] = pred;
            }
        }
    }
    return out;
}

// ---- discretization ----

static bool bin_contains(const Bin& bin, double v) {
    bool lo = bin.lower_inclusive ? v >= bin.lower : v > bin.lower;
    bool hi = bin.upper_inclusive ? v <= bin.upper : v < bin.upper;
    return lo && hi;
}

Dataset discretize(const Dataset& ds, const std::vector<BinSpec>& specs,
                   const std::string& gender_column) {
    Dataset out = ds;
    for (const auto& spec : specs) {
        int src = out.column_index(spec.column);
        if (src < 0) throw SchemaError("bin spec refers to unknown column '" + spec.column + "'");
        if (out.schema[static_cast<size_t>(src)].kind != ColumnKind::Numeric)
            throw SchemaError("bin spec column '" + spec.column + "' is not numeric");
        if (out.column_index(spec.output_column) >= 0)
            throw SchemaError("bin output column '" + spec.output_column + "' already exists");

        bool needs_sex = false;
        for (const auto& bin : spec.bins)
            if (bin.sex) needs_sex = true;
        int gender = -1;
        if (needs_sex) {
            gender = out.column_index(gender_column);
            if (gender < 0)
                throw SchemaError("bins for '" + spec.column + "' are sex conditional but column '" +
                                  gender_column + "' is absent");
        }

        ColumnSchema derived;
        derived.name = spec.output_column;
        derived.kind = ColumnKind::Categorical;
        derived.role = ColumnRole::Feature;
        out.schema.push_back(derived);

        for (size_t r = 0; r < out.records.size(); ++r) {
            auto& rec = out.records[r];
            const Cell& c = rec.values[static_cast<size_t>(src)];
            if (is_missing(c)) {
                rec.values.emplace_back();  // missing propagates
                continue;
            }
            double v = numeric(c);
            std::string sex;
            if (needs_sex) {
                const Cell& g = rec.values[static_cast<size_t>(gender)];
                if (!is_missing(g)) sex = label(g);
            }
            const Bin* hit = nullptr;
            for (const auto& bin : spec.bins) {
                if (bin.sex) {
                    if (sex.empty())
                        throw DataError("row " + std::to_string(r + 1) + ": column '" +
                                        spec.column + "' needs '" + gender_column +
                                        "' to pick a bin but it is missing");
                    if (lower(*bin.sex) != lower(sex)) continue;
                }
                if (bin_contains(bin, v)) { hit = &bin; break; }
            }
            if (!hit)
                throw DataError("row " + std::to_string(r + 1) + ": value " + format_double(v) +
                                " of column '" + spec.column + "' falls in no bin");
            rec.values.emplace_back(hit->label);
        }
        out.schema[static_cast<size_t>(src)].role = ColumnRole::Ignore;
    }
    return out;
}

// ---- transactions ----

TransactionSet to_transactions(const Dataset& ds, const std::set<std::string>& exclude) {
    std::vector<std::vector<std::string>> token_rows(ds.records.size());
    for (size_t s = 0; s < ds.schema.size(); ++s) {
        const auto& col = ds.schema[s];
        if (col.role == ColumnRole::Ignore) continue;
        if (col.kind == ColumnKind::Numeric) continue;
        if (exclude.count(col.name)) continue;
        for (size_t r = 0; r < ds.records.size(); ++r) {
            const Cell& c = ds.records[r].values[s];
            if (is_missing(c)) continue;
            token_rows[r].push_back(col.name + "=" + label(c));
        }
    }
    return TransactionSet::from_tokens(token_rows);
}

// ---- classifier matrix ----

static std::vector<std::string> sorted_levels(const Dataset& ds, size_t s) {
    std::set<std::string> levels;
    for (const auto& rec : ds.records) {
        const Cell& c = rec.values[s];
        if (!is_missing(c)) levels.insert(label(c));
    }
    return {levels.begin(), levels.end()};
}

FeatureMatrix binarize_features(const Dataset& ds, EncodingMode mode,
                                const std::vector<int>* train_rows) {
    const long long n = ds.n_rows();
    if (train_rows)
        for (int r : *train_rows)
            if (r < 0 || r >= n) throw ConfigError("train row index out of range");

    struct Col {
        std::string name;
        bool binary;
        std::vector<double> raw;
    };
    std::vector<Col> cols;

    for (size_t s = 0; s < ds.schema.size(); ++s) {
        const auto& col = ds.schema[s];
        if (col.role != ColumnRole::Feature) continue;
        auto check_complete = [&](const Cell& c, size_t r) {
            if (is_missing(c))
                throw DataError("column '" + col.name + "' has a missing value at row " +
                                std::to_string(r + 1) + "; impute before encoding");
        };
        if (col.kind == ColumnKind::Numeric) {
            Col out{col.name, false, std::vector<double>(static_cast<size_t>(n))};
            for (size_t r = 0; r < ds.records.size(); ++r) {
                const Cell& c = ds.records[r].values[s];
                check_complete(c, r);
                out.raw[r] = numeric(c);
            }
            cols.push_back(std::move(out));
        } else if (col.kind == ColumnKind::Binary) {
            auto levels = sorted_levels(ds, s);
            if (levels.size() > 2)
                throw DataError("binary column '" + col.name + "' has " +
                                std::to_string(levels.size()) + " distinct values");
            Col out{col.name, true, std::vector<double>(static_cast<size_t>(n))};
            for (size_t r = 0; r < ds.records.size(); ++r) {
                const Cell& c = ds.records[r].values[s];
                check_complete(c, r);
                out.raw[r] = (levels.size() == 2 && label(c) == levels[1]) ? 1.0 : 0.0;
            }
            cols.push_back(std::move(out));
        } else if (mode == EncodingMode::OneHot) {
            auto levels = sorted_levels(ds, s);
            for (const auto& lev : levels) {
                Col out{col.name + "=" + lev, true, std::vector<double>(static_cast<size_t>(n))};
                for (size_t r = 0; r < ds.records.size(); ++r) {
                    const Cell& c = ds.records[r].values[s];
                    check_complete(c, r);
                    out.raw[r] = (label(c) == lev) ? 1.0 : 0.0;
                }
                cols.push_back(std::move(out));
            }
        } else {
            auto levels = sorted_levels(ds, s);
            Col out{col.name, false, std::vector<double>(static_cast<size_t>(n))};
            for (size_t r = 0; r < ds.records.size(); ++r) {
                const Cell& c = ds.records[r].values[s];
                check_complete(c, r);
                auto it = std::lower_bound(levels.begin(), levels.end(), label(c));
                out.raw[r] = static_cast<double>(it - levels.begin());
            }
            cols.push_back(std::move(out));
        }
    }

    FeatureMatrix fm;
    fm.X.resize(n, static_cast<Eigen::Index>(cols.size()));
    fm.names.reserve(cols.size());
    fm.is_binary.reserve(cols.size());
    for (size_t j = 0; j < cols.size(); ++j) {
        const auto& col = cols[j];
        fm.names.push_back(col.name);
        fm.is_binary.push_back(col.binary);
        if (col.binary) {
            for (long long r = 0; r < n; ++r) fm.X(r, static_cast<Eigen::Index>(j)) = col.raw[static_cast<size_t>(r)];
            continue;
        }
        // standardize with statistics from the training rows only, when given
        double sum = 0.0, sumsq = 0.0;
        long long m = 0;
        auto accumulate = [&](long long r) {
            double v = col.raw[static_cast<size_t>(r)];
            sum += v;
            sumsq += v * v;
            ++m;
        };
        if (train_rows) {
            for (int r : *train_rows) accumulate(r);
        } else {
            for (long long r = 0; r < n; ++r) accumulate(r);
        }
        if (m == 0) throw ConfigError("cannot standardize '" + col.name + "' with no training rows");
        double mean = sum / static_cast<double>(m);
        double var = sumsq / static_cast<double>(m) - mean * mean;
        double sd = var > 0 ? std::sqrt(var) : 0.0;
        for (long long r = 0; r < n; ++r) {
            double v = col.raw[static_cast<size_t>(r)];
            fm.X(r, static_cast<Eigen::Index>(j)) = sd < 1e-12 ? 0.0 : (v - mean) / sd;
        }
    }
    return fm;
}

std::vector<int> binary_target(const Dataset& ds, const std::string& column) {
    int s = ds.column_index(column);
    if (s < 0) throw SchemaError("no column named '" + column + "'");
    if (ds.schema[static_cast<size_t>(s)].kind == ColumnKind::Numeric)
        throw SchemaError("target column '" + column + "' must be binary or categorical");
    auto levels = sorted_levels(ds, static_cast<size_t>(s));
    if (levels.size() != 2)
        throw DataError("target column '" + column + "' has " + std::to_string(levels.size()) +
                        " distinct values, need exactly 2");
    std::vector<int> y;
    y.reserve(ds.records.size());
    for (size_t r = 0; r < ds.records.size(); ++r) {
        const Cell& c = ds.records[r].values[static_cast<size_t>(s)];
        if (is_missing(c))
            throw DataError("target column '" + column + "' is missing at row " +
                            std::to_string(r + 1));
        y.push_back(label(c) == levels[1] ? 1 : 0);
    }
    return y;
}

} // namespace gwofi
