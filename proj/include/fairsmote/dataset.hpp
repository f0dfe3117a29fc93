#pragma once

// Tabular dataset with a typed column schema, a binary class column and one
// or more binary protected attributes. Values are fully materialized at
// ingestion: rows containing missing cells are dropped, class and protected
// columns are reduced to {0,1} via explicit raw-value mappings, and
// preprocess() bins or min-max normalizes the numeric columns.
//
// Datasets are immutable values: every operation returns a new Dataset.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "fairsmote/csv.hpp"
#include "fairsmote/errors.hpp"
#include "fairsmote/rng.hpp"

namespace fairsmote {

enum class FeatureKind { Boolean, Categorical, Numeric };

inline const char* to_string(FeatureKind k) {
    switch (k) {
        case FeatureKind::Boolean: return "boolean";
        case FeatureKind::Categorical: return "categorical";
        case FeatureKind::Numeric: return "numeric";
    }
    return "?";
}

struct ColumnSchema {
    std::string name;
    FeatureKind kind = FeatureKind::Numeric;
};

// Binary protected attribute: privileged raw value maps to 1, unprivileged to 0.
struct ProtectedSpec {
    std::string column;
    std::string privileged;
    std::string unprivileged;
};

// Binary class label: favorable raw value maps to 1, unfavorable to 0.
struct ClassSpec {
    std::string column;
    std::string favorable;
    std::string unfavorable;
};

// Column storage. Numeric cells live in `num`; Boolean and Categorical cells
// are int32 codes in `cat` (Boolean codes are 0/1, Categorical codes index
// into `vocab`).
struct Column {
    std::string name;
    FeatureKind kind = FeatureKind::Numeric;
    std::vector<double> num;
    std::vector<std::int32_t> cat;
    std::vector<std::string> vocab;

    bool discrete() const { return kind != FeatureKind::Numeric; }

    bool operator==(const Column&) const = default;
};

using Cell = std::variant<double, std::int32_t>;
using RowValues = std::vector<Cell>;

// One cell of the (class x protected attributes) cross product. attr_bits is
// aligned with the attribute list the key was built from.
struct SubgroupKey {
    std::uint8_t class_bit = 0;
    std::vector<std::uint8_t> attr_bits;

    // (class_bit << A) | attr bits, attr 0 in the highest attribute position.
    std::uint32_t encode() const {
        std::uint32_t v = class_bit;
        for (std::uint8_t b : attr_bits) v = (v << 1) | b;
        return v;
    }

    std::uint64_t hash() const {
        return mix64((std::uint64_t{attr_bits.size()} << 32) | encode());
    }

    bool operator==(const SubgroupKey&) const = default;
    auto operator<=>(const SubgroupKey& other) const { return encode() <=> other.encode(); }
};

class Dataset {
public:
    Dataset() = default;

    Dataset(std::vector<Column> columns, ClassSpec class_spec,
            std::vector<ProtectedSpec> protected_specs)
        : columns_(std::move(columns)),
          class_spec_(std::move(class_spec)),
          protected_specs_(std::move(protected_specs)) {
        if (protected_specs_.empty()) throw ConfigError("dataset: at least one protected attribute required");
        n_rows_ = columns_.empty() ? 0 : cells_in(columns_.front());
        for (const Column& c : columns_) {
            if (cells_in(c) != n_rows_) throw DataError("dataset: ragged columns");
        }
        class_col_ = require_column(class_spec_.column);
        for (const auto& p : protected_specs_) require_column(p.column);
    }

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_cols() const { return columns_.size(); }
    const std::vector<Column>& columns() const { return columns_; }
    const Column& column(std::size_t i) const { return columns_[i]; }
    const ClassSpec& class_spec() const { return class_spec_; }
    const std::vector<ProtectedSpec>& protected_specs() const { return protected_specs_; }
    std::size_t class_column() const { return class_col_; }

    std::optional<std::size_t> find_column(const std::string& name) const {
        for (std::size_t i = 0; i < columns_.size(); ++i)
            if (columns_[i].name == name) return i;
        return std::nullopt;
    }

    std::size_t require_column(const std::string& name) const {
        auto i = find_column(name);
        if (!i) throw DataError("dataset: no such column: " + name);
        return *i;
    }

    // Protected attribute lookup; errors on names that were never declared.
    const ProtectedSpec& protected_spec(const std::string& column) const {
        for (const auto& p : protected_specs_)
            if (p.column == column) return p;
        throw DataError("dataset: protected attribute not declared: " + column);
    }

    std::uint8_t class_bit(std::size_t row) const {
        return static_cast<std::uint8_t>(columns_[class_col_].cat[row]);
    }

    std::uint8_t attr_bit(std::size_t col, std::size_t row) const {
        return static_cast<std::uint8_t>(columns_[col].cat[row]);
    }

    Cell cell(std::size_t col, std::size_t row) const {
        const Column& c = columns_[col];
        if (c.kind == FeatureKind::Numeric) return c.num[row];
        return c.cat[row];
    }

    std::string cell_text(std::size_t col, std::size_t row) const {
        const Column& c = columns_[col];
        switch (c.kind) {
            case FeatureKind::Numeric: return csv::format_double(c.num[row]);
            case FeatureKind::Boolean: return c.cat[row] ? "1" : "0";
            case FeatureKind::Categorical: return c.vocab[static_cast<std::size_t>(c.cat[row])];
        }
        return {};
    }

    // New dataset with the given rows, in the given order.
    Dataset select(std::span<const std::size_t> rows) const {
        std::vector<Column> out;
        out.reserve(columns_.size());
        for (const Column& c : columns_) {
            Column nc{c.name, c.kind, {}, {}, c.vocab};
            if (c.kind == FeatureKind::Numeric) {
                nc.num.reserve(rows.size());
                for (std::size_t r : rows) nc.num.push_back(c.num[r]);
            } else {
                nc.cat.reserve(rows.size());
                for (std::size_t r : rows) nc.cat.push_back(c.cat[r]);
            }
            out.push_back(std::move(nc));
        }
        return Dataset(std::move(out), class_spec_, protected_specs_);
    }

    // New dataset with synthesized rows appended after the original rows.
    Dataset with_appended_rows(const std::vector<RowValues>& rows) const {
        std::vector<Column> out = columns_;
        for (const RowValues& row : rows) {
            if (row.size() != columns_.size()) throw DataError("dataset: appended row arity mismatch");
            for (std::size_t c = 0; c < out.size(); ++c) {
                if (out[c].kind == FeatureKind::Numeric)
                    out[c].num.push_back(std::get<double>(row[c]));
                else
                    out[c].cat.push_back(std::get<std::int32_t>(row[c]));
            }
        }
        return Dataset(std::move(out), class_spec_, protected_specs_);
    }

    RowValues row_values(std::size_t row) const {
        RowValues v;
        v.reserve(columns_.size());
        for (std::size_t c = 0; c < columns_.size(); ++c) v.push_back(cell(c, row));
        return v;
    }

    // True once every numeric cell sits in [0,1] (the post-preprocess state
    // samplers and learners rely on).
    bool is_normalized() const {
        for (const Column& c : columns_) {
            if (c.kind != FeatureKind::Numeric) continue;
            for (double v : c.num)
                if (!(v >= 0.0 && v <= 1.0)) return false;
        }
        return true;
    }

    bool operator==(const Dataset& other) const {
        return columns_ == other.columns_ && n_rows_ == other.n_rows_ &&
               class_spec_.column == other.class_spec_.column &&
               class_spec_.favorable == other.class_spec_.favorable &&
               class_spec_.unfavorable == other.class_spec_.unfavorable;
    }

private:
    static std::size_t cells_in(const Column& c) {
        return c.kind == FeatureKind::Numeric ? c.num.size() : c.cat.size();
    }

    std::vector<Column> columns_;
    ClassSpec class_spec_;
    std::vector<ProtectedSpec> protected_specs_;
    std::size_t n_rows_ = 0;
    std::size_t class_col_ = 0;
};

// ---------------------------------------------------------------------------
// Ingestion

struct IngestSpec {
    std::vector<ColumnSchema> columns;  // declared columns; header columns not listed here are ignored
    ClassSpec class_spec;
    std::vector<ProtectedSpec> protected_specs;
    std::vector<std::string> missing_values = {"?"};  // empty string is always missing
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

inline bool parse_bool_token(const std::string& raw, std::int32_t& out) {
    std::string t = raw;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "1" || t == "true" || t == "yes") { out = 1; return true; }
    if (t == "0" || t == "false" || t == "no") { out = 0; return true; }
    return false;
}

inline bool parse_number(const std::string& raw, double& out) {
    const char* begin = raw.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + raw.size() && !raw.empty() && std::isfinite(out);
}

}  // namespace detail

inline Dataset ingest_rows(const std::vector<csv::Row>& rows, const IngestSpec& spec) {
    if (rows.empty()) throw DataError("ingest: empty csv (missing header)");
    if (spec.columns.empty()) throw ConfigError("ingest: no columns declared");
    if (spec.protected_specs.empty()) throw ConfigError("ingest: no protected attributes declared");

    const csv::Row& header = rows.front();
    std::unordered_map<std::string, std::size_t> header_pos;
    for (std::size_t i = 0; i < header.size(); ++i) header_pos[detail::trim(header[i])] = i;

    auto declared = [&](const std::string& name) {
        return std::any_of(spec.columns.begin(), spec.columns.end(),
                           [&](const ColumnSchema& c) { return c.name == name; });
    };
    if (!declared(spec.class_spec.column))
        throw ConfigError("ingest: class column not declared in schema: " + spec.class_spec.column);
    if (spec.class_spec.favorable == spec.class_spec.unfavorable)
        throw ConfigError("ingest: class favorable and unfavorable values must differ");
    for (const auto& p : spec.protected_specs) {
        if (!declared(p.column))
            throw ConfigError("ingest: protected column not declared in schema: " + p.column);
        if (p.privileged == p.unprivileged)
            throw ConfigError("ingest: privileged and unprivileged values must differ for " + p.column);
    }

    struct ColPlan {
        ColumnSchema schema;
        std::size_t csv_index;
        const ProtectedSpec* prot = nullptr;
        bool is_class = false;
    };
    std::vector<ColPlan> plans;
    plans.reserve(spec.columns.size());
    for (const ColumnSchema& cs : spec.columns) {
        auto it = header_pos.find(cs.name);
        if (it == header_pos.end()) throw DataError("ingest: declared column missing from header: " + cs.name);
        ColPlan plan{cs, it->second, nullptr, cs.name == spec.class_spec.column};
        for (const auto& p : spec.protected_specs)
            if (p.column == cs.name) plan.prot = &p;
        if (plan.is_class || plan.prot) plan.schema.kind = FeatureKind::Boolean;
        plans.push_back(plan);
    }

    auto is_missing = [&](const std::string& v) {
        if (v.empty()) return true;
        return std::find(spec.missing_values.begin(), spec.missing_values.end(), v) !=
               spec.missing_values.end();
    };

    std::vector<Column> cols;
    cols.reserve(plans.size());
    std::vector<std::unordered_map<std::string, std::int32_t>> interners(plans.size());
    for (const ColPlan& p : plans) cols.push_back(Column{p.schema.name, p.schema.kind, {}, {}, {}});

    std::vector<std::string> cells(plans.size());
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const csv::Row& row = rows[r];
        bool missing = false;
        for (std::size_t c = 0; c < plans.size(); ++c) {
            if (plans[c].csv_index >= row.size())
                throw DataError("ingest: row " + std::to_string(r + 1) + " has too few fields");
            cells[c] = detail::trim(row[plans[c].csv_index]);
            if (is_missing(cells[c])) missing = true;
        }
        if (missing) continue;

        for (std::size_t c = 0; c < plans.size(); ++c) {
            const ColPlan& plan = plans[c];
            const std::string& raw = cells[c];
            Column& col = cols[c];
            if (plan.is_class) {
                if (raw == spec.class_spec.favorable) col.cat.push_back(1);
                else if (raw == spec.class_spec.unfavorable) col.cat.push_back(0);
                else
                    throw DataError("ingest: class column '" + plan.schema.name +
                                    "' value '" + raw + "' not covered by the favorable/unfavorable mapping");
            } else if (plan.prot) {
                if (raw == plan.prot->privileged) col.cat.push_back(1);
                else if (raw == plan.prot->unprivileged) col.cat.push_back(0);
                else
                    throw DataError("ingest: protected column '" + plan.schema.name +
                                    "' value '" + raw + "' not covered by the privileged/unprivileged mapping");
            } else {
                switch (plan.schema.kind) {
                    case FeatureKind::Boolean: {
                        std::int32_t b;
                        if (!detail::parse_bool_token(raw, b))
                            throw DataError("ingest: boolean column '" + plan.schema.name +
                                            "' has non-boolean value '" + raw + "'");
                        col.cat.push_back(b);
                        break;
                    }
                    case FeatureKind::Numeric: {
                        double v;
                        if (!detail::parse_number(raw, v))
                            throw DataError("ingest: numeric column '" + plan.schema.name +
                                            "' has non-numeric value '" + raw + "'");
                        col.num.push_back(v);
                        break;
                    }
                    case FeatureKind::Categorical: {
                        auto& interner = interners[c];
                        auto [it, inserted] = interner.emplace(raw, static_cast<std::int32_t>(col.vocab.size()));
                        if (inserted) col.vocab.push_back(raw);
                        col.cat.push_back(it->second);
                        break;
                    }
                }
            }
        }
    }

    if (cols.empty() || (cols.front().num.empty() && cols.front().cat.empty()))
        throw DataError("ingest: no rows survived after dropping missing values");

    return Dataset(std::move(cols), spec.class_spec, spec.protected_specs);
}

inline Dataset ingest_csv(const std::string& path, const IngestSpec& spec) {
    return ingest_rows(csv::read_file(path), spec);
}

// ---------------------------------------------------------------------------
// Preprocessing

// Threshold binning for one numeric column: value lands in bin
// #(thresholds <= value), so thresholds [25] with labels [young, old] puts
// 24.9 in "young" and 25 in "old".
struct BinRule {
    std::string column;
    std::vector<double> thresholds;
    std::vector<std::string> labels;
};

inline Dataset preprocess(const Dataset& ds, std::span<const BinRule> rules = {}) {
    std::vector<Column> cols = ds.columns();

    for (const BinRule& rule : rules) {
        if (rule.labels.size() != rule.thresholds.size() + 1)
            throw ConfigError("preprocess: rule on '" + rule.column + "' needs one more label than thresholds");
        if (!std::is_sorted(rule.thresholds.begin(), rule.thresholds.end()))
            throw ConfigError("preprocess: thresholds for '" + rule.column + "' must be ascending");
        auto idx = ds.find_column(rule.column);
        if (!idx) throw ConfigError("preprocess: binning rule references unknown column: " + rule.column);
        Column& col = cols[*idx];
        if (col.kind == FeatureKind::Categorical && col.vocab == rule.labels) continue;  // already applied
        if (col.kind != FeatureKind::Numeric)
            throw ConfigError("preprocess: binning rule on non-numeric column: " + rule.column);

        Column binned{col.name, FeatureKind::Categorical, {}, {}, rule.labels};
        binned.cat.reserve(col.num.size());
        for (double v : col.num) {
            auto it = std::upper_bound(rule.thresholds.begin(), rule.thresholds.end(), v);
            binned.cat.push_back(static_cast<std::int32_t>(it - rule.thresholds.begin()));
        }
        col = std::move(binned);
    }

    for (Column& col : cols) {
        if (col.kind != FeatureKind::Numeric || col.num.empty()) continue;
        auto [mn, mx] = std::minmax_element(col.num.begin(), col.num.end());
        const double lo = *mn, hi = *mx;
        if (lo == hi) {
            // Constant column carries no information; map to 0 everywhere.
            std::fill(col.num.begin(), col.num.end(), 0.0);
        } else {
            const double range = hi - lo;
            for (double& v : col.num) v = (v - lo) / range;
        }
    }

    return Dataset(std::move(cols), ds.class_spec(), ds.protected_specs());
}

// ---------------------------------------------------------------------------
// Subgroups

// Row indices per (class x attrs) subgroup. Only keys with at least one row
// appear.
inline std::map<SubgroupKey, std::vector<std::size_t>> subgroup_rows(
    const Dataset& ds, std::span<const std::string> attrs) {
    if (attrs.empty()) throw DataError("subgroups: attribute list is empty");
    std::vector<std::size_t> attr_cols;
    attr_cols.reserve(attrs.size());
    for (const std::string& a : attrs) {
        ds.protected_spec(a);  // must be declared
        attr_cols.push_back(ds.require_column(a));
    }
    std::map<SubgroupKey, std::vector<std::size_t>> groups;
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        SubgroupKey key;
        key.class_bit = ds.class_bit(r);
        key.attr_bits.reserve(attr_cols.size());
        for (std::size_t c : attr_cols) key.attr_bits.push_back(ds.attr_bit(c, r));
        groups[key].push_back(r);
    }
    return groups;
}

inline std::map<SubgroupKey, std::size_t> subgroup_counts(const Dataset& ds,
                                                          std::span<const std::string> attrs) {
    std::map<SubgroupKey, std::size_t> counts;
    for (const auto& [key, rows] : subgroup_rows(ds, attrs)) counts[key] = rows.size();
    return counts;
}

// ---------------------------------------------------------------------------
// Cross-validation

struct CvSplit {
    Dataset train;
    Dataset test;
};

// Index-level fold assignment: shuffled by seed, chunked into `folds` test
// folds that partition [0, n). Train/test indices come back in ascending
// row order.
inline std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> split_cv_indices(
    std::size_t n, std::size_t folds, std::uint64_t seed) {
    if (folds < 2) throw DataError("split_cv: need at least 2 folds");
    if (n < folds) throw DataError("split_cv: fewer rows than folds");

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng = make_rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);

    std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> out;
    out.reserve(folds);
    const std::size_t base = n / folds;
    const std::size_t extra = n % folds;
    std::size_t start = 0;
    for (std::size_t f = 0; f < folds; ++f) {
        const std::size_t len = base + (f < extra ? 1 : 0);
        std::vector<std::size_t> test(perm.begin() + start, perm.begin() + start + len);
        std::sort(test.begin(), test.end());
        std::vector<std::size_t> train;
        train.reserve(n - len);
        std::size_t t = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (t < test.size() && test[t] == i) { ++t; continue; }
            train.push_back(i);
        }
        out.emplace_back(std::move(train), std::move(test));
        start += len;
    }
    return out;
}

inline std::vector<CvSplit> split_cv(const Dataset& ds, std::size_t folds, std::uint64_t seed) {
    std::vector<CvSplit> splits;
    for (auto& [train_idx, test_idx] : split_cv_indices(ds.n_rows(), folds, seed))
        splits.push_back(CvSplit{ds.select(train_idx), ds.select(test_idx)});
    return splits;
}

// ---------------------------------------------------------------------------
// CSV export of a (possibly repaired) dataset.

inline std::vector<csv::Row> to_csv_rows(const Dataset& ds) {
    std::vector<csv::Row> rows;
    rows.reserve(ds.n_rows() + 1);
    csv::Row header;
    for (const Column& c : ds.columns()) header.push_back(c.name);
    rows.push_back(std::move(header));
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        csv::Row row;
        row.reserve(ds.n_cols());
        for (std::size_t c = 0; c < ds.n_cols(); ++c) row.push_back(ds.cell_text(c, r));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace fairsmote
