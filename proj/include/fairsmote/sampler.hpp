#pragma once

// Training-data balancers.
//
//   fair_smote  - oversamples every (class x protected attributes) subgroup
//                 up to the largest subgroup's size using neighbor-guided
//                 mutation, so the repaired data is balanced on class and
//                 protected attributes jointly.
//   smote       - classic synthetic minority oversampling; balances the two
//                 classes only and ignores protected attributes.
//   ros / rus   - random over-/under-sampling to class parity.
//
// All samplers are deterministic given their seed. Oversamplers keep every
// original row unchanged and append synthetic rows after them.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fairsmote/dataset.hpp"
#include "fairsmote/errors.hpp"
#include "fairsmote/neighbors.hpp"
#include "fairsmote/rng.hpp"

namespace fairsmote {

struct FairSmoteConfig {
    double cr = 0.8;              // crossover frequency: chance a column mutates
    double f = 0.8;               // mutation amount for numeric columns
    std::size_t k_neighbors = 2;  // neighbors consulted per parent
    std::uint64_t seed = 0;
    // One crossover draw per synthetic row instead of one per column, so a
    // row either mutates everywhere or keeps the parent verbatim.
    bool row_level_crossover = false;

    void validate() const {
        if (!(cr >= 0.0 && cr <= 1.0)) throw ConfigError("sampler: cr must be in [0,1]");
        if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("sampler: f must be in [0,1]");
        if (k_neighbors < 2) throw ConfigError("sampler: k_neighbors must be >= 2");
    }
};

// Mutation kernels, per column kind.

inline double synth_numeric(double parent, double c1, double c2, double f) {
    return std::clamp(parent + f * (c1 - c2), 0.0, 1.0);
}

inline std::int32_t pick_of_three(Rng& rng, std::int32_t p, std::int32_t c1, std::int32_t c2) {
    const std::int32_t options[3] = {p, c1, c2};
    return options[uniform_index(rng, 3)];
}

namespace detail {

inline std::pair<std::size_t, std::size_t> class_counts(const Dataset& ds) {
    std::size_t pos = 0;
    for (std::size_t r = 0; r < ds.n_rows(); ++r) pos += ds.class_bit(r);
    return {ds.n_rows() - pos, pos};  // {class 0, class 1}
}

}  // namespace detail

// Fair-SMOTE: every subgroup over (class x attrs) is oversampled to the
// maximum subgroup count. Synthetic rows are built from a random parent and
// its two nearest subgroup neighbors; the class and balanced protected bits
// are kept verbatim.
inline Dataset fair_smote(const Dataset& train, std::span<const std::string> attrs,
                          const FairSmoteConfig& cfg) {
    cfg.validate();
    if (attrs.empty()) throw DataError("fair_smote: attribute list is empty");
    if (!train.is_normalized())
        throw DataError("fair_smote: dataset has numeric values outside [0,1]; preprocess first");

    auto groups = subgroup_rows(train, attrs);
    const std::size_t expected_groups = std::size_t{1} << (1 + attrs.size());
    if (groups.size() != expected_groups)
        throw DataError("fair_smote: " + std::to_string(expected_groups - groups.size()) +
                        " subgroup(s) have no rows; cannot synthesize from an empty subgroup");

    std::size_t max_count = 0;
    for (const auto& [key, rows] : groups) {
        if (rows.size() < cfg.k_neighbors + 1)
            throw DataError("fair_smote: subgroup with " + std::to_string(rows.size()) +
                            " rows is smaller than k_neighbors + 1");
        max_count = std::max(max_count, rows.size());
    }

    std::vector<std::size_t> fixed_cols;  // columns whose value is pinned to the parent's
    fixed_cols.push_back(train.class_column());
    for (const std::string& a : attrs) fixed_cols.push_back(train.require_column(a));

    std::vector<RowValues> synthetic;
    for (const auto& [key, rows] : groups) {
        const std::size_t to_generate = max_count - rows.size();
        if (to_generate == 0) continue;

        Rng rng = make_rng(derive_seed(cfg.seed, key.hash()));
        NeighborIndex knn(train, rows, cfg.k_neighbors);

        for (std::size_t i = 0; i < to_generate; ++i) {
            const std::size_t parent_local = uniform_index(rng, rows.size());
            const auto& nbrs = knn.neighbors_of(parent_local);
            const std::size_t p = rows[parent_local];
            const std::size_t c1 = rows[nbrs[0]];
            const std::size_t c2 = rows[nbrs[1]];

            bool row_mutates = true;
            if (cfg.row_level_crossover) row_mutates = cfg.cr > uniform01(rng);

            RowValues row;
            row.reserve(train.n_cols());
            for (std::size_t c = 0; c < train.n_cols(); ++c) {
                const Column& col = train.column(c);
                if (std::find(fixed_cols.begin(), fixed_cols.end(), c) != fixed_cols.end()) {
                    row.push_back(train.cell(c, p));
                    continue;
                }
                switch (col.kind) {
                    case FeatureKind::Boolean: {
                        const bool mutate = cfg.row_level_crossover ? row_mutates : cfg.cr > uniform01(rng);
                        row.push_back(mutate ? pick_of_three(rng, col.cat[p], col.cat[c1], col.cat[c2])
                                             : col.cat[p]);
                        break;
                    }
                    case FeatureKind::Categorical: {
                        const bool mutate = cfg.row_level_crossover ? row_mutates : true;
                        row.push_back(mutate ? pick_of_three(rng, col.cat[p], col.cat[c1], col.cat[c2])
                                             : col.cat[p]);
                        break;
                    }
                    case FeatureKind::Numeric: {
                        const bool mutate = cfg.row_level_crossover ? row_mutates : cfg.cr > uniform01(rng);
                        row.push_back(mutate ? synth_numeric(col.num[p], col.num[c1], col.num[c2], cfg.f)
                                             : col.num[p]);
                        break;
                    }
                }
            }
            synthetic.push_back(std::move(row));
        }
    }

    return train.with_appended_rows(synthetic);
}

// Classic SMOTE: oversamples the minority class to parity. Numeric cells
// interpolate between a random minority parent X and one of its nearest
// minority neighbors X' as X + rand(0,1) * (X - X'), clamped to [0,1]; other
// cells copy the parent. Protected attributes play no role.
inline Dataset smote(const Dataset& train, const FairSmoteConfig& cfg) {
    cfg.validate();
    if (!train.is_normalized())
        throw DataError("smote: dataset has numeric values outside [0,1]; preprocess first");

    const auto [neg, pos] = detail::class_counts(train);
    if (neg == 0 || pos == 0) throw DataError("smote: single-class dataset");
    if (neg == pos) return train;

    const std::uint8_t minority_bit = pos < neg ? 1 : 0;
    std::vector<std::size_t> minority;
    for (std::size_t r = 0; r < train.n_rows(); ++r)
        if (train.class_bit(r) == minority_bit) minority.push_back(r);
    if (minority.size() < 2) throw DataError("smote: minority class needs at least 2 rows");

    Rng rng = make_rng(cfg.seed);
    NeighborIndex knn(train, minority, cfg.k_neighbors);
    const std::size_t to_generate = std::max(neg, pos) - minority.size();

    std::vector<RowValues> synthetic;
    synthetic.reserve(to_generate);
    for (std::size_t i = 0; i < to_generate; ++i) {
        const std::size_t parent_local = uniform_index(rng, minority.size());
        const auto& nbrs = knn.neighbors_of(parent_local);
        const std::size_t p = minority[parent_local];
        const std::size_t q = minority[nbrs[uniform_index(rng, nbrs.size())]];
        const double amount = uniform01(rng);  // one draw per row

        RowValues row;
        row.reserve(train.n_cols());
        for (std::size_t c = 0; c < train.n_cols(); ++c) {
            const Column& col = train.column(c);
            if (col.kind == FeatureKind::Numeric)
                row.push_back(std::clamp(col.num[p] + amount * (col.num[p] - col.num[q]), 0.0, 1.0));
            else
                row.push_back(col.cat[p]);
        }
        synthetic.push_back(std::move(row));
    }

    return train.with_appended_rows(synthetic);
}

// Random oversampling: duplicates random minority rows until class parity.
inline Dataset ros(const Dataset& train, std::uint64_t seed) {
    const auto [neg, pos] = detail::class_counts(train);
    if (neg == 0 || pos == 0) throw DataError("ros: single-class dataset");
    if (neg == pos) return train;

    const std::uint8_t minority_bit = pos < neg ? 1 : 0;
    std::vector<std::size_t> minority;
    for (std::size_t r = 0; r < train.n_rows(); ++r)
        if (train.class_bit(r) == minority_bit) minority.push_back(r);

    Rng rng = make_rng(seed);
    std::vector<RowValues> extra;
    extra.reserve(std::max(neg, pos) - minority.size());
    for (std::size_t i = minority.size(); i < std::max(neg, pos); ++i)
        extra.push_back(train.row_values(minority[uniform_index(rng, minority.size())]));
    return train.with_appended_rows(extra);
}

// Random undersampling: drops random majority rows down to class parity.
// Surviving rows keep their original order.
inline Dataset rus(const Dataset& train, std::uint64_t seed) {
    const auto [neg, pos] = detail::class_counts(train);
    if (neg == 0 || pos == 0) throw DataError("rus: single-class dataset");
    if (neg == pos) return train;

    const std::uint8_t majority_bit = pos > neg ? 1 : 0;
    std::vector<std::size_t> majority;
    for (std::size_t r = 0; r < train.n_rows(); ++r)
        if (train.class_bit(r) == majority_bit) majority.push_back(r);

    Rng rng = make_rng(seed);
    std::shuffle(majority.begin(), majority.end(), rng);
    majority.resize(std::min(neg, pos));  // survivors of the majority class

    std::vector<std::size_t> keep;
    keep.reserve(2 * std::min(neg, pos));
    std::sort(majority.begin(), majority.end());
    std::size_t m = 0;
    for (std::size_t r = 0; r < train.n_rows(); ++r) {
        if (train.class_bit(r) == majority_bit) {
            if (m < majority.size() && majority[m] == r) { keep.push_back(r); ++m; }
        } else {
            keep.push_back(r);
        }
    }
    return train.select(keep);
}

}  // namespace fairsmote
