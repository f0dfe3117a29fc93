#pragma once

// Brute-force k-nearest-neighbor lookup over a subset of dataset rows under
// a mixed-type distance: Euclidean over the numeric columns plus Hamming
// (0/1 mismatch) over boolean and categorical columns, summed.
//
// Queries are members of the index; a row is never its own neighbor. Ties
// break toward the lower original row index. Results are memoized per row,
// which matters when the same parent is drawn many times during sampling.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "fairsmote/dataset.hpp"
#include "fairsmote/errors.hpp"

namespace fairsmote {

class NeighborIndex {
public:
    // `rows` are indices into `ds`; `k` is the neighbor count served by
    // neighbors_of(). The class column participates like any other column
    // (within one subgroup it is constant anyway).
    NeighborIndex(const Dataset& ds, std::vector<std::size_t> rows, std::size_t k)
        : rows_(std::move(rows)), k_(std::min(k, rows_.empty() ? 0 : rows_.size() - 1)) {
        if (rows_.size() < 2) throw DataError("neighbor index: need at least 2 rows");
        for (const Column& c : ds.columns()) {
            if (c.kind == FeatureKind::Numeric) {
                for (std::size_t r : rows_) num_.push_back(c.num[r]);
            } else {
                for (std::size_t r : rows_) cat_.push_back(c.cat[r]);
            }
        }
        n_num_ = num_.size() / rows_.size();
        n_cat_ = cat_.size() / rows_.size();
        cache_.resize(rows_.size());
    }

    std::size_t size() const { return rows_.size(); }
    std::size_t k() const { return k_; }
    std::size_t original_index(std::size_t local) const { return rows_[local]; }

    double distance(std::size_t a, std::size_t b) const {
        double sq = 0.0;
        for (std::size_t c = 0; c < n_num_; ++c) {
            const double d = num_[c * rows_.size() + a] - num_[c * rows_.size() + b];
            sq += d * d;
        }
        double ham = 0.0;
        for (std::size_t c = 0; c < n_cat_; ++c)
            ham += cat_[c * rows_.size() + a] != cat_[c * rows_.size() + b] ? 1.0 : 0.0;
        return std::sqrt(sq) + ham;
    }

    // The k nearest members to member `local`, as local positions, in
    // nondecreasing distance order. `local` itself is excluded.
    const std::vector<std::size_t>& neighbors_of(std::size_t local) const {
        std::vector<std::size_t>& cached = cache_[local];
        if (!cached.empty()) return cached;

        const std::size_t n = rows_.size();
        std::vector<std::pair<double, std::size_t>> cand;
        cand.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == local) continue;
            cand.emplace_back(distance(local, j), j);
        }
        auto closer = [&](const auto& x, const auto& y) {
            if (x.first != y.first) return x.first < y.first;
            return rows_[x.second] < rows_[y.second];
        };
        const std::size_t take = std::min(k_, cand.size());
        std::partial_sort(cand.begin(), cand.begin() + take, cand.end(), closer);
        cached.reserve(take);
        for (std::size_t i = 0; i < take; ++i) cached.push_back(cand[i].second);
        return cached;
    }

private:
    std::vector<std::size_t> rows_;
    std::vector<double> num_;        // column-major over index rows
    std::vector<std::int32_t> cat_;  // column-major over index rows
    std::size_t n_num_ = 0;
    std::size_t n_cat_ = 0;
    std::size_t k_ = 0;
    mutable std::vector<std::vector<std::size_t>> cache_;
};

}  // namespace fairsmote
