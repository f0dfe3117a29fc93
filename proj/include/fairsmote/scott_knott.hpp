#pragma once

// Scott-Knott ranking: treatments are sorted by mean and recursively split at
// the point maximizing the between-group expected mean difference
//
//     E[delta] = |m|/|l| * (E[m]-E[l])^2 + |n|/|l| * (E[n]-E[l])^2
//
// where l is the pooled range and m, n the two sides of the split. A split is
// kept only when a pooled bootstrap says the observed E[delta] is unlikely
// under the null AND the effect size clears a Cohen's-d floor; otherwise the
// whole range shares one rank. Ranks are contiguous from 1 (best).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "fairsmote/errors.hpp"
#include "fairsmote/rng.hpp"

namespace fairsmote {

enum class Direction { HigherBetter, LowerBetter };

struct ResultGroup {
    std::string label;
    std::vector<double> observations;
};

struct SignificanceConfig {
    std::size_t resamples = 512;
    double percentile = 0.95;     // null quantile the observed E[delta] must beat
    double cohen_d_floor = 0.2;   // below this the split is noise regardless of the bootstrap
    std::uint64_t seed = 1;

    void validate() const {
        if (resamples == 0) throw ConfigError("scott_knott: resamples must be positive");
        if (percentile <= 0.0 || percentile >= 1.0)
            throw ConfigError("scott_knott: percentile must be in (0,1)");
        if (cohen_d_floor < 0.0) throw ConfigError("scott_knott: cohen_d_floor must be >= 0");
    }
};

struct RankedGroup {
    std::string label;
    double mean = 0.0;
    int rank = 0;
};

struct RankTable {
    std::vector<RankedGroup> entries;  // best first

    int rank_of(const std::string& label) const {
        for (const RankedGroup& g : entries)
            if (g.label == label) return g.rank;
        throw DataError("scott_knott: unknown treatment: " + label);
    }
    int max_rank() const {
        int m = 0;
        for (const RankedGroup& g : entries) m = std::max(m, g.rank);
        return m;
    }
};

inline double mean_of(std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

// E[delta] for the split l = m ++ n.
inline double expected_delta(std::span<const double> m, std::span<const double> n) {
    const double nm = static_cast<double>(m.size());
    const double nn = static_cast<double>(n.size());
    const double nl = nm + nn;
    const double em = mean_of(m);
    const double en = mean_of(n);
    const double el = (nm * em + nn * en) / nl;
    return nm / nl * (em - el) * (em - el) + nn / nl * (en - el) * (en - el);
}

// Cohen's d with pooled standard deviation. Zero spread maps to 0 when the
// means agree and +inf when they differ.
inline double cohen_d(std::span<const double> a, std::span<const double> b) {
    const double ma = mean_of(a);
    const double mb = mean_of(b);
    auto ss = [](std::span<const double> xs, double m) {
        double s = 0.0;
        for (double x : xs) s += (x - m) * (x - m);
        return s;
    };
    const double dof = static_cast<double>(a.size() + b.size()) - 2.0;
    const double pooled_var = dof > 0.0 ? (ss(a, ma) + ss(b, mb)) / dof : 0.0;
    if (pooled_var <= 0.0)
        return ma == mb ? 0.0 : std::numeric_limits<double>::infinity();
    return (ma - mb) / std::sqrt(pooled_var);
}

namespace detail {

struct SkGroup {
    std::string label;
    std::vector<double> obs;
    double mean = 0.0;
};

// Best contiguous split of sorted[lo,hi) by E[delta]; first maximum wins.
// Returns the group index the right half starts at, and the achieved value.
inline std::pair<std::size_t, double> best_split(const std::vector<SkGroup>& sorted, std::size_t lo,
                                                 std::size_t hi) {
    std::vector<double> pooled;
    for (std::size_t g = lo; g < hi; ++g)
        pooled.insert(pooled.end(), sorted[g].obs.begin(), sorted[g].obs.end());
    std::size_t best = lo + 1;
    double best_value = -1.0;
    std::size_t m_count = 0;
    for (std::size_t s = lo + 1; s < hi; ++s) {
        m_count += sorted[s - 1].obs.size();
        std::span<const double> all(pooled);
        const double value = expected_delta(all.subspan(0, m_count), all.subspan(m_count));
        if (value > best_value) {
            best_value = value;
            best = s;
        }
    }
    return {best, best_value};
}

inline bool split_significant(const std::vector<SkGroup>& sorted, std::size_t lo, std::size_t hi,
                              std::size_t split, double observed, const SignificanceConfig& cfg) {
    std::vector<double> m_obs, n_obs;
    for (std::size_t g = lo; g < split; ++g)
        m_obs.insert(m_obs.end(), sorted[g].obs.begin(), sorted[g].obs.end());
    for (std::size_t g = split; g < hi; ++g)
        n_obs.insert(n_obs.end(), sorted[g].obs.begin(), sorted[g].obs.end());

    if (std::abs(cohen_d(m_obs, n_obs)) < cfg.cohen_d_floor) return false;

    std::vector<double> pooled = m_obs;
    pooled.insert(pooled.end(), n_obs.begin(), n_obs.end());
    Rng rng = make_rng(derive_seed(cfg.seed, {static_cast<std::uint64_t>(lo), static_cast<std::uint64_t>(hi)}));
    std::vector<double> null_values(cfg.resamples);
    std::vector<double> m_star(m_obs.size()), n_star(n_obs.size());
    for (std::size_t r = 0; r < cfg.resamples; ++r) {
        for (double& v : m_star) v = pooled[uniform_index(rng, pooled.size())];
        for (double& v : n_star) v = pooled[uniform_index(rng, pooled.size())];
        null_values[r] = expected_delta(m_star, n_star);
    }
    std::sort(null_values.begin(), null_values.end());
    std::size_t idx = static_cast<std::size_t>(cfg.percentile * static_cast<double>(cfg.resamples));
    idx = std::min(idx, cfg.resamples - 1);
    return observed > null_values[idx];
}

inline void rank_range(const std::vector<SkGroup>& sorted, std::size_t lo, std::size_t hi,
                       const SignificanceConfig& cfg, int& next_rank, std::vector<int>& ranks) {
    if (hi - lo >= 2) {
        auto [split, observed] = best_split(sorted, lo, hi);
        if (observed > 0.0 && split_significant(sorted, lo, hi, split, observed, cfg)) {
            rank_range(sorted, lo, split, cfg, next_rank, ranks);
            rank_range(sorted, split, hi, cfg, next_rank, ranks);
            return;
        }
    }
    const int rank = next_rank++;
    for (std::size_t g = lo; g < hi; ++g) ranks[g] = rank;
}

}  // namespace detail

inline RankTable scott_knott(const std::vector<ResultGroup>& groups, Direction direction,
                             const SignificanceConfig& cfg = {}) {
    cfg.validate();
    if (groups.empty()) throw DataError("scott_knott: no groups to rank");
    std::vector<detail::SkGroup> sorted;
    sorted.reserve(groups.size());
    for (const ResultGroup& g : groups) {
        if (g.observations.empty())
            throw DataError("scott_knott: group has no observations: " + g.label);
        for (double x : g.observations)
            if (!std::isfinite(x))
                throw DataError("scott_knott: non-finite observation in group " + g.label);
        sorted.push_back({g.label, g.observations, mean_of(g.observations)});
    }
    // Best mean first; label breaks ties so input order never matters.
    std::sort(sorted.begin(), sorted.end(), [&](const auto& a, const auto& b) {
        const double am = direction == Direction::HigherBetter ? -a.mean : a.mean;
        const double bm = direction == Direction::HigherBetter ? -b.mean : b.mean;
        return std::tie(am, a.label) < std::tie(bm, b.label);
    });

    std::vector<int> ranks(sorted.size(), 0);
    int next_rank = 1;
    detail::rank_range(sorted, 0, sorted.size(), cfg, next_rank, ranks);

    RankTable table;
    table.entries.reserve(sorted.size());
    for (std::size_t g = 0; g < sorted.size(); ++g)
        table.entries.push_back({sorted[g].label, sorted[g].mean, ranks[g]});
    return table;
}

struct WinTieLoss {
    std::string label;
    int wins = 0;
    int ties = 0;
    int losses = 0;
};

// Pairwise comparison by rank (rank 1 beats rank 2, equal ranks tie).
inline std::vector<WinTieLoss> win_tie_loss(const RankTable& table) {
    std::vector<WinTieLoss> out;
    out.reserve(table.entries.size());
    for (const RankedGroup& a : table.entries) {
        WinTieLoss w{a.label, 0, 0, 0};
        for (const RankedGroup& b : table.entries) {
            if (&a == &b) continue;
            if (a.rank < b.rank)
                ++w.wins;
            else if (a.rank == b.rank)
                ++w.ties;
            else
                ++w.losses;
        }
        out.push_back(w);
    }
    return out;
}

}  // namespace fairsmote
