#pragma once

// Benchmark harness: repeated k-fold cross-validation over a set of
// training-data pipelines. Per repeat, one CV split is shared by every
// pipeline so test folds stay comparable; samplers touch the TRAIN fold only
// and test folds are scored exactly as ingested. Aggregation: per-fold metric
// -> mean over a repeat's folds -> median over repeats. Seeds derive from the
// master seed per (attribute, pipeline, repeat, fold), so adding a pipeline
// to a plan never shifts another pipeline's numbers.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairsmote/config.hpp"
#include "fairsmote/csv.hpp"
#include "fairsmote/dataset.hpp"
#include "fairsmote/errors.hpp"
#include "fairsmote/logistic.hpp"
#include "fairsmote/metrics.hpp"
#include "fairsmote/rng.hpp"
#include "fairsmote/sampler.hpp"
#include "fairsmote/scott_knott.hpp"
#include "fairsmote/situation.hpp"

namespace fairsmote {

struct CellResult {
    std::string attr;
    Pipeline pipeline = Pipeline::Default;
    std::size_t repeat_index = 0;
    std::size_t fold_index = 0;
    MetricsReport metrics;       // fairness fields are NaN when !fairness_valid
    bool fairness_valid = true;  // false when the test fold lacks a protected group
};

struct PipelineSummary {
    std::string attr;
    Pipeline pipeline = Pipeline::Default;
    // Median over repeats of the per-repeat fold means; NaN if no repeat
    // produced a value for that metric.
    std::array<double, MetricsReport::n_fields> median{};
};

struct MetricRankTable {
    std::string attr;
    std::string metric;
    RankTable table;
};

struct BenchmarkResult {
    std::string dataset_name;
    std::string learner_name = "lsr";
    std::vector<std::string> protected_attrs;
    std::vector<Pipeline> pipelines;
    std::size_t folds = 0;
    std::size_t repeats = 0;
    std::uint64_t seed = 0;
    std::vector<CellResult> cells;
    std::vector<PipelineSummary> summaries;
    std::vector<MetricRankTable> ranks;
    std::vector<std::string> warnings;
};

inline double median_of(std::vector<double> xs) {
    if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

// Train-fold transformation for one experiment cell. `attr` is the protected
// attribute under test; balancing always targets exactly that attribute.
inline Dataset apply_pipeline(const Dataset& train, const std::string& attr, Pipeline pipeline,
                              const RunPlan& plan, std::uint64_t cell_seed) {
    FairSmoteConfig cfg = plan.sampler;
    cfg.seed = cell_seed;
    const std::string attrs[] = {attr};
    switch (pipeline) {
        case Pipeline::Default: return train;
        case Pipeline::Rus: return rus(train, cell_seed);
        case Pipeline::Ros: return ros(train, cell_seed);
        case Pipeline::Smote: return smote(train, cfg);
        case Pipeline::FairSmote: return fair_smote(train, attrs, cfg);
        case Pipeline::FairSmoteSituation: return fair_pipeline(train, attrs, cfg, plan.learner);
    }
    throw ConfigError("bench: unknown pipeline value");
}

namespace detail {

inline std::vector<std::uint8_t> class_column_bits(const Dataset& ds) {
    std::vector<std::uint8_t> bits(ds.n_rows());
    for (std::size_t r = 0; r < ds.n_rows(); ++r) bits[r] = ds.class_bit(r);
    return bits;
}

inline std::vector<std::uint8_t> attr_column_bits(const Dataset& ds, const std::string& attr) {
    const std::size_t col = ds.require_column(attr);
    std::vector<std::uint8_t> bits(ds.n_rows());
    for (std::size_t r = 0; r < ds.n_rows(); ++r) bits[r] = ds.attr_bit(col, r);
    return bits;
}

}  // namespace detail

inline BenchmarkResult run(const RunPlan& plan) {
    plan.validate();
    const Dataset ds = load_dataset(plan.dataset);
    for (const std::string& attr : plan.protected_attrs) ds.protected_spec(attr);

    BenchmarkResult res;
    res.dataset_name = plan.dataset.name;
    res.protected_attrs = plan.protected_attrs;
    res.pipelines = plan.pipelines;
    res.folds = plan.folds;
    res.repeats = plan.repeats;
    res.seed = plan.seed;

    const std::size_t n_attrs = plan.protected_attrs.size();
    const std::size_t n_pipes = plan.pipelines.size();
    constexpr std::size_t n_metrics = MetricsReport::n_fields;
    // observations[attr][pipeline][metric] = one value per repeat that produced any
    std::vector<std::vector<std::array<std::vector<double>, n_metrics>>> observations(
        n_attrs, std::vector<std::array<std::vector<double>, n_metrics>>(n_pipes));

    for (std::size_t r = 0; r < plan.repeats; ++r) {
        const auto splits = split_cv(ds, plan.folds, derive_seed(plan.seed, {hash_label("split"), r}));
        for (std::size_t ai = 0; ai < n_attrs; ++ai) {
            const std::string& attr = plan.protected_attrs[ai];
            for (std::size_t pi = 0; pi < n_pipes; ++pi) {
                const Pipeline pipe = plan.pipelines[pi];
                std::array<std::vector<double>, n_metrics> fold_values;
                for (std::size_t f = 0; f < splits.size(); ++f) {
                    const std::uint64_t cell_seed = derive_seed(
                        plan.seed, {hash_label("cell"), hash_label(attr),
                                    hash_label(pipeline_name(pipe)), r, f});
                    CellResult cell;
                    cell.attr = attr;
                    cell.pipeline = pipe;
                    cell.repeat_index = r;
                    cell.fold_index = f;
                    try {
                        const Dataset train = apply_pipeline(splits[f].train, attr, pipe, plan, cell_seed);
                        LogisticRegression model(plan.learner);
                        model.fit(train);
                        const std::vector<std::uint8_t> pred = model.predict(splits[f].test);
                        const auto y_true = detail::class_column_bits(splits[f].test);
                        const auto group = detail::attr_column_bits(splits[f].test, attr);
                        bool has_priv = false, has_unpriv = false;
                        for (std::uint8_t g : group) (g ? has_priv : has_unpriv) = true;
                        cell.fairness_valid = has_priv && has_unpriv;
                        if (cell.fairness_valid) {
                            cell.metrics = score(y_true, pred, group);
                        } else {
                            const PerformanceMetrics p = performance(confusion(y_true, pred));
                            cell.metrics.recall = p.recall;
                            cell.metrics.false_alarm = p.false_alarm;
                            cell.metrics.precision = p.precision;
                            cell.metrics.accuracy = p.accuracy;
                            cell.metrics.f1 = p.f1;
                            const double nan = std::numeric_limits<double>::quiet_NaN();
                            cell.metrics.aod = cell.metrics.eod = cell.metrics.spd =
                                cell.metrics.di_deviation = nan;
                            res.warnings.push_back("degenerate test fold (one protected group): attr=" +
                                                   attr + " pipeline=" + pipeline_name(pipe) +
                                                   " repeat=" + std::to_string(r) +
                                                   " fold=" + std::to_string(f) +
                                                   "; fairness metrics skipped");
                        }
                    } catch (const ConfigError& e) {
                        throw ConfigError("bench: pipeline=" + pipeline_name(pipe) + " repeat=" +
                                          std::to_string(r) + " fold=" + std::to_string(f) + ": " +
                                          e.what());
                    } catch (const std::exception& e) {
                        throw DataError("bench: pipeline=" + pipeline_name(pipe) + " repeat=" +
                                        std::to_string(r) + " fold=" + std::to_string(f) + ": " +
                                        e.what());
                    }
                    for (std::size_t m = 0; m < n_metrics; ++m) {
                        const double v = cell.metrics.field(m);
                        if (std::isfinite(v)) fold_values[m].push_back(v);
                    }
                    res.cells.push_back(std::move(cell));
                }
                for (std::size_t m = 0; m < n_metrics; ++m)
                    if (!fold_values[m].empty())
                        observations[ai][pi][m].push_back(mean_of(fold_values[m]));
            }
        }
    }

    for (std::size_t ai = 0; ai < n_attrs; ++ai) {
        for (std::size_t pi = 0; pi < n_pipes; ++pi) {
            PipelineSummary s;
            s.attr = plan.protected_attrs[ai];
            s.pipeline = plan.pipelines[pi];
            for (std::size_t m = 0; m < n_metrics; ++m)
                s.median[m] = median_of(observations[ai][pi][m]);
            res.summaries.push_back(std::move(s));
        }
        for (std::size_t m = 0; m < n_metrics; ++m) {
            std::vector<ResultGroup> groups;
            for (std::size_t pi = 0; pi < n_pipes; ++pi)
                if (!observations[ai][pi][m].empty())
                    groups.push_back({pipeline_name(plan.pipelines[pi]), observations[ai][pi][m]});
            if (groups.size() < 2) continue;
            SignificanceConfig sig;
            sig.seed = derive_seed(plan.seed, {hash_label("rank"), hash_label(plan.protected_attrs[ai]),
                                               static_cast<std::uint64_t>(m)});
            const Direction dir = MetricsReport::higher_is_better(m) ? Direction::HigherBetter
                                                                     : Direction::LowerBetter;
            res.ranks.push_back({plan.protected_attrs[ai], MetricsReport::field_name(m),
                                 scott_knott(groups, dir, sig)});
        }
    }
    return res;
}

enum class ReportFormat { Csv, Json, Markdown };

inline ReportFormat parse_report_format(const std::string& token) {
    if (token == "csv") return ReportFormat::Csv;
    if (token == "json") return ReportFormat::Json;
    if (token == "markdown" || token == "md") return ReportFormat::Markdown;
    throw ConfigError("report: unsupported format '" + token + "'");
}

namespace detail {

inline std::string cell_text(double v) { return std::isfinite(v) ? csv::format_double(v) : std::string(); }

inline std::string result_csv(const BenchmarkResult& res) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header = {"dataset", "protected", "pipeline", "learner", "repeat", "fold"};
    for (std::size_t m = 0; m < MetricsReport::n_fields; ++m)
        header.push_back(MetricsReport::field_name(m));
    rows.push_back(std::move(header));
    for (const CellResult& c : res.cells) {
        std::vector<std::string> row = {res.dataset_name,
                                        c.attr,
                                        pipeline_name(c.pipeline),
                                        res.learner_name,
                                        std::to_string(c.repeat_index),
                                        std::to_string(c.fold_index)};
        for (std::size_t m = 0; m < MetricsReport::n_fields; ++m)
            row.push_back(cell_text(c.metrics.field(m)));
        rows.push_back(std::move(row));
    }
    return csv::format_rows(rows);
}

inline nlohmann::json result_json(const BenchmarkResult& res) {
    nlohmann::json j;
    j["dataset"] = res.dataset_name;
    j["learner"] = res.learner_name;
    j["protected"] = res.protected_attrs;
    nlohmann::json pipes = nlohmann::json::array();
    for (Pipeline p : res.pipelines) pipes.push_back(pipeline_name(p));
    j["pipelines"] = pipes;
    j["folds"] = res.folds;
    j["repeats"] = res.repeats;
    j["seed"] = res.seed;
    j["cells"] = nlohmann::json::array();
    for (const CellResult& c : res.cells) {
        nlohmann::json jc;
        jc["protected"] = c.attr;
        jc["pipeline"] = pipeline_name(c.pipeline);
        jc["repeat"] = c.repeat_index;
        jc["fold"] = c.fold_index;
        for (std::size_t m = 0; m < MetricsReport::n_fields; ++m) {
            const double v = c.metrics.field(m);
            if (std::isfinite(v))
                jc[MetricsReport::field_name(m)] = v;
            else
                jc[MetricsReport::field_name(m)] = nullptr;
        }
        j["cells"].push_back(std::move(jc));
    }
    j["summaries"] = nlohmann::json::array();
    for (const PipelineSummary& s : res.summaries) {
        nlohmann::json js;
        js["protected"] = s.attr;
        js["pipeline"] = pipeline_name(s.pipeline);
        for (std::size_t m = 0; m < MetricsReport::n_fields; ++m) {
            if (std::isfinite(s.median[m]))
                js[MetricsReport::field_name(m)] = s.median[m];
            else
                js[MetricsReport::field_name(m)] = nullptr;
        }
        j["summaries"].push_back(std::move(js));
    }
    j["ranks"] = nlohmann::json::array();
    for (const MetricRankTable& r : res.ranks) {
        nlohmann::json jr;
        jr["protected"] = r.attr;
        jr["metric"] = r.metric;
        nlohmann::json entries = nlohmann::json::array();
        for (const RankedGroup& g : r.table.entries) {
            entries.push_back({{"pipeline", g.label}, {"mean", g.mean}, {"rank", g.rank}});
        }
        jr["entries"] = std::move(entries);
        j["ranks"].push_back(std::move(jr));
    }
    j["warnings"] = res.warnings;
    return j;
}

inline std::string result_markdown(const BenchmarkResult& res) {
    std::string out;
    for (const std::string& attr : res.protected_attrs) {
        out += "## " + res.dataset_name + " / " + attr + " (" + res.learner_name + ", medians of " +
               std::to_string(res.repeats) + " repeats x " + std::to_string(res.folds) + " folds)\n\n";
        out += "| pipeline |";
        for (std::size_t m = 0; m < MetricsReport::n_fields; ++m)
            out += std::string(" ") + MetricsReport::field_name(m) + " |";
        out += "\n|---|";
        for (std::size_t m = 0; m < MetricsReport::n_fields; ++m) out += "---|";
        out += "\n";
        for (const PipelineSummary& s : res.summaries) {
            if (s.attr != attr) continue;
            out += "| " + pipeline_name(s.pipeline) + " |";
            for (std::size_t m = 0; m < MetricsReport::n_fields; ++m) {
                std::string cell = std::isfinite(s.median[m]) ? csv::format_double(s.median[m]) : "-";
                for (const MetricRankTable& r : res.ranks) {
                    if (r.attr != attr || r.metric != MetricsReport::field_name(m)) continue;
                    for (const RankedGroup& g : r.table.entries)
                        if (g.label == pipeline_name(s.pipeline))
                            cell += " (" + std::to_string(g.rank) + ")";
                }
                out += " " + cell + " |";
            }
            out += "\n";
        }
        out += "\nRank 1 is best per metric; direction follows the metric (higher for "
               "recall/precision/accuracy/f1, lower otherwise).\n\n";
    }
    if (!res.warnings.empty()) {
        out += "### Warnings\n\n";
        for (const std::string& w : res.warnings) out += "- " + w + "\n";
    }
    return out;
}

}  // namespace detail

inline std::string emit_report(const BenchmarkResult& res, ReportFormat format) {
    switch (format) {
        case ReportFormat::Csv: return detail::result_csv(res);
        case ReportFormat::Json: return detail::result_json(res).dump(2) + "\n";
        case ReportFormat::Markdown: return detail::result_markdown(res);
    }
    throw ConfigError("report: unsupported format value");
}

// One situation-testing experiment: per repeat, take the first CV train fold,
// fit the reference model on it, and measure the flip-failure fraction for
// each attribute. Reported value is the median over repeats.
struct SituationSummary {
    std::string attr;
    std::vector<double> fractions;  // one per repeat
    double median = 0.0;
};

inline std::vector<SituationSummary> situation_benchmark(const Dataset& ds,
                                                         std::span<const std::string> attrs,
                                                         const LogisticHyperparams& hp,
                                                         std::size_t repeats, std::size_t folds,
                                                         std::uint64_t seed) {
    if (repeats < 1) throw ConfigError("situation: repeats must be >= 1");
    for (const std::string& attr : attrs) ds.protected_spec(attr);
    std::vector<SituationSummary> out;
    for (const std::string& attr : attrs) out.push_back({attr, {}, 0.0});
    for (std::size_t r = 0; r < repeats; ++r) {
        const auto splits = split_cv(ds, folds, derive_seed(seed, {hash_label("split"), r}));
        LogisticRegression model(hp);
        model.fit(splits.front().train);
        for (std::size_t a = 0; a < out.size(); ++a) {
            const SituationReport rep = situation_test(splits.front().train, out[a].attr, model);
            out[a].fractions.push_back(rep.fraction());
        }
    }
    for (SituationSummary& s : out) s.median = median_of(s.fractions);
    return out;
}

}  // namespace fairsmote
