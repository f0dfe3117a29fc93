// Command-line front end.
//
//   fairsmote audit <dataset-config>        subgroup counts and imbalance ratios
//   fairsmote situation <dataset-config>    flip-test failure fractions per attribute
//   fairsmote balance <dataset-config>      write a rebalanced copy of the training CSV
//   fairsmote bench <plan>                  cross-validated pipeline benchmark
//   fairsmote rank <results.csv>            Scott-Knott ranks over a prior bench CSV
//
// Exit codes: 0 success, 2 configuration error (bad flags, malformed config),
// 3 data error (unreadable/inconsistent data).

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fairsmote.hpp"

namespace {

using namespace fairsmote;

std::string subgroup_label(const Dataset& ds, std::span<const std::string> attrs,
                           const SubgroupKey& key) {
    std::string label = ds.class_spec().column + "=" + (key.class_bit ? "1" : "0");
    for (std::size_t i = 0; i < attrs.size(); ++i) {
        const ProtectedSpec& spec = ds.protected_spec(attrs[i]);
        label += " " + attrs[i] + "=" + (key.attr_bits[i] ? spec.privileged : spec.unprivileged);
    }
    return label;
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw DataError("cannot write " + out_path);
    out << text;
}

int run_audit(const std::string& config_path, const std::string& format) {
    const DatasetConfig cfg = load_dataset_config(config_path);
    const Dataset ds = load_dataset(cfg);

    nlohmann::json jout;
    jout["dataset"] = cfg.name;
    jout["rows"] = ds.n_rows();
    jout["attributes"] = nlohmann::json::array();

    std::string text = "dataset: " + cfg.name + " (" + std::to_string(ds.n_rows()) + " rows)\n";
    for (const ProtectedSpec& spec : ds.protected_specs()) {
        const std::string attrs[] = {spec.column};
        const auto counts = subgroup_counts(ds, attrs);
        std::size_t largest = 0, smallest = ds.n_rows();
        nlohmann::json jattr;
        jattr["attribute"] = spec.column;
        jattr["subgroups"] = nlohmann::json::array();
        text += "\nprotected attribute: " + spec.column + "\n";
        for (const auto& [key, count] : counts) {
            largest = std::max(largest, count);
            smallest = std::min(smallest, count);
            text += "  " + subgroup_label(ds, attrs, key) + ": " + std::to_string(count) + "\n";
            jattr["subgroups"].push_back({{"label", subgroup_label(ds, attrs, key)},
                                          {"count", count}});
        }
        const double ratio = smallest ? static_cast<double>(largest) / smallest : 0.0;
        text += "  subgroups: " + std::to_string(counts.size()) +
                ", largest/smallest: " + csv::format_double(ratio) + "\n";
        jattr["imbalance_ratio"] = ratio;
        jout["attributes"].push_back(std::move(jattr));
    }
    if (ds.protected_specs().size() > 1) {
        std::vector<std::string> all;
        for (const ProtectedSpec& spec : ds.protected_specs()) all.push_back(spec.column);
        const auto counts = subgroup_counts(ds, all);
        text += "\njoint subgroups over all protected attributes: " +
                std::to_string(counts.size()) + "\n";
        for (const auto& [key, count] : counts)
            text += "  " + subgroup_label(ds, all, key) + ": " + std::to_string(count) + "\n";
    }

    std::cout << (format == "json" ? jout.dump(2) + "\n" : text);
    return 0;
}

int run_situation(const std::string& config_path, const std::string& format, std::size_t repeats,
                  std::size_t folds, std::uint64_t seed) {
    const DatasetConfig cfg = load_dataset_config(config_path);
    const Dataset ds = load_dataset(cfg);
    std::vector<std::string> attrs;
    for (const ProtectedSpec& spec : ds.protected_specs()) attrs.push_back(spec.column);

    const auto summaries = situation_benchmark(ds, attrs, LogisticHyperparams{}, repeats, folds, seed);

    if (format == "json") {
        nlohmann::json jout;
        jout["dataset"] = cfg.name;
        jout["repeats"] = repeats;
        jout["results"] = nlohmann::json::array();
        for (const SituationSummary& s : summaries)
            jout["results"].push_back(
                {{"attribute", s.attr}, {"fractions", s.fractions}, {"median", s.median}});
        std::cout << jout.dump(2) << "\n";
        return 0;
    }
    std::cout << "dataset: " << cfg.name << ", " << repeats
              << " repeats (train fold of a fresh " << folds << "-fold split each)\n";
    for (const SituationSummary& s : summaries) {
        std::cout << "  " << s.attr << ": median failure fraction "
                  << csv::format_double(100.0 * s.median) << "% (per repeat:";
        for (double f : s.fractions) std::cout << " " << csv::format_double(100.0 * f) << "%";
        std::cout << ")\n";
    }
    return 0;
}

int run_balance(const std::string& config_path, const std::string& sampler,
                const std::string& out_path, std::vector<std::string> attrs, double cr, double f,
                std::uint64_t seed) {
    const DatasetConfig cfg = load_dataset_config(config_path);
    const Dataset ds = load_dataset(cfg);
    if (attrs.empty())
        for (const ProtectedSpec& spec : ds.protected_specs()) attrs.push_back(spec.column);

    FairSmoteConfig scfg;
    scfg.cr = cr;
    scfg.f = f;
    scfg.seed = seed;

    Dataset out;
    const Pipeline pipe = parse_pipeline(sampler);
    switch (pipe) {
        case Pipeline::Default: out = ds; break;
        case Pipeline::Rus: out = rus(ds, seed); break;
        case Pipeline::Ros: out = ros(ds, seed); break;
        case Pipeline::Smote: out = smote(ds, scfg); break;
        case Pipeline::FairSmote: out = fair_smote(ds, attrs, scfg); break;
        case Pipeline::FairSmoteSituation:
            out = fair_pipeline(ds, attrs, scfg, LogisticHyperparams{});
            break;
    }
    write_output(out_path, csv::format_rows(to_csv_rows(out)));
    std::cerr << sampler << ": " << ds.n_rows() << " -> " << out.n_rows() << " rows\n";
    return 0;
}

int run_bench(const std::string& plan_path, const std::string& format, const std::string& out_path,
              std::optional<std::uint64_t> seed, std::optional<std::size_t> folds,
              std::optional<std::size_t> repeats, std::optional<double> cr,
              std::optional<double> f) {
    RunPlan plan = load_run_plan(plan_path);
    if (seed) plan.seed = *seed;
    if (folds) plan.folds = *folds;
    if (repeats) plan.repeats = *repeats;
    if (cr) plan.sampler.cr = *cr;
    if (f) plan.sampler.f = *f;
    plan.validate();
    const ReportFormat fmt = parse_report_format(format);  // reject bad --format before the run

    const BenchmarkResult result = run(plan);
    write_output(out_path, emit_report(result, fmt));
    return 0;
}

// Reverse of the bench CSV emitter: per (dataset, protected attribute,
// metric), collect each pipeline's per-repeat fold means and rank them.
int run_rank(const std::string& csv_path, const std::string& format) {
    const auto rows = csv::read_file(csv_path);
    if (rows.size() < 2) throw DataError("rank: results CSV has no data rows");
    const csv::Row& header = rows.front();
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    for (const char* required : {"dataset", "protected", "pipeline", "repeat"})
        if (!col.count(required))
            throw DataError(std::string("rank: results CSV missing column '") + required + "'");

    std::vector<std::size_t> metric_cols;
    for (std::size_t m = 0; m < MetricsReport::n_fields; ++m) {
        if (!col.count(MetricsReport::field_name(m)))
            throw DataError(std::string("rank: results CSV missing metric column '") +
                            MetricsReport::field_name(m) + "'");
        metric_cols.push_back(col[MetricsReport::field_name(m)]);
    }

    // (dataset, attr, metric index) -> pipeline -> repeat -> values
    std::map<std::tuple<std::string, std::string, std::size_t>,
             std::map<std::string, std::map<std::string, std::vector<double>>>>
        buckets;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const csv::Row& row = rows[r];
        if (row.size() != header.size())
            throw DataError("rank: row " + std::to_string(r + 1) + " has wrong field count");
        for (std::size_t m = 0; m < MetricsReport::n_fields; ++m) {
            const std::string& cell = row[metric_cols[m]];
            if (cell.empty()) continue;  // degenerate fold: metric skipped
            double v = 0.0;
            try {
                v = std::stod(cell);
            } catch (const std::exception&) {
                throw DataError("rank: non-numeric metric cell '" + cell + "' at row " +
                                std::to_string(r + 1));
            }
            buckets[{row[col["dataset"]], row[col["protected"]], m}][row[col["pipeline"]]]
                   [row[col["repeat"]]]
                       .push_back(v);
        }
    }

    std::string text;
    nlohmann::json jout = nlohmann::json::array();
    for (const auto& [key, by_pipeline] : buckets) {
        const auto& [dataset, attr, m] = key;
        std::vector<ResultGroup> groups;
        for (const auto& [pipeline, by_repeat] : by_pipeline) {
            ResultGroup g{pipeline, {}};
            for (const auto& [repeat, values] : by_repeat) g.observations.push_back(mean_of(values));
            groups.push_back(std::move(g));
        }
        if (groups.size() < 2) continue;
        const Direction dir = MetricsReport::higher_is_better(m) ? Direction::HigherBetter
                                                                 : Direction::LowerBetter;
        const RankTable table = scott_knott(groups, dir);
        text += dataset + " / " + attr + " / " + MetricsReport::field_name(m) + "\n";
        nlohmann::json jentry;
        jentry["dataset"] = dataset;
        jentry["protected"] = attr;
        jentry["metric"] = MetricsReport::field_name(m);
        jentry["entries"] = nlohmann::json::array();
        for (const RankedGroup& g : table.entries) {
            text += "  rank " + std::to_string(g.rank) + ": " + g.label + " (mean " +
                    csv::format_double(g.mean) + ")\n";
            jentry["entries"].push_back({{"pipeline", g.label}, {"mean", g.mean}, {"rank", g.rank}});
        }
        for (const WinTieLoss& w : win_tie_loss(table)) {
            text += "    " + w.label + ": " + std::to_string(w.wins) + " wins, " +
                    std::to_string(w.ties) + " ties, " + std::to_string(w.losses) + " losses\n";
        }
        jout.push_back(std::move(jentry));
    }
    std::cout << (format == "json" ? jout.dump(2) + "\n" : text);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fair training-data auditing, rebalancing, and benchmarking for tabular ML"};
    app.require_subcommand(1);

    std::string config_path, plan_path, results_path;
    std::string format = "text";
    std::string sampler = "fair_smote";
    std::string out_path;
    std::vector<std::string> attrs;
    std::size_t repeats = 10, folds = 5;
    std::uint64_t seed = 42;
    double cr = FairSmoteConfig{}.cr;
    double f = FairSmoteConfig{}.f;
    std::optional<std::uint64_t> seed_opt;
    std::optional<std::size_t> folds_opt, repeats_opt;
    std::optional<double> cr_opt, f_opt;

    CLI::App* audit = app.add_subcommand("audit", "subgroup counts and imbalance ratios");
    audit->add_option("config", config_path, "dataset config (JSON)")->required();
    audit->add_option("--format", format, "text|json");

    CLI::App* situation = app.add_subcommand("situation", "flip-test failure fractions");
    situation->add_option("config", config_path, "dataset config (JSON)")->required();
    situation->add_option("--format", format, "text|json");
    situation->add_option("--repeats", repeats, "number of repeated splits");
    situation->add_option("--folds", folds, "folds per split");
    situation->add_option("--seed", seed, "master seed");

    CLI::App* balance = app.add_subcommand("balance", "write a rebalanced training CSV");
    balance->add_option("config", config_path, "dataset config (JSON)")->required();
    balance->add_option("--sampler", sampler, "default|rus|ros|smote|fair_smote|fair_smote+situation");
    balance->add_option("--out", out_path, "output CSV path (default stdout)");
    balance->add_option("--protected", attrs, "attributes to balance over (default: all declared)");
    balance->add_option("--cr", cr, "crossover probability");
    balance->add_option("--f", f, "interpolation mutation amount");
    balance->add_option("--seed", seed, "sampler seed");

    CLI::App* bench = app.add_subcommand("bench", "cross-validated pipeline benchmark");
    bench->add_option("plan", plan_path, "run plan (JSON)")->required();
    bench->add_option("--format", format, "csv|json|markdown");
    bench->add_option("--out", out_path, "output path (default stdout)");
    bench->add_option("--seed", seed_opt, "override master seed");
    bench->add_option("--folds", folds_opt, "override fold count");
    bench->add_option("--repeats", repeats_opt, "override repeat count");
    bench->add_option("--cr", cr_opt, "override crossover probability");
    bench->add_option("--f", f_opt, "override mutation amount");

    CLI::App* rank = app.add_subcommand("rank", "Scott-Knott ranks over a bench results CSV");
    rank->add_option("results", results_path, "bench CSV output")->required();
    rank->add_option("--format", format, "text|json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (bench->parsed() && format == "text") format = "csv";
        if (audit->parsed()) return run_audit(config_path, format);
        if (situation->parsed()) return run_situation(config_path, format, repeats, folds, seed);
        if (balance->parsed()) return run_balance(config_path, sampler, out_path, attrs, cr, f, seed);
        if (bench->parsed())
            return run_bench(plan_path, format, out_path, seed_opt, folds_opt, repeats_opt, cr_opt,
                             f_opt);
        if (rank->parsed()) return run_rank(results_path, format);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
