#pragma once

// JSON configuration loading. Two document kinds:
//   dataset config: names a CSV, declares column kinds, the favorable-class
//     mapping, protected-attribute mappings, missing-value sentinels, and
//     numeric binning rules;
//   run plan: names a dataset config and the benchmark shape (protected
//     attributes under test, pipelines, learner knobs, folds, repeats, seed).
// Relative paths inside a document resolve against the document's directory.
// Malformed documents raise ConfigError; unreadable CSV data raises DataError
// at load time.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairsmote/dataset.hpp"
#include "fairsmote/errors.hpp"
#include "fairsmote/logistic.hpp"
#include "fairsmote/sampler.hpp"

namespace fairsmote {

struct DatasetConfig {
    std::string name;
    std::string csv_path;  // already resolved
    IngestSpec ingest;
    std::vector<BinRule> bins;
};

namespace detail {

inline nlohmann::json parse_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: " + path + ": " + e.what());
    }
}

inline std::string resolve_path(const std::string& base_file, const std::string& rel) {
    std::filesystem::path p(rel);
    if (p.is_absolute()) return p.string();
    return (std::filesystem::path(base_file).parent_path() / p).string();
}

template <typename T>
T require(const nlohmann::json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError("config: " + where + ": missing key '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: " + where + ": key '" + key + "': " + e.what());
    }
}

template <typename T>
T optional(const nlohmann::json& j, const char* key, T fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: " + where + ": key '" + key + "': " + e.what());
    }
}

inline FeatureKind parse_kind(const std::string& token, const std::string& where) {
    if (token == "boolean") return FeatureKind::Boolean;
    if (token == "categorical") return FeatureKind::Categorical;
    if (token == "numeric") return FeatureKind::Numeric;
    throw ConfigError("config: " + where + ": unknown column kind '" + token + "'");
}

}  // namespace detail

inline DatasetConfig load_dataset_config(const std::string& path) {
    const nlohmann::json j = detail::parse_json_file(path);
    DatasetConfig cfg;
    cfg.name = detail::optional<std::string>(j, "name", std::filesystem::path(path).stem().string(), path);
    cfg.csv_path = detail::resolve_path(path, detail::require<std::string>(j, "csv", path));

    if (!j.contains("columns") || !j.at("columns").is_array())
        throw ConfigError("config: " + path + ": 'columns' must be an array");
    for (const auto& jc : j.at("columns")) {
        ColumnSchema schema;
        schema.name = detail::require<std::string>(jc, "name", path);
        schema.kind = detail::parse_kind(detail::require<std::string>(jc, "kind", path), path);
        cfg.ingest.columns.push_back(std::move(schema));
    }

    if (!j.contains("class")) throw ConfigError("config: " + path + ": missing key 'class'");
    const auto& jcls = j.at("class");
    cfg.ingest.class_spec.column = detail::require<std::string>(jcls, "column", path);
    cfg.ingest.class_spec.favorable = detail::require<std::string>(jcls, "favorable", path);
    cfg.ingest.class_spec.unfavorable = detail::require<std::string>(jcls, "unfavorable", path);

    if (!j.contains("protected") || !j.at("protected").is_array() || j.at("protected").empty())
        throw ConfigError("config: " + path + ": 'protected' must be a non-empty array");
    for (const auto& jp : j.at("protected")) {
        ProtectedSpec spec;
        spec.column = detail::require<std::string>(jp, "column", path);
        spec.privileged = detail::require<std::string>(jp, "privileged", path);
        spec.unprivileged = detail::require<std::string>(jp, "unprivileged", path);
        cfg.ingest.protected_specs.push_back(std::move(spec));
    }

    cfg.ingest.missing_values =
        detail::optional<std::vector<std::string>>(j, "missing_values", {"?"}, path);

    if (j.contains("bins")) {
        for (const auto& jb : j.at("bins")) {
            BinRule rule;
            rule.column = detail::require<std::string>(jb, "column", path);
            rule.thresholds = detail::require<std::vector<double>>(jb, "thresholds", path);
            rule.labels = detail::require<std::vector<std::string>>(jb, "labels", path);
            cfg.bins.push_back(std::move(rule));
        }
    }
    return cfg;
}

// Ingest the CSV and apply binning plus min-max normalization.
inline Dataset load_dataset(const DatasetConfig& cfg) {
    Dataset raw = ingest_csv(cfg.csv_path, cfg.ingest);
    return preprocess(raw, cfg.bins);
}

enum class Pipeline { Default, Rus, Ros, Smote, FairSmote, FairSmoteSituation };

inline std::string pipeline_name(Pipeline p) {
    switch (p) {
        case Pipeline::Default: return "default";
        case Pipeline::Rus: return "rus";
        case Pipeline::Ros: return "ros";
        case Pipeline::Smote: return "smote";
        case Pipeline::FairSmote: return "fair_smote";
        case Pipeline::FairSmoteSituation: return "fair_smote+situation";
    }
    throw ConfigError("config: unknown pipeline value");
}

inline Pipeline parse_pipeline(const std::string& token) {
    for (Pipeline p : {Pipeline::Default, Pipeline::Rus, Pipeline::Ros, Pipeline::Smote,
                       Pipeline::FairSmote, Pipeline::FairSmoteSituation})
        if (pipeline_name(p) == token) return p;
    throw ConfigError("config: unknown pipeline '" + token + "'");
}

struct RunPlan {
    DatasetConfig dataset;
    std::vector<std::string> protected_attrs;  // each gets its own experiment
    std::vector<Pipeline> pipelines;
    LogisticHyperparams learner;
    FairSmoteConfig sampler;  // cr / f / k; per-cell seeds are derived by the harness
    std::size_t folds = 5;
    std::size_t repeats = 10;
    std::uint64_t seed = 42;

    void validate() const {
        if (pipelines.empty()) throw ConfigError("plan: pipelines must be non-empty");
        if (protected_attrs.empty()) throw ConfigError("plan: protected attributes must be non-empty");
        if (folds < 2) throw ConfigError("plan: folds must be >= 2");
        if (repeats < 1) throw ConfigError("plan: repeats must be >= 1");
        sampler.validate();
    }
};

inline RunPlan load_run_plan(const std::string& path) {
    const nlohmann::json j = detail::parse_json_file(path);
    RunPlan plan;
    plan.dataset = load_dataset_config(
        detail::resolve_path(path, detail::require<std::string>(j, "dataset", path)));

    if (j.contains("protected")) {
        plan.protected_attrs = detail::require<std::vector<std::string>>(j, "protected", path);
    } else {
        for (const ProtectedSpec& p : plan.dataset.ingest.protected_specs)
            plan.protected_attrs.push_back(p.column);
    }

    const auto names = detail::optional<std::vector<std::string>>(
        j, "pipelines", {"default", "rus", "ros", "smote", "fair_smote"}, path);
    for (const std::string& n : names) plan.pipelines.push_back(parse_pipeline(n));

    if (j.contains("learner")) {
        const auto& jl = j.at("learner");
        plan.learner.learning_rate =
            detail::optional<double>(jl, "learning_rate", plan.learner.learning_rate, path);
        plan.learner.iterations =
            detail::optional<std::size_t>(jl, "iterations", plan.learner.iterations, path);
        plan.learner.l2 = detail::optional<double>(jl, "l2", plan.learner.l2, path);
    }
    if (j.contains("sampler")) {
        const auto& js = j.at("sampler");
        plan.sampler.cr = detail::optional<double>(js, "cr", plan.sampler.cr, path);
        plan.sampler.f = detail::optional<double>(js, "f", plan.sampler.f, path);
        plan.sampler.k_neighbors =
            detail::optional<std::size_t>(js, "k_neighbors", plan.sampler.k_neighbors, path);
    }
    plan.folds = detail::optional<std::size_t>(j, "folds", plan.folds, path);
    plan.repeats = detail::optional<std::size_t>(j, "repeats", plan.repeats, path);
    plan.seed = detail::optional<std::uint64_t>(j, "seed", plan.seed, path);
    plan.validate();
    return plan;
}

}  // namespace fairsmote
