#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "fairsmote/config.hpp"
#include "fairsmote/errors.hpp"

using namespace fairsmote;
namespace fs = std::filesystem;

namespace {

const fs::path& tmp_root() {
    static const fs::path root = [] {
        fs::path d = fs::current_path() / "cfg_tmp";
        fs::remove_all(d);
        fs::create_directories(d / "data");
        fs::create_directories(d / "plans");
        return d;
    }();
    return root;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

// dataset config + csv pair under cfg_tmp/data, with a relative csv path
fs::path write_tiny_dataset() {
    const fs::path dir = tmp_root() / "data";
    write_file(dir / "synth.csv",
               "score,hours,city,sex,label\n"
               "5,1,a,m,yes\n"
               "15,3,b,f,no\n"
               "NA,9,c,m,yes\n"
               "8,2,a,f,yes\n"
               "20,4,b,m,no\n");
    write_file(dir / "ds.json", R"({
      "name": "tiny",
      "csv": "synth.csv",
      "columns": [
        {"name": "score", "kind": "numeric"},
        {"name": "hours", "kind": "numeric"},
        {"name": "city", "kind": "categorical"},
        {"name": "sex", "kind": "categorical"},
        {"name": "label", "kind": "categorical"}
      ],
      "class": {"column": "label", "favorable": "yes", "unfavorable": "no"},
      "protected": [{"column": "sex", "privileged": "m", "unprivileged": "f"}],
      "missing_values": ["NA"],
      "bins": [{"column": "score", "thresholds": [10], "labels": ["low", "high"]}]
    })");
    return dir / "ds.json";
}

std::string data_file(const char* name) {
    return std::string(FAIRSMOTE_DATA_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("dataset config round trips through json") {
    const fs::path path = write_tiny_dataset();
    const DatasetConfig cfg = load_dataset_config(path.string());

    CHECK(cfg.name == "tiny");
    CHECK(fs::path(cfg.csv_path).filename() == "synth.csv");
    CHECK(fs::exists(cfg.csv_path));
    REQUIRE(cfg.ingest.columns.size() == 5);
    CHECK(cfg.ingest.columns[0].name == "score");
    CHECK(cfg.ingest.columns[0].kind == FeatureKind::Numeric);
    CHECK(cfg.ingest.columns[2].kind == FeatureKind::Categorical);
    CHECK(cfg.ingest.class_spec.column == "label");
    CHECK(cfg.ingest.class_spec.favorable == "yes");
    REQUIRE(cfg.ingest.protected_specs.size() == 1);
    CHECK(cfg.ingest.protected_specs[0].privileged == "m");
    CHECK(cfg.ingest.missing_values == std::vector<std::string>{"NA"});
    REQUIRE(cfg.bins.size() == 1);
    CHECK(cfg.bins[0].thresholds == std::vector<double>{10});
}

TEST_CASE("load_dataset ingests, bins and normalizes") {
    const DatasetConfig cfg = load_dataset_config(write_tiny_dataset().string());
    const Dataset ds = load_dataset(cfg);

    CHECK(ds.n_rows() == 4);  // the NA row is dropped
    const Column& score = ds.column(ds.require_column("score"));
    CHECK(score.kind == FeatureKind::Categorical);
    CHECK(score.vocab == std::vector<std::string>{"low", "high"});
    CHECK(score.cat == std::vector<std::int32_t>{0, 1, 0, 1});

    const Column& hours = ds.column(ds.require_column("hours"));
    REQUIRE(hours.kind == FeatureKind::Numeric);
    CHECK(hours.num == std::vector<double>{0.0, 2.0 / 3.0, 1.0 / 3.0, 1.0});
    CHECK(ds.is_normalized());
}

TEST_CASE("dataset name defaults to the file stem") {
    const fs::path dir = tmp_root() / "data";
    write_tiny_dataset();
    write_file(dir / "unnamed.json", R"({
      "csv": "synth.csv",
      "columns": [
        {"name": "hours", "kind": "numeric"},
        {"name": "sex", "kind": "categorical"},
        {"name": "label", "kind": "categorical"}
      ],
      "class": {"column": "label", "favorable": "yes", "unfavorable": "no"},
      "protected": [{"column": "sex", "privileged": "m", "unprivileged": "f"}]
    })");
    CHECK(load_dataset_config((dir / "unnamed.json").string()).name == "unnamed");
}

TEST_CASE("run plan fills in defaults") {
    write_tiny_dataset();
    const fs::path plan_path = tmp_root() / "plans" / "minimal.json";
    write_file(plan_path, R"({"dataset": "../data/ds.json"})");

    const RunPlan plan = load_run_plan(plan_path.string());
    CHECK(plan.dataset.name == "tiny");
    CHECK(plan.protected_attrs == std::vector<std::string>{"sex"});
    const std::vector<Pipeline> want = {Pipeline::Default, Pipeline::Rus, Pipeline::Ros,
                                        Pipeline::Smote, Pipeline::FairSmote};
    CHECK(plan.pipelines == want);
    CHECK(plan.folds == 5);
    CHECK(plan.repeats == 10);
    CHECK(plan.seed == 42);
    CHECK(plan.learner.learning_rate == 0.1);
    CHECK(plan.learner.iterations == 1000);
    CHECK(plan.learner.l2 == 1e-4);
    CHECK(plan.sampler.cr == 0.8);
    CHECK(plan.sampler.f == 0.8);
    CHECK(plan.sampler.k_neighbors == 2);
}

TEST_CASE("run plan honors every override") {
    write_tiny_dataset();
    const fs::path plan_path = tmp_root() / "plans" / "full.json";
    write_file(plan_path, R"({
      "dataset": "../data/ds.json",
      "protected": ["sex"],
      "pipelines": ["default", "fair_smote+situation"],
      "learner": {"learning_rate": 0.05, "iterations": 200, "l2": 0.001},
      "sampler": {"cr": 0.6, "f": 0.7, "k_neighbors": 3},
      "folds": 3,
      "repeats": 2,
      "seed": 7
    })");

    const RunPlan plan = load_run_plan(plan_path.string());
    const std::vector<Pipeline> want = {Pipeline::Default, Pipeline::FairSmoteSituation};
    CHECK(plan.pipelines == want);
    CHECK(plan.learner.learning_rate == 0.05);
    CHECK(plan.learner.iterations == 200);
    CHECK(plan.learner.l2 == 0.001);
    CHECK(plan.sampler.cr == 0.6);
    CHECK(plan.sampler.f == 0.7);
    CHECK(plan.sampler.k_neighbors == 3);
    CHECK(plan.folds == 3);
    CHECK(plan.repeats == 2);
    CHECK(plan.seed == 7);
}

TEST_CASE("pipeline names round trip") {
    for (Pipeline p : {Pipeline::Default, Pipeline::Rus, Pipeline::Ros, Pipeline::Smote,
                       Pipeline::FairSmote, Pipeline::FairSmoteSituation})
        CHECK(parse_pipeline(pipeline_name(p)) == p);
    CHECK_THROWS_AS(parse_pipeline("bogus"), ConfigError);
}

TEST_CASE("config errors are ConfigError, unreadable data is DataError") {
    const fs::path dir = tmp_root() / "data";
    write_tiny_dataset();

    CHECK_THROWS_AS(load_dataset_config((dir / "absent.json").string()), ConfigError);

    write_file(dir / "broken.json", "{oops");
    CHECK_THROWS_AS(load_dataset_config((dir / "broken.json").string()), ConfigError);

    write_file(dir / "nocsv.json", R"({
      "columns": [{"name": "sex", "kind": "categorical"}],
      "class": {"column": "label", "favorable": "y", "unfavorable": "n"},
      "protected": [{"column": "sex", "privileged": "m", "unprivileged": "f"}]
    })");
    CHECK_THROWS_AS(load_dataset_config((dir / "nocsv.json").string()), ConfigError);

    write_file(dir / "noclass.json", R"({
      "csv": "synth.csv",
      "columns": [{"name": "sex", "kind": "categorical"}],
      "protected": [{"column": "sex", "privileged": "m", "unprivileged": "f"}]
    })");
    CHECK_THROWS_AS(load_dataset_config((dir / "noclass.json").string()), ConfigError);

    write_file(dir / "noprot.json", R"({
      "csv": "synth.csv",
      "columns": [{"name": "label", "kind": "categorical"}],
      "class": {"column": "label", "favorable": "y", "unfavorable": "n"},
      "protected": []
    })");
    CHECK_THROWS_AS(load_dataset_config((dir / "noprot.json").string()), ConfigError);

    write_file(dir / "badkind.json", R"({
      "csv": "synth.csv",
      "columns": [{"name": "x", "kind": "integer"}],
      "class": {"column": "label", "favorable": "y", "unfavorable": "n"},
      "protected": [{"column": "sex", "privileged": "m", "unprivileged": "f"}]
    })");
    CHECK_THROWS_AS(load_dataset_config((dir / "badkind.json").string()), ConfigError);

    // config parsing succeeds, only the csv itself is missing
    write_file(dir / "ghostcsv.json", R"({
      "csv": "ghost.csv",
      "columns": [
        {"name": "sex", "kind": "categorical"},
        {"name": "label", "kind": "categorical"}
      ],
      "class": {"column": "label", "favorable": "y", "unfavorable": "n"},
      "protected": [{"column": "sex", "privileged": "m", "unprivileged": "f"}]
    })");
    const DatasetConfig ghost = load_dataset_config((dir / "ghostcsv.json").string());
    CHECK_THROWS_AS(load_dataset(ghost), DataError);
}

TEST_CASE("run plan validation") {
    write_tiny_dataset();
    const fs::path dir = tmp_root() / "plans";

    auto plan_with = [&](const char* fname, const std::string& extra) {
        write_file(dir / fname, std::string(R"({"dataset": "../data/ds.json")") + extra + "}");
        return (dir / fname).string();
    };

    CHECK_THROWS_AS(load_run_plan(plan_with("p1.json", R"(, "folds": 1)")), ConfigError);
    CHECK_THROWS_AS(load_run_plan(plan_with("p2.json", R"(, "repeats": 0)")), ConfigError);
    CHECK_THROWS_AS(load_run_plan(plan_with("p3.json", R"(, "pipelines": [])")), ConfigError);
    CHECK_THROWS_AS(load_run_plan(plan_with("p4.json", R"(, "pipelines": ["bogus"])")), ConfigError);
    CHECK_THROWS_AS(load_run_plan(plan_with("p5.json", R"(, "protected": [])")), ConfigError);
    CHECK_THROWS_AS(load_run_plan(plan_with("p6.json", R"(, "sampler": {"cr": 2.0})")), ConfigError);
}

TEST_CASE("shipped german fixture loads with binned duration") {
    const DatasetConfig cfg = load_dataset_config(data_file("german_synth.json"));
    CHECK(cfg.name == "german");
    const Dataset ds = load_dataset(cfg);

    CHECK(ds.n_rows() == 1000);
    CHECK(ds.is_normalized());
    const Column& duration = ds.column(ds.require_column("duration"));
    CHECK(duration.kind == FeatureKind::Categorical);
    CHECK(duration.vocab == std::vector<std::string>{"short", "medium", "long", "very-long"});

    const auto counts = subgroup_counts(ds, std::vector<std::string>{"sex"});
    CHECK(counts.size() == 4);
}

TEST_CASE("shipped adult fixture loads both protected attributes") {
    const DatasetConfig cfg = load_dataset_config(data_file("adult_synth.json"));
    CHECK(cfg.name == "adult");
    REQUIRE(cfg.ingest.protected_specs.size() == 2);
    CHECK(cfg.ingest.protected_specs[1].column == "race");

    const Dataset ds = load_dataset(cfg);
    CHECK(ds.n_rows() > 40000);  // some rows carry missing markers and drop
    CHECK(ds.is_normalized());
    CHECK(subgroup_counts(ds, std::vector<std::string>{"sex"}).size() == 4);
    CHECK(subgroup_counts(ds, std::vector<std::string>{"sex", "race"}).size() == 8);
}

TEST_CASE("shipped run plans parse") {
    const RunPlan adult = load_run_plan(data_file("adult_sex.json"));
    CHECK(adult.dataset.name == "adult");
    CHECK(adult.protected_attrs == std::vector<std::string>{"sex"});
    const std::vector<Pipeline> adult_pipes = {Pipeline::Default, Pipeline::Smote,
                                               Pipeline::FairSmote};
    CHECK(adult.pipelines == adult_pipes);
    CHECK(adult.repeats == 10);

    const RunPlan german = load_run_plan(data_file("german_quick.json"));
    CHECK(german.pipelines.size() == 6);
    CHECK(german.pipelines.back() == Pipeline::FairSmoteSituation);
    CHECK(german.repeats == 2);
}
