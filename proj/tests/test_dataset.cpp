#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <vector>

#include "fairsmote/dataset.hpp"
#include "fairsmote/errors.hpp"
#include "fairsmote/rng.hpp"

using namespace fairsmote;

namespace {

IngestSpec loan_spec() {
    IngestSpec spec;
    spec.columns = {{"age", FeatureKind::Numeric},
                    {"job", FeatureKind::Categorical},
                    {"owns_home", FeatureKind::Boolean},
                    {"sex", FeatureKind::Boolean},
                    {"approved", FeatureKind::Boolean}};
    spec.class_spec = {"approved", "yes", "no"};
    spec.protected_specs = {{"sex", "male", "female"}};
    return spec;
}

std::vector<csv::Row> loan_rows() {
    return {
        {"age", "job", "owns_home", "sex", "approved", "ignored"},
        {"25", "clerk", "yes", "male", "yes", "x"},
        {"40", "tech", "no", "female", "no", "x"},
        {"31", "clerk", "true", "male", "no", "x"},
        {"58", "sales", "0", "female", "yes", "x"},
    };
}

// A randomized dataset for the partition / CV properties. Protected bits and
// class bits are drawn independently so all four subgroups usually exist.
Dataset random_dataset(Rng& rng, std::size_t n) {
    Column num{"score", FeatureKind::Numeric, {}, {}, {}};
    Column cat{"color", FeatureKind::Categorical, {}, {}, {"r", "g", "b"}};
    Column sex{"sex", FeatureKind::Boolean, {}, {}, {}};
    Column cls{"label", FeatureKind::Boolean, {}, {}, {}};
    for (std::size_t i = 0; i < n; ++i) {
        num.num.push_back(uniform01(rng));
        cat.cat.push_back(static_cast<std::int32_t>(uniform_index(rng, 3)));
        sex.cat.push_back(static_cast<std::int32_t>(uniform_index(rng, 2)));
        cls.cat.push_back(static_cast<std::int32_t>(uniform_index(rng, 2)));
    }
    return Dataset({num, cat, sex, cls}, {"label", "1", "0"}, {{"sex", "1", "0"}});
}

}  // namespace

TEST_CASE("ingestion maps class and protected columns to bits") {
    const Dataset ds = ingest_rows(loan_rows(), loan_spec());
    REQUIRE(ds.n_rows() == 4);
    CHECK(ds.n_cols() == 5);  // the extra header column is not declared, so it is dropped
    CHECK_FALSE(ds.find_column("ignored").has_value());

    const Column& cls = ds.column(ds.class_column());
    CHECK(cls.cat == std::vector<std::int32_t>{1, 0, 0, 1});
    const Column& sex = ds.column(ds.require_column("sex"));
    CHECK(sex.kind == FeatureKind::Boolean);
    CHECK(sex.cat == std::vector<std::int32_t>{1, 0, 1, 0});

    // boolean feature column accepts yes/no, true/false and 0/1 spellings
    const Column& home = ds.column(ds.require_column("owns_home"));
    CHECK(home.cat == std::vector<std::int32_t>{1, 0, 1, 0});
}

TEST_CASE("rows with missing cells are dropped at ingestion") {
    auto rows = loan_rows();
    rows[1][0] = "?";
    rows[3][1] = "";
    const Dataset ds = ingest_rows(rows, loan_spec());
    CHECK(ds.n_rows() == 2);

    // custom sentinel
    auto spec = loan_spec();
    spec.missing_values = {"N/A"};
    auto rows2 = loan_rows();
    rows2[2][1] = "N/A";
    const Dataset ds2 = ingest_rows(rows2, spec);
    CHECK(ds2.n_rows() == 3);
}

TEST_CASE("ingestion rejects unmapped and malformed values") {
    auto bad_class = loan_rows();
    bad_class[1][4] = "maybe";
    CHECK_THROWS_AS(ingest_rows(bad_class, loan_spec()), DataError);

    auto bad_prot = loan_rows();
    bad_prot[2][3] = "other";
    CHECK_THROWS_AS(ingest_rows(bad_prot, loan_spec()), DataError);

    auto bad_num = loan_rows();
    bad_num[1][0] = "old";
    CHECK_THROWS_AS(ingest_rows(bad_num, loan_spec()), DataError);

    auto bad_bool = loan_rows();
    bad_bool[1][2] = "2";
    CHECK_THROWS_AS(ingest_rows(bad_bool, loan_spec()), DataError);

    auto short_row = loan_rows();
    short_row[2].resize(3);
    CHECK_THROWS_AS(ingest_rows(short_row, loan_spec()), DataError);

    auto spec = loan_spec();
    spec.class_spec.column = "undeclared";
    CHECK_THROWS_AS(ingest_rows(loan_rows(), spec), ConfigError);

    CHECK_THROWS_AS(ingest_rows({}, loan_spec()), DataError);
}

TEST_CASE("preprocess min-max normalizes numeric columns") {
    const Dataset ds = preprocess(ingest_rows(loan_rows(), loan_spec()));
    CHECK(ds.is_normalized());
    const Column& age = ds.column(ds.require_column("age"));
    // 25..58 -> min 0, max 1
    CHECK(age.num[0] == 0.0);
    CHECK(age.num[3] == 1.0);
    CHECK(age.num[1] == Catch::Approx((40.0 - 25.0) / 33.0));
}

TEST_CASE("constant numeric columns normalize to zero") {
    Column c{"flat", FeatureKind::Numeric, {7.0, 7.0, 7.0}, {}, {}};
    Column cls{"label", FeatureKind::Boolean, {}, {1, 0, 1}, {}};
    Column sex{"sex", FeatureKind::Boolean, {}, {0, 1, 0}, {}};
    const Dataset ds = preprocess(Dataset({c, cls, sex}, {"label", "1", "0"}, {{"sex", "1", "0"}}));
    CHECK(ds.column(0).num == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("binning sends a value equal to a threshold into the upper bin") {
    Column age{"age", FeatureKind::Numeric, {24.9, 25.0, 25.1, 60.0}, {}, {}};
    Column cls{"label", FeatureKind::Boolean, {}, {1, 0, 1, 0}, {}};
    Column sex{"sex", FeatureKind::Boolean, {}, {0, 1, 0, 1}, {}};
    const Dataset raw({age, cls, sex}, {"label", "1", "0"}, {{"sex", "1", "0"}});

    const BinRule rule{"age", {25.0}, {"young", "old"}};
    const Dataset ds = preprocess(raw, std::span(&rule, 1));
    const Column& binned = ds.column(0);
    REQUIRE(binned.kind == FeatureKind::Categorical);
    CHECK(binned.vocab == std::vector<std::string>{"young", "old"});
    CHECK(binned.cat == std::vector<std::int32_t>{0, 1, 1, 1});

    const BinRule arity{"age", {25.0}, {"only"}};
    CHECK_THROWS_AS(preprocess(raw, std::span(&arity, 1)), ConfigError);
    const BinRule unsorted{"age", {30.0, 20.0}, {"a", "b", "c"}};
    CHECK_THROWS_AS(preprocess(raw, std::span(&unsorted, 1)), ConfigError);
    const BinRule unknown{"nope", {25.0}, {"a", "b"}};
    CHECK_THROWS_AS(preprocess(raw, std::span(&unknown, 1)), ConfigError);
}

TEST_CASE("subgroup counts partition the dataset") {
    Rng rng = make_rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const Dataset ds = random_dataset(rng, 30 + uniform_index(rng, 100));
        const std::string attrs[] = {"sex"};
        std::size_t total = 0;
        for (const auto& [key, count] : subgroup_counts(ds, attrs)) {
            CHECK(key.attr_bits.size() == 1);
            total += count;
        }
        CHECK(total == ds.n_rows());
    }
}

TEST_CASE("subgroup lookup requires a declared protected attribute") {
    Rng rng = make_rng(7);
    const Dataset ds = random_dataset(rng, 20);
    const std::string attrs[] = {"color"};
    CHECK_THROWS_AS(subgroup_rows(ds, attrs), DataError);
    CHECK_THROWS_AS(subgroup_rows(ds, {}), DataError);
}

TEST_CASE("cv test folds are disjoint and cover the dataset") {
    Rng rng = make_rng(3);
    for (std::size_t folds : {2, 3, 5}) {
        for (std::uint64_t seed : {0ULL, 1ULL, 12345ULL}) {
            const std::size_t n = 23 + uniform_index(rng, 40);
            const auto assignment = split_cv_indices(n, folds, seed);
            REQUIRE(assignment.size() == folds);
            std::set<std::size_t> seen;
            for (const auto& [train, test] : assignment) {
                CHECK(train.size() + test.size() == n);
                CHECK(std::is_sorted(test.begin(), test.end()));
                CHECK(std::is_sorted(train.begin(), train.end()));
                for (std::size_t t : test) {
                    CHECK(seen.insert(t).second);  // disjoint across folds
                    CHECK_FALSE(std::binary_search(train.begin(), train.end(), t));
                }
            }
            CHECK(seen.size() == n);  // cover
        }
    }
}

TEST_CASE("cv fold sizes differ by at most one") {
    const auto assignment = split_cv_indices(23, 5, 42);
    for (const auto& [train, test] : assignment) {
        CHECK(test.size() >= 23 / 5);
        CHECK(test.size() <= 23 / 5 + 1);
    }
    CHECK_THROWS_AS(split_cv_indices(4, 5, 0), DataError);
    CHECK_THROWS_AS(split_cv_indices(10, 1, 0), DataError);
}

TEST_CASE("select keeps values and order") {
    Rng rng = make_rng(17);
    const Dataset ds = random_dataset(rng, 25);
    const std::size_t rows[] = {3, 3, 10, 0};
    const Dataset sub = ds.select(rows);
    REQUIRE(sub.n_rows() == 4);
    for (std::size_t c = 0; c < ds.n_cols(); ++c) {
        CHECK(sub.cell(c, 0) == ds.cell(c, 3));
        CHECK(sub.cell(c, 1) == ds.cell(c, 3));
        CHECK(sub.cell(c, 2) == ds.cell(c, 10));
        CHECK(sub.cell(c, 3) == ds.cell(c, 0));
    }
}

TEST_CASE("appended rows must match the column arity") {
    Rng rng = make_rng(5);
    const Dataset ds = random_dataset(rng, 10);
    const Dataset grown = ds.with_appended_rows({ds.row_values(2)});
    CHECK(grown.n_rows() == 11);
    for (std::size_t c = 0; c < ds.n_cols(); ++c) CHECK(grown.cell(c, 10) == ds.cell(c, 2));

    RowValues short_row = ds.row_values(0);
    short_row.pop_back();
    CHECK_THROWS_AS(ds.with_appended_rows({short_row}), DataError);
}

TEST_CASE("csv export round-trips through ingestion") {
    const Dataset ds = preprocess(ingest_rows(loan_rows(), loan_spec()));
    const auto rows = to_csv_rows(ds);
    REQUIRE(rows.size() == ds.n_rows() + 1);

    IngestSpec spec = loan_spec();
    spec.class_spec = {"approved", "1", "0"};
    spec.protected_specs = {{"sex", "1", "0"}};
    const Dataset back = ingest_rows(rows, spec);
    REQUIRE(back.n_rows() == ds.n_rows());
    for (std::size_t c = 0; c < ds.n_cols(); ++c)
        for (std::size_t r = 0; r < ds.n_rows(); ++r) CHECK(back.cell(c, r) == ds.cell(c, r));
}

TEST_CASE("a dataset needs at least one protected attribute") {
    Column cls{"label", FeatureKind::Boolean, {}, {1, 0}, {}};
    CHECK_THROWS_AS(Dataset({cls}, {"label", "1", "0"}, {}), ConfigError);
}

TEST_CASE("ragged columns are rejected") {
    Column a{"a", FeatureKind::Numeric, {1.0, 2.0}, {}, {}};
    Column cls{"label", FeatureKind::Boolean, {}, {1, 0, 1}, {}};
    Column sex{"sex", FeatureKind::Boolean, {}, {0, 1, 1}, {}};
    CHECK_THROWS_AS(Dataset({a, cls, sex}, {"label", "1", "0"}, {{"sex", "1", "0"}}), DataError);
}
