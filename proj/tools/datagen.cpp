// Deterministic census-style fixture generator.
//
// Real income/credit microdata cannot be redistributed with this repository,
// so the benchmarks ship with synthetic stand-ins that keep the shape the
// toolkit cares about: the adult file mirrors the UCI Adult schema (same 14
// feature columns, '?' missing markers, >50K/<=50K labels) and its headline
// imbalances (roughly 1:3 favorable:unfavorable, favorable outcomes heavily
// skewed toward men), the german file mirrors a 1000-row credit-risk table
// with a milder sex skew. Labels are drawn from a logistic model over the
// features plus a deliberate group bonus, which is exactly the bias pattern
// the samplers are supposed to repair. A real adult.csv in UCI column order
// works with the same dataset config.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fairsmote/csv.hpp"

namespace {

using Row = std::vector<std::string>;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// One weighted choice. Weights need not sum to 1.
template <typename Rng>
std::size_t pick(Rng& rng, const std::vector<double>& weights) {
    std::discrete_distribution<std::size_t> d(weights.begin(), weights.end());
    return d(rng);
}

struct AdultParams {
    std::size_t rows = 48842;
    double male_rate = 0.63;  // raw draw; selection below raises the observed share
    double white_rate = 0.85;
    double missing_work_occ = 0.037;  // workclass+occupation jointly '?'
    double missing_country = 0.012;

    // Label model: P(>50K) = sigmoid(b0 + race bonus + merit terms + noise).
    // The sex gap is pure selection bias: a high-income woman only enters the
    // observed sample with probability keep_female_pos. Conditional on the
    // features this shifts the female log-odds by log(keep), which a linear
    // model can only express through the sex column, while leaving the merit
    // distribution within each (class, sex) cell identical across sexes.
    double keep_female_pos = 0.30;
    // survivorship: women who stay in the sample skew strong on unobservables
    double b_female = 0.15;
    double b0 = -3.90;
    double b_race = 0.35;
    double w_edu = 2.30;
    double w_married = 1.75;
    double w_gain = 2.60;
    double w_hours = 0.80;
    double w_age = 1.00;
    double w_occ = 1.00;
    double noise = 1.15;
};

struct GermanParams {
    std::size_t rows = 1000;
    double male_rate = 0.69;

    double b0 = 0.45;
    double b_sex = 0.55;
    double w_checking = 0.90;
    double w_savings = 0.55;
    double w_history = 0.70;
    double w_duration = 0.90;
    double w_amount = 0.60;
    double w_employment = 0.45;
    double noise = 0.80;
};

void write_csv(const std::filesystem::path& path, const std::vector<Row>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "datagen: cannot write " << path << "\n";
        std::exit(1);
    }
    out << fairsmote::csv::format_rows(rows);
}

void generate_adult(const std::filesystem::path& path, const AdultParams& p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const std::vector<std::string> workclasses = {"Private", "Self-emp-not-inc", "Self-emp-inc",
                                                  "Government", "Other"};
    const std::vector<double> workclass_w = {0.72, 0.08, 0.035, 0.14, 0.025};

    const std::vector<std::string> educations = {"HS-grad",   "Some-college", "Bachelors",
                                                 "Masters",   "Assoc",        "11th-or-less",
                                                 "Prof-school", "Doctorate"};
    const std::vector<double> education_w = {0.32, 0.22, 0.19, 0.09, 0.07, 0.06, 0.03, 0.02};
    const std::vector<int> education_num = {9, 10, 13, 14, 11, 6, 15, 16};

    const std::vector<std::string> maritals = {"Married-civ-spouse", "Never-married", "Divorced",
                                               "Widowed"};
    const std::vector<double> marital_w = {0.52, 0.28, 0.14, 0.06};

    const std::vector<std::string> occupations = {"Prof-specialty", "Exec-managerial", "Sales",
                                                  "Adm-clerical",   "Craft-repair",    "Transport",
                                                  "Other-service"};
    // occupation mix depends on schooling; bonus feeds the label model
    const std::vector<double> occ_w_high = {0.34, 0.26, 0.12, 0.10, 0.08, 0.03, 0.07};
    const std::vector<double> occ_w_low = {0.06, 0.08, 0.11, 0.13, 0.24, 0.10, 0.28};
    const std::vector<double> occ_bonus = {0.9, 1.0, 0.35, 0.1, 0.0, -0.05, -0.5};

    const std::vector<std::string> countries = {"United-States", "Mexico", "Other"};
    const std::vector<double> country_w = {0.92, 0.03, 0.05};

    std::vector<Row> rows;
    rows.reserve(p.rows + 1);
    rows.push_back({"age", "workclass", "fnlwgt", "education", "education_num", "marital_status",
                    "occupation", "relationship", "race", "sex", "capital_gain", "capital_loss",
                    "hours_per_week", "native_country", "income"});

    std::size_t favorable = 0, fav_male = 0, male = 0;
    while (rows.size() < p.rows + 1) {
        const bool is_male = u01(rng) < p.male_rate;
        const bool is_white = u01(rng) < p.white_rate;
        const int age = std::clamp(static_cast<int>(std::lround(38.6 + 13.6 * gauss(rng))), 17, 90);
        const std::size_t work = pick(rng, workclass_w);
        const long fnlwgt =
            std::clamp(std::lround(std::exp(12.0 + 0.45 * gauss(rng))), 12285L, 1500000L);
        const std::size_t edu = pick(rng, education_w);
        const int edu_num = education_num[edu];
        const std::size_t marital = pick(rng, marital_w);
        const bool married = marital == 0;
        const std::size_t occ = pick(rng, edu_num >= 13 ? occ_w_high : occ_w_low);

        std::string relationship;
        if (married) {
            relationship = u01(rng) < 0.9 ? "Spouse" : "Not-in-family";
        } else {
            const double u = u01(rng);
            relationship = u < 0.55 ? "Not-in-family" : (u < 0.85 ? "Own-child" : "Unmarried");
        }

        const bool has_gain = u01(rng) < 0.084;
        const long gain =
            has_gain ? std::clamp(std::lround(std::exp(8.7 + 0.8 * gauss(rng))), 114L, 99999L) : 0L;
        const bool has_loss = !has_gain && u01(rng) < 0.047;
        const long loss =
            has_loss ? std::clamp(std::lround(1870.0 + 380.0 * gauss(rng)), 155L, 4356L) : 0L;
        const int hours = std::clamp(static_cast<int>(std::lround(40.4 + 12.3 * gauss(rng))), 1, 99);

        const double experience = std::min<double>(age, 55.0);
        double z = p.b0;
        z += is_male ? 0.0 : p.b_female;
        z += is_white ? p.b_race : 0.0;
        z += p.w_edu * (edu_num - 9.0) / 7.0;
        z += p.w_married * (married ? 1.0 : 0.0);
        z += p.w_gain * (gain > 0 ? 1.0 : 0.0);
        z += p.w_hours * (hours - 40.0) / 25.0;
        z += p.w_age * (experience - 17.0) / 38.0;
        z += p.w_occ * occ_bonus[occ];
        z += p.noise * gauss(rng);
        const bool high_income = u01(rng) < sigmoid(z);

        // selection: most high-income women never make it into the sample
        if (high_income && !is_male && u01(rng) >= p.keep_female_pos) {
            continue;
        }

        // missing markers come last so they never perturb the label draws
        const bool drop_work_occ = u01(rng) < p.missing_work_occ;
        const bool drop_country = u01(rng) < p.missing_country;

        favorable += high_income;
        male += is_male;
        fav_male += high_income && is_male;

        rows.push_back({std::to_string(age),
                        drop_work_occ ? "?" : workclasses[work],
                        std::to_string(fnlwgt),
                        educations[edu],
                        std::to_string(edu_num),
                        maritals[marital],
                        drop_work_occ ? "?" : occupations[occ],
                        relationship,
                        is_white ? "White" : "Non-white",
                        is_male ? "Male" : "Female",
                        std::to_string(gain),
                        std::to_string(loss),
                        std::to_string(hours),
                        drop_country ? "?" : countries[pick(rng, country_w)],
                        high_income ? ">50K" : "<=50K"});
    }
    write_csv(path, rows);
    std::cerr << "adult: " << p.rows << " rows, favorable " << 100.0 * favorable / p.rows
              << "%, male " << 100.0 * male / p.rows << "%, male share of favorable "
              << 100.0 * fav_male / favorable << "%\n";
}

void generate_german(const std::filesystem::path& path, const GermanParams& p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const std::vector<std::string> checking = {"none", "below-0", "0-to-200", "above-200"};
    const std::vector<double> checking_w = {0.39, 0.27, 0.27, 0.07};
    const std::vector<double> checking_score = {0.8, -0.8, 0.0, 0.9};

    const std::vector<std::string> history = {"critical", "delayed", "existing-paid", "all-paid"};
    const std::vector<double> history_w = {0.29, 0.09, 0.53, 0.09};
    const std::vector<double> history_score = {-0.9, -0.3, 0.3, 0.8};

    const std::vector<std::string> purposes = {"car",       "furniture", "radio-tv",
                                               "education", "business",  "other"};
    const std::vector<double> purpose_w = {0.33, 0.18, 0.28, 0.06, 0.10, 0.05};

    const std::vector<std::string> savings = {"none", "below-100", "100-to-500", "above-500"};
    const std::vector<double> savings_w = {0.60, 0.18, 0.12, 0.10};
    const std::vector<double> savings_score = {-0.4, 0.0, 0.4, 0.8};

    const std::vector<std::string> employment = {"unemployed", "below-1yr", "1-to-4yr", "above-4yr"};
    const std::vector<double> employment_w = {0.06, 0.17, 0.34, 0.43};
    const std::vector<double> employment_score = {-0.8, -0.3, 0.2, 0.6};

    const std::vector<std::string> housing = {"own", "rent", "free"};
    const std::vector<double> housing_w = {0.71, 0.18, 0.11};

    const std::vector<std::string> jobs = {"unskilled", "skilled", "management"};
    const std::vector<double> job_w = {0.22, 0.63, 0.15};

    const std::vector<std::string> property = {"real-estate", "life-insurance", "car", "none"};
    const std::vector<double> property_w = {0.28, 0.23, 0.33, 0.16};

    std::vector<Row> rows;
    rows.reserve(p.rows + 1);
    rows.push_back({"checking_status", "duration", "credit_history", "purpose", "credit_amount",
                    "savings_status", "employment", "installment_commitment", "sex",
                    "other_parties", "residence_since", "property_magnitude", "age", "housing",
                    "existing_credits", "job", "num_dependents", "foreign_worker", "class"});

    std::size_t good = 0;
    for (std::size_t r = 0; r < p.rows; ++r) {
        const bool is_male = u01(rng) < p.male_rate;
        const std::size_t chk = pick(rng, checking_w);
        const std::size_t hist = pick(rng, history_w);
        const std::size_t sav = pick(rng, savings_w);
        const std::size_t emp = pick(rng, employment_w);
        const int duration = std::clamp(static_cast<int>(std::lround(20.9 + 12.0 * gauss(rng))), 4, 72);
        const long amount =
            std::clamp(std::lround(std::exp(7.8 + 0.7 * gauss(rng))), 250L, 18500L);
        const int age = std::clamp(static_cast<int>(std::lround(35.5 + 11.3 * gauss(rng))), 19, 75);

        double z = p.b0;
        z += is_male ? p.b_sex : 0.0;
        z += p.w_checking * checking_score[chk];
        z += p.w_history * history_score[hist];
        z += p.w_savings * savings_score[sav];
        z += p.w_employment * employment_score[emp];
        z -= p.w_duration * (duration - 20.0) / 15.0;
        z -= p.w_amount * (std::log(static_cast<double>(amount)) - 7.8) / 0.7 * 0.5;
        z += p.noise * gauss(rng);
        const bool is_good = u01(rng) < sigmoid(z);
        good += is_good;

        const double up = u01(rng);
        rows.push_back({checking[chk],
                        std::to_string(duration),
                        history[hist],
                        purposes[pick(rng, purpose_w)],
                        std::to_string(amount),
                        savings[sav],
                        employment[emp],
                        std::to_string(1 + static_cast<int>(u01(rng) * 4.0)),
                        is_male ? "Male" : "Female",
                        up < 0.91 ? "none" : (up < 0.955 ? "guarantor" : "co-applicant"),
                        std::to_string(1 + static_cast<int>(u01(rng) * 4.0)),
                        property[pick(rng, property_w)],
                        std::to_string(age),
                        housing[pick(rng, housing_w)],
                        std::to_string(1 + static_cast<int>(u01(rng) * 2.0)),
                        jobs[pick(rng, job_w)],
                        std::to_string(1 + static_cast<int>(u01(rng) * 2.0)),
                        u01(rng) < 0.963 ? "yes" : "no",
                        is_good ? "good" : "bad"});
    }
    write_csv(path, rows);
    std::cerr << "german: " << p.rows << " rows, good " << 100.0 * good / p.rows << "%\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"generate synthetic adult/german benchmark fixtures"};
    std::string out_dir = ".";
    std::uint64_t seed = 7;
    AdultParams adult;
    GermanParams german;
    app.add_option("--out-dir", out_dir, "output directory");
    app.add_option("--seed", seed, "generator seed");
    app.add_option("--adult-rows", adult.rows, "adult row count");
    app.add_option("--german-rows", german.rows, "german row count");
    CLI11_PARSE(app, argc, argv);

    std::filesystem::create_directories(out_dir);
    generate_adult(std::filesystem::path(out_dir) / "adult_synth.csv", adult, seed);
    generate_german(std::filesystem::path(out_dir) / "german_synth.csv", german, seed + 1);
    return 0;
}
