#pragma once

// Situation testing: a trained model is probed row by row with the protected
// attribute flipped and everything else held fixed. A row whose prediction
// changes under the flip is marked biased. remove_biased drops those rows;
// fair_pipeline chains oversampling, model fitting, and removal into the full
// training-data repair.

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "fairsmote/dataset.hpp"
#include "fairsmote/errors.hpp"
#include "fairsmote/logistic.hpp"
#include "fairsmote/sampler.hpp"

namespace fairsmote {

struct SituationReport {
    std::string attribute;
    std::size_t total = 0;
    std::vector<std::size_t> failing;  // row indices, ascending

    double fraction() const {
        return total == 0 ? 0.0 : static_cast<double>(failing.size()) / static_cast<double>(total);
    }

    // Audit-log form.
    std::string to_json() const {
        std::string out = "{\"attribute\":\"" + attribute + "\",\"total\":" + std::to_string(total) +
                          ",\"failing\":[";
        for (std::size_t i = 0; i < failing.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(failing[i]);
        }
        out += "],\"fraction\":" + csv::format_double(fraction()) + "}";
        return out;
    }
};

// Copy of ds with the boolean column's bits inverted.
inline Dataset flip_attribute(const Dataset& ds, const std::string& attr) {
    const std::size_t col = ds.require_column(attr);
    if (ds.column(col).kind != FeatureKind::Boolean)
        throw DataError("situation: protected column must be boolean: " + attr);
    std::vector<Column> cols = ds.columns();
    for (std::int32_t& code : cols[col].cat) code = 1 - code;
    return Dataset(std::move(cols), ds.class_spec(), ds.protected_specs());
}

inline SituationReport situation_test(const Dataset& train, const std::string& attr,
                                      const Classifier& model) {
    train.protected_spec(attr);  // must be a declared protected attribute
    SituationReport report;
    report.attribute = attr;
    report.total = train.n_rows();
    const std::vector<std::uint8_t> original = model.predict(train);
    const std::vector<std::uint8_t> flipped = model.predict(flip_attribute(train, attr));
    for (std::size_t r = 0; r < train.n_rows(); ++r)
        if (original[r] != flipped[r]) report.failing.push_back(r);
    return report;
}

inline SituationReport situation_test(const Dataset& train, const std::string& attr,
                                      const LogisticHyperparams& hp = {}) {
    LogisticRegression model(hp);
    model.fit(train);
    return situation_test(train, attr, model);
}

inline Dataset remove_biased(const Dataset& train, const SituationReport& report) {
    std::vector<std::uint8_t> drop(train.n_rows(), 0);
    for (std::size_t r : report.failing) {
        if (r >= train.n_rows()) throw DataError("situation: failing index out of range");
        drop[r] = 1;
    }
    std::vector<std::size_t> keep;
    keep.reserve(train.n_rows() - report.failing.size());
    for (std::size_t r = 0; r < train.n_rows(); ++r)
        if (!drop[r]) keep.push_back(r);
    return train.select(keep);
}

// Full repair: oversample to subgroup parity, fit the reference model on the
// balanced data, then drop every row failing the flip test for any attribute.
// Rows failing several attributes are removed once.
inline Dataset fair_pipeline(const Dataset& train, std::span<const std::string> attrs,
                             const FairSmoteConfig& smote_cfg = {},
                             const LogisticHyperparams& learner_hp = {}) {
    Dataset balanced = fair_smote(train, attrs, smote_cfg);
    LogisticRegression model(learner_hp);
    model.fit(balanced);
    std::set<std::size_t> all_failing;
    for (const std::string& attr : attrs) {
        SituationReport report = situation_test(balanced, attr, model);
        all_failing.insert(report.failing.begin(), report.failing.end());
    }
    SituationReport merged;
    merged.attribute = "*";
    merged.total = balanced.n_rows();
    merged.failing.assign(all_failing.begin(), all_failing.end());
    return remove_biased(balanced, merged);
}

}  // namespace fairsmote
