#pragma once

// Performance and group-fairness metrics for binary predictions.
//
// Performance: recall, false alarm, precision, accuracy, F1.
// Fairness:    AOD, EOD, SPD and the deviation of disparate impact from 1,
//              all reported as nonnegative magnitudes (0 = no measured bias).
//
// Ratios with empty denominators evaluate to 0 so every metric is total.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fairsmote/errors.hpp"

namespace fairsmote {

struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
    std::size_t positives() const { return tp + fn; }
    std::size_t negatives() const { return fp + tn; }

    ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
        tp += o.tp; fp += o.fp; tn += o.tn; fn += o.fn;
        return *this;
    }
    bool operator==(const ConfusionMatrix&) const = default;
};

// Per-group confusion matrices for one protected attribute. The two group
// matrices sum cell-wise to the overall matrix.
struct GroupedConfusion {
    ConfusionMatrix privileged;
    ConfusionMatrix unprivileged;

    ConfusionMatrix overall() const {
        ConfusionMatrix m = privileged;
        m += unprivileged;
        return m;
    }
};

struct PerformanceMetrics {
    double recall = 0;
    double false_alarm = 0;
    double precision = 0;
    double accuracy = 0;
    double f1 = 0;
};

struct FairnessMetrics {
    double aod = 0;
    double eod = 0;
    double spd = 0;
    double di_deviation = 0;
};

// The nine values reported per (dataset, protected attribute, pipeline,
// repeat, fold) cell.
struct MetricsReport {
    double recall = 0;
    double false_alarm = 0;
    double precision = 0;
    double accuracy = 0;
    double f1 = 0;
    double aod = 0;
    double eod = 0;
    double spd = 0;
    double di_deviation = 0;

    double field(std::size_t i) const {
        const double* fields[] = {&recall, &false_alarm, &precision, &accuracy, &f1,
                                  &aod,    &eod,         &spd,       &di_deviation};
        return *fields[i];
    }

    static constexpr std::size_t n_fields = 9;
    static const char* field_name(std::size_t i) {
        constexpr const char* names[] = {"recall", "false_alarm", "precision", "accuracy", "f1",
                                         "aod",    "eod",         "spd",       "di_deviation"};
        return names[i];
    }
    // Larger is better for recall/precision/accuracy/f1; smaller for the rest.
    static bool higher_is_better(std::size_t i) { return i == 0 || i == 2 || i == 3 || i == 4; }
};

inline double safe_ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

inline ConfusionMatrix confusion(std::span<const std::uint8_t> y_true,
                                 std::span<const std::uint8_t> y_pred) {
    if (y_true.size() != y_pred.size()) throw DataError("confusion: label/prediction length mismatch");
    if (y_true.empty()) throw DataError("confusion: empty input");
    ConfusionMatrix m;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i]) {
            y_pred[i] ? ++m.tp : ++m.fn;
        } else {
            y_pred[i] ? ++m.fp : ++m.tn;
        }
    }
    return m;
}

inline PerformanceMetrics performance(const ConfusionMatrix& m) {
    PerformanceMetrics p;
    p.recall = safe_ratio(static_cast<double>(m.tp), static_cast<double>(m.tp + m.fn));
    p.false_alarm = safe_ratio(static_cast<double>(m.fp), static_cast<double>(m.fp + m.tn));
    p.precision = safe_ratio(static_cast<double>(m.tp), static_cast<double>(m.tp + m.fp));
    p.accuracy = safe_ratio(static_cast<double>(m.tp + m.tn), static_cast<double>(m.total()));
    p.f1 = safe_ratio(2.0 * p.precision * p.recall, p.precision + p.recall);
    return p;
}

struct FairnessOptions {
    // Deviation to report when the privileged group never receives a
    // favorable prediction but the unprivileged group does (the disparate
    // impact ratio is undefined there).
    double di_ceiling = 1.0;
};

// Rates are P[prediction = favorable | group]; `unprivileged_rate` is the
// PA = 0 group.
inline FairnessMetrics fairness(const GroupedConfusion& gc, double unprivileged_rate,
                                double privileged_rate, const FairnessOptions& opt = {}) {
    if (gc.privileged.total() == 0 || gc.unprivileged.total() == 0)
        throw DataError("fairness: a protected group has no scored rows");

    const auto tpr = [](const ConfusionMatrix& m) {
        return safe_ratio(static_cast<double>(m.tp), static_cast<double>(m.tp + m.fn));
    };
    const auto fpr = [](const ConfusionMatrix& m) {
        return safe_ratio(static_cast<double>(m.fp), static_cast<double>(m.fp + m.tn));
    };

    const double tpr_u = tpr(gc.unprivileged), tpr_p = tpr(gc.privileged);
    const double fpr_u = fpr(gc.unprivileged), fpr_p = fpr(gc.privileged);

    FairnessMetrics f;
    f.aod = std::fabs(((fpr_u - fpr_p) + (tpr_u - tpr_p)) * 0.5);
    f.eod = std::fabs(tpr_u - tpr_p);
    f.spd = std::fabs(unprivileged_rate - privileged_rate);
    if (privileged_rate == 0.0) {
        f.di_deviation = unprivileged_rate == 0.0 ? 0.0 : opt.di_ceiling;
    } else {
        f.di_deviation = std::fabs(1.0 - unprivileged_rate / privileged_rate);
    }
    return f;
}

// Convenience: per-group favorable-prediction rates read off the grouped
// confusion matrices.
inline FairnessMetrics fairness(const GroupedConfusion& gc, const FairnessOptions& opt = {}) {
    const auto rate = [](const ConfusionMatrix& m) {
        return safe_ratio(static_cast<double>(m.tp + m.fp), static_cast<double>(m.total()));
    };
    return fairness(gc, rate(gc.unprivileged), rate(gc.privileged), opt);
}

// Splits predictions by a protected bit vector and evaluates everything.
inline MetricsReport score(std::span<const std::uint8_t> y_true, std::span<const std::uint8_t> y_pred,
                           std::span<const std::uint8_t> group_bits, const FairnessOptions& opt = {}) {
    if (y_true.size() != group_bits.size()) throw DataError("score: group bit length mismatch");
    GroupedConfusion gc;
    std::size_t n_priv = 0, n_unpriv = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        ConfusionMatrix& m = group_bits[i] ? gc.privileged : gc.unprivileged;
        (group_bits[i] ? n_priv : n_unpriv) += 1;
        if (y_true[i]) {
            y_pred[i] ? ++m.tp : ++m.fn;
        } else {
            y_pred[i] ? ++m.fp : ++m.tn;
        }
    }
    const ConfusionMatrix overall = confusion(y_true, y_pred);
    const PerformanceMetrics p = performance(overall);
    const FairnessMetrics f = fairness(gc, opt);

    MetricsReport r;
    r.recall = p.recall;
    r.false_alarm = p.false_alarm;
    r.precision = p.precision;
    r.accuracy = p.accuracy;
    r.f1 = p.f1;
    r.aod = f.aod;
    r.eod = f.eod;
    r.spd = f.spd;
    r.di_deviation = f.di_deviation;
    return r;
}

}  // namespace fairsmote
