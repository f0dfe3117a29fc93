#pragma once

// Binary classifiers over preprocessed datasets.
//
// FeatureEncoder maps dataset rows to a dense numeric matrix: booleans and
// normalized numerics pass through as single features, categoricals become
// one-hot blocks built from the values present in the training fold (values
// unseen at fit time encode to an all-zero block). LogisticRegression is a
// from-scratch L2-regularized logistic model trained by full-batch gradient
// descent; it is the reference learner everywhere in this project, but any
// Classifier can slot into the pipelines.

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fairsmote/dataset.hpp"
#include "fairsmote/errors.hpp"

namespace fairsmote {

struct FeatureMatrix {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<double> values;  // row-major

    std::span<const double> row(std::size_t r) const {
        return {values.data() + r * n_cols, n_cols};
    }
    std::span<double> row(std::size_t r) { return {values.data() + r * n_cols, n_cols}; }
};

class FeatureEncoder {
public:
    FeatureEncoder() = default;

    static FeatureEncoder fit(const Dataset& train) {
        FeatureEncoder enc;
        for (std::size_t c = 0; c < train.n_cols(); ++c) {
            const Column& col = train.column(c);
            if (c == train.class_column()) continue;
            ColumnPlan plan;
            plan.name = col.name;
            plan.kind = col.kind;
            plan.offset = enc.n_features_;
            if (col.kind == FeatureKind::Categorical) {
                std::map<std::int32_t, std::size_t> seen;  // code -> one-hot slot, code order
                for (std::int32_t code : col.cat) seen.emplace(code, 0);
                std::size_t slot = 0;
                for (auto& [code, s] : seen) s = slot++;
                plan.one_hot = std::move(seen);
                enc.n_features_ += plan.one_hot.size();
            } else {
                enc.n_features_ += 1;
            }
            enc.plans_.push_back(std::move(plan));
        }
        return enc;
    }

    std::size_t n_features() const { return n_features_; }

    // Position of a boolean (e.g. protected) column's single feature.
    std::size_t feature_position(const std::string& boolean_column) const {
        for (const ColumnPlan& p : plans_)
            if (p.name == boolean_column && p.kind != FeatureKind::Categorical) return p.offset;
        throw DataError("encoder: no boolean/numeric feature named " + boolean_column);
    }

    FeatureMatrix transform(const Dataset& ds) const {
        FeatureMatrix m;
        m.n_rows = ds.n_rows();
        m.n_cols = n_features_;
        m.values.assign(m.n_rows * m.n_cols, 0.0);
        std::size_t plan_i = 0;
        for (std::size_t c = 0; c < ds.n_cols(); ++c) {
            if (c == ds.class_column()) continue;
            if (plan_i >= plans_.size()) throw DataError("encoder: schema mismatch (extra columns)");
            const ColumnPlan& plan = plans_[plan_i++];
            const Column& col = ds.column(c);
            if (col.name != plan.name || col.kind != plan.kind)
                throw DataError("encoder: schema mismatch at column " + col.name);
            if (plan.kind == FeatureKind::Categorical) {
                for (std::size_t r = 0; r < m.n_rows; ++r) {
                    auto it = plan.one_hot.find(col.cat[r]);
                    if (it != plan.one_hot.end())
                        m.values[r * m.n_cols + plan.offset + it->second] = 1.0;
                    // unseen value: leave the block all zero
                }
            } else if (plan.kind == FeatureKind::Boolean) {
                for (std::size_t r = 0; r < m.n_rows; ++r)
                    m.values[r * m.n_cols + plan.offset] = static_cast<double>(col.cat[r]);
            } else {
                for (std::size_t r = 0; r < m.n_rows; ++r)
                    m.values[r * m.n_cols + plan.offset] = col.num[r];
            }
        }
        if (plan_i != plans_.size()) throw DataError("encoder: schema mismatch (missing columns)");
        return m;
    }

private:
    struct ColumnPlan {
        std::string name;
        FeatureKind kind = FeatureKind::Numeric;
        std::size_t offset = 0;
        std::map<std::int32_t, std::size_t> one_hot;  // categorical only
    };
    std::vector<ColumnPlan> plans_;
    std::size_t n_features_ = 0;
};

struct LogisticHyperparams {
    double learning_rate = 0.1;
    std::size_t iterations = 1000;
    double l2 = 1e-4;
    // Weights start at zero, so the seed does not influence the fit; it is
    // part of the interface so other learners can plug in uniformly.
    std::uint64_t seed = 0;
};

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// log(1 + e^x) without overflow.
inline double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

// Mean log-loss plus (l2/2)*||w||^2. Bias is not regularized.
inline double logistic_loss(const FeatureMatrix& x, std::span<const std::uint8_t> y,
                            std::span<const double> w, double bias, double l2) {
    double loss = 0.0;
    for (std::size_t r = 0; r < x.n_rows; ++r) {
        const auto row = x.row(r);
        double z = bias;
        for (std::size_t c = 0; c < x.n_cols; ++c) z += w[c] * row[c];
        loss += y[r] ? softplus(-z) : softplus(z);
    }
    loss /= static_cast<double>(x.n_rows);
    double reg = 0.0;
    for (double wi : w) reg += wi * wi;
    return loss + 0.5 * l2 * reg;
}

// Analytic gradient of logistic_loss. grad_w must have x.n_cols entries.
inline void logistic_gradient(const FeatureMatrix& x, std::span<const std::uint8_t> y,
                              std::span<const double> w, double bias, double l2,
                              std::span<double> grad_w, double& grad_bias) {
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    grad_bias = 0.0;
    for (std::size_t r = 0; r < x.n_rows; ++r) {
        const auto row = x.row(r);
        double z = bias;
        for (std::size_t c = 0; c < x.n_cols; ++c) z += w[c] * row[c];
        const double err = sigmoid(z) - static_cast<double>(y[r]);
        for (std::size_t c = 0; c < x.n_cols; ++c) grad_w[c] += err * row[c];
        grad_bias += err;
    }
    const double inv_n = 1.0 / static_cast<double>(x.n_rows);
    for (std::size_t c = 0; c < x.n_cols; ++c) grad_w[c] = grad_w[c] * inv_n + l2 * w[c];
    grad_bias *= inv_n;
}

// Full-batch gradient descent from zero weights. Optionally records the loss
// after every step.
inline void fit_weights(const FeatureMatrix& x, std::span<const std::uint8_t> y,
                        const LogisticHyperparams& hp, std::vector<double>& w, double& bias,
                        std::vector<double>* loss_trace = nullptr) {
    w.assign(x.n_cols, 0.0);
    bias = 0.0;
    std::vector<double> grad(x.n_cols);
    for (std::size_t it = 0; it < hp.iterations; ++it) {
        double grad_bias = 0.0;
        logistic_gradient(x, y, w, bias, hp.l2, grad, grad_bias);
        for (std::size_t c = 0; c < x.n_cols; ++c) w[c] -= hp.learning_rate * grad[c];
        bias -= hp.learning_rate * grad_bias;
        if (loss_trace) loss_trace->push_back(logistic_loss(x, y, w, bias, hp.l2));
        if (!std::isfinite(bias)) throw DataError("logistic: training diverged (non-finite parameters)");
    }
    if (!std::isfinite(logistic_loss(x, y, w, bias, hp.l2)))
        throw DataError("logistic: training diverged (non-finite loss)");
}

// Fitted logistic model: weight vector, bias, and the encoding map of the
// training fold.
class LogisticModel {
public:
    LogisticModel() = default;

    static LogisticModel fit(const Dataset& train, const LogisticHyperparams& hp = {}) {
        LogisticModel m;
        m.encoder_ = FeatureEncoder::fit(train);
        m.hp_ = hp;
        FeatureMatrix x = m.encoder_.transform(train);
        std::vector<std::uint8_t> y = class_bits(train);
        bool has0 = false, has1 = false;
        for (std::uint8_t b : y) (b ? has1 : has0) = true;
        if (!has0 || !has1) throw DataError("logistic: training data has a single class");
        fit_weights(x, y, hp, m.weights_, m.bias_);
        return m;
    }

    static std::vector<std::uint8_t> class_bits(const Dataset& ds) {
        std::vector<std::uint8_t> y(ds.n_rows());
        for (std::size_t r = 0; r < ds.n_rows(); ++r) y[r] = ds.class_bit(r);
        return y;
    }

    double decision(std::span<const double> features) const {
        double z = bias_;
        for (std::size_t c = 0; c < features.size(); ++c) z += weights_[c] * features[c];
        return z;
    }

    double predict_proba_row(std::span<const double> features) const { return sigmoid(decision(features)); }

    // Probability >= 0.5 predicts the favorable class.
    std::uint8_t predict_row(std::span<const double> features) const {
        return decision(features) >= 0.0 ? 1 : 0;
    }

    std::vector<std::uint8_t> predict(const FeatureMatrix& x) const {
        std::vector<std::uint8_t> out(x.n_rows);
        for (std::size_t r = 0; r < x.n_rows; ++r) out[r] = predict_row(x.row(r));
        return out;
    }

    std::vector<std::uint8_t> predict(const Dataset& rows) const {
        return predict(encoder_.transform(rows));
    }

    const std::vector<double>& weights() const { return weights_; }
    double bias() const { return bias_; }
    const FeatureEncoder& encoder() const { return encoder_; }
    const LogisticHyperparams& hyperparams() const { return hp_; }

private:
    std::vector<double> weights_;
    double bias_ = 0.0;
    FeatureEncoder encoder_;
    LogisticHyperparams hp_;
};

inline LogisticModel fit_logistic(const Dataset& train, const LogisticHyperparams& hp = {}) {
    return LogisticModel::fit(train, hp);
}

// Pluggable classifier surface used by the situation-testing module and the
// benchmark harness; future learners implement this.
class Classifier {
public:
    virtual ~Classifier() = default;
    virtual void fit(const Dataset& train) = 0;
    virtual std::vector<std::uint8_t> predict(const Dataset& rows) const = 0;
};

class LogisticRegression final : public Classifier {
public:
    explicit LogisticRegression(LogisticHyperparams hp = {}) : hp_(hp) {}

    void fit(const Dataset& train) override { model_ = LogisticModel::fit(train, hp_); }
    std::vector<std::uint8_t> predict(const Dataset& rows) const override { return model_.predict(rows); }

    const LogisticModel& model() const { return model_; }

private:
    LogisticHyperparams hp_;
    LogisticModel model_;
};

}  // namespace fairsmote
