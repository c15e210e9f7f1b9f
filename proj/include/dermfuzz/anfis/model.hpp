#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dermfuzz/core/error.hpp"
#include "dermfuzz/features/feature_vector.hpp"
#include "dermfuzz/segmentation/kmeans.hpp"

namespace dermfuzz {

inline constexpr double kSigmaMin = 1e-3;
/// Below this total firing strength every rule fires with weight 1/R.
inline constexpr double kFiringFloor = 1e-300;

/// Flat real-valued regression data: `x` is row-major count() x dim.
struct TrainingSet {
    std::size_t dim = 0;
    std::vector<double> x;
    std::vector<double> y;

    std::size_t count() const noexcept { return y.size(); }
    std::span<const double> row(std::size_t i) const { return std::span<const double>(x).subspan(i * dim, dim); }
};

/// Target coding: benign -> 0, melanoma -> 1. Every vector must carry a label.
inline double target_of(Label l) { return l == Label::melanoma ? 1.0 : 0.0; }

inline TrainingSet to_training_set(const std::vector<FeatureVector>& rows) {
    TrainingSet t;
    t.dim = kFeatureCount;
    t.x.reserve(rows.size() * kFeatureCount);
    t.y.reserve(rows.size());
    for (const auto& r : rows) {
        if (!r.label) throw ArgumentError("training data requires labeled feature vectors");
        t.x.insert(t.x.end(), r.values.begin(), r.values.end());
        t.y.push_back(target_of(*r.label));
    }
    return t;
}

/// Shape of a first-order Takagi-Sugeno model with Gaussian memberships. Parameters
/// live in one flat vector: centers (R x n), then sigmas (R x n), then consequents
/// (R x (n+1), linear weights followed by the bias).
struct AnfisShape {
    std::size_t n_inputs = 0;
    std::size_t n_rules = 0;

    std::size_t premise_block() const noexcept { return n_rules * n_inputs; }
    std::size_t centers_offset() const noexcept { return 0; }
    std::size_t sigmas_offset() const noexcept { return premise_block(); }
    std::size_t consequents_offset() const noexcept { return 2 * premise_block(); }
    std::size_t param_count() const noexcept { return n_rules * (2 * n_inputs) + n_rules * (n_inputs + 1); }

    friend bool operator==(const AnfisShape&, const AnfisShape&) = default;
};

namespace detail {

// Normalized firing strengths into `wbar` and the rule outputs into `f`; returns the
// model output. `inv2s2` holds 1 / (2 sigma^2) per premise parameter.
inline double anfis_eval(const AnfisShape& s, std::span<const double> p, std::span<const double> inv2s2,
                         std::span<const double> x, double* w, double* f) {
    const std::size_t n = s.n_inputs;
    const double* c = p.data() + s.centers_offset();
    const double* q = p.data() + s.consequents_offset();
    double total = 0.0;
    for (std::size_t i = 0; i < s.n_rules; ++i) {
        double e = 0.0;
        const double* ci = c + i * n;
        const double* ki = inv2s2.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            const double d = x[j] - ci[j];
            e += d * d * ki[j];
        }
        w[i] = std::exp(-e);
        total += w[i];
        const double* qi = q + i * (n + 1);
        double fi = qi[n];
        for (std::size_t j = 0; j < n; ++j) fi += qi[j] * x[j];
        f[i] = fi;
    }
    const double R = static_cast<double>(s.n_rules);
    double out = 0.0;
    if (total < kFiringFloor) {
        for (std::size_t i = 0; i < s.n_rules; ++i) {
            w[i] = 1.0 / R;
            out += w[i] * f[i];
        }
    } else {
        for (std::size_t i = 0; i < s.n_rules; ++i) {
            w[i] /= total;
            out += w[i] * f[i];
        }
    }
    return out;
}

inline std::vector<double> inverse_two_sigma_sq(const AnfisShape& s, std::span<const double> p) {
    std::vector<double> inv(s.premise_block());
    const double* sig = p.data() + s.sigmas_offset();
    for (std::size_t k = 0; k < inv.size(); ++k) inv[k] = 1.0 / (2.0 * sig[k] * sig[k]);
    return inv;
}

}  // namespace detail

/// Mean squared error of the model held in `params` over `data`, accumulated in
/// index order. This is the fitness every trainer minimizes.
inline double anfis_loss(const AnfisShape& s, std::span<const double> params, const TrainingSet& data) {
    if (data.count() == 0) throw ArgumentError("loss: empty data");
    const auto inv = detail::inverse_two_sigma_sq(s, params);
    std::vector<double> w(s.n_rules), f(s.n_rules);
    double sum = 0.0;
    for (std::size_t k = 0; k < data.count(); ++k) {
        const double e = detail::anfis_eval(s, params, inv, data.row(k), w.data(), f.data()) - data.y[k];
        sum += e * e;
    }
    return sum / static_cast<double>(data.count());
}

class AnfisModel {
public:
    AnfisModel(std::size_t n_inputs, std::size_t n_rules)
        : shape_{n_inputs, n_rules}, params_(shape_.param_count(), 0.0) {
        if (n_inputs == 0 || n_rules == 0) throw ArgumentError("AnfisModel: n_inputs and n_rules must be >= 1");
        std::fill(params_.begin() + static_cast<std::ptrdiff_t>(shape_.sigmas_offset()),
                  params_.begin() + static_cast<std::ptrdiff_t>(shape_.consequents_offset()), 1.0);
    }

    /// Rebuilds a model from a flat vector in canonical order.
    static AnfisModel unflatten(std::size_t n_inputs, std::size_t n_rules, std::span<const double> params) {
        AnfisModel m(n_inputs, n_rules);
        if (params.size() != m.shape_.param_count())
            throw ArgumentError("unflatten: expected " + std::to_string(m.shape_.param_count()) + " parameters, got " +
                                std::to_string(params.size()));
        for (std::size_t k = 0; k < params.size(); ++k) {
            if (!std::isfinite(params[k])) throw ArgumentError("unflatten: non-finite parameter");
            if (k >= m.shape_.sigmas_offset() && k < m.shape_.consequents_offset() && params[k] < kSigmaMin)
                throw ArgumentError("unflatten: sigma below the minimum");
        }
        m.params_.assign(params.begin(), params.end());
        return m;
    }

    const AnfisShape& shape() const noexcept { return shape_; }
    std::size_t n_inputs() const noexcept { return shape_.n_inputs; }
    std::size_t n_rules() const noexcept { return shape_.n_rules; }
    std::size_t param_count() const noexcept { return params_.size(); }

    std::span<const double> flatten() const noexcept { return params_; }

    double center(std::size_t rule, std::size_t input) const { return params_[rule * n_inputs() + input]; }
    double& center(std::size_t rule, std::size_t input) { return params_[rule * n_inputs() + input]; }
    double sigma(std::size_t rule, std::size_t input) const {
        return params_[shape_.sigmas_offset() + rule * n_inputs() + input];
    }
    /// Setter clamps at kSigmaMin.
    void set_sigma(std::size_t rule, std::size_t input, double v) {
        params_[shape_.sigmas_offset() + rule * n_inputs() + input] = std::max(v, kSigmaMin);
    }
    /// Linear weight `input` of a rule's consequent; input == n_inputs is the bias.
    double consequent(std::size_t rule, std::size_t input) const {
        return params_[shape_.consequents_offset() + rule * (n_inputs() + 1) + input];
    }
    double& consequent(std::size_t rule, std::size_t input) {
        return params_[shape_.consequents_offset() + rule * (n_inputs() + 1) + input];
    }
    double bias(std::size_t rule) const { return consequent(rule, n_inputs()); }
    double& bias(std::size_t rule) { return consequent(rule, n_inputs()); }

    /// Normalized firing strengths for one input.
    std::vector<double> firing(std::span<const double> x) const {
        check_input(x);
        const auto inv = detail::inverse_two_sigma_sq(shape_, params_);
        std::vector<double> w(n_rules()), f(n_rules());
        detail::anfis_eval(shape_, params_, inv, x, w.data(), f.data());
        return w;
    }

    double forward(std::span<const double> x) const {
        check_input(x);
        const auto inv = detail::inverse_two_sigma_sq(shape_, params_);
        std::vector<double> w(n_rules()), f(n_rules());
        return detail::anfis_eval(shape_, params_, inv, x, w.data(), f.data());
    }

    double forward(const FeatureVector& fv) const { return forward(std::span<const double>(fv.values)); }

    friend bool operator==(const AnfisModel&, const AnfisModel&) = default;

private:
    void check_input(std::span<const double> x) const {
        if (x.size() != n_inputs())
            throw ArgumentError("forward: expected " + std::to_string(n_inputs()) + " inputs, got " +
                                std::to_string(x.size()));
    }

    AnfisShape shape_;
    std::vector<double> params_;
};

/// Class 2 iff the score reaches 0.5; a tie goes to melanoma.
inline Label classify_score(double score) { return score >= 0.5 ? Label::melanoma : Label::benign; }

inline Label predict(const AnfisModel& m, std::span<const double> x) { return classify_score(m.forward(x)); }
inline Label predict(const AnfisModel& m, const FeatureVector& fv) { return classify_score(m.forward(fv)); }

inline double loss(const AnfisModel& m, const TrainingSet& data) {
    if (data.dim != m.n_inputs()) throw ArgumentError("loss: data dimension does not match the model");
    return anfis_loss(m.shape(), m.flatten(), data);
}

/// Analytic gradient of `loss` with respect to every parameter, in flatten order.
inline std::vector<double> gradient(const AnfisModel& m, const TrainingSet& data) {
    if (data.count() == 0) throw ArgumentError("gradient: empty data");
    if (data.dim != m.n_inputs()) throw ArgumentError("gradient: data dimension does not match the model");
    const AnfisShape& s = m.shape();
    const std::size_t n = s.n_inputs;
    const auto p = m.flatten();
    const auto inv = detail::inverse_two_sigma_sq(s, p);
    std::vector<double> g(p.size(), 0.0);
    std::vector<double> w(s.n_rules), f(s.n_rules);
    const double scale = 2.0 / static_cast<double>(data.count());
    for (std::size_t k = 0; k < data.count(); ++k) {
        const auto x = data.row(k);
        // Detect the uniform-firing fallback, where premises have no influence.
        double total = 0.0;
        const double yhat = detail::anfis_eval(s, p, inv, x, w.data(), f.data());
        for (std::size_t i = 0; i < s.n_rules; ++i) {
            double e = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double d = x[j] - p[i * n + j];
                e += d * d * inv[i * n + j];
            }
            total += std::exp(-e);
        }
        const bool fallback = total < kFiringFloor;
        const double dl = scale * (yhat - data.y[k]);
        for (std::size_t i = 0; i < s.n_rules; ++i) {
            double* gq = g.data() + s.consequents_offset() + i * (n + 1);
            for (std::size_t j = 0; j < n; ++j) gq[j] += dl * w[i] * x[j];
            gq[n] += dl * w[i];
            if (fallback) continue;
            const double common = dl * w[i] * (f[i] - yhat);
            for (std::size_t j = 0; j < n; ++j) {
                const double sig = p[s.sigmas_offset() + i * n + j];
                const double d = x[j] - p[i * n + j];
                const double t = d / (sig * sig);
                g[i * n + j] += common * t;
                g[s.sigmas_offset() + i * n + j] += common * t * d / sig;
            }
        }
    }
    return g;
}

/// Clustering-based initialization: one rule per k-means center of the training
/// inputs, every sigma set to that feature's training std (at least kSigmaMin),
/// zero linear weights and each bias set to the mean target of its cluster.
inline AnfisModel new_model(std::size_t n_inputs, std::size_t n_rules, const TrainingSet& train, std::uint64_t seed) {
    if (n_rules == 0) throw ArgumentError("new_model: n_rules must be >= 1");
    if (train.count() == 0) throw ArgumentError("new_model: empty training set");
    if (train.dim != n_inputs) throw ArgumentError("new_model: training data dimension mismatch");
    if (n_rules > train.count()) throw ArgumentError("new_model: more rules than training samples");

    const KMeansResult km = kmeans(SampleView{train.x, train.dim}, n_rules, 100, seed);
    AnfisModel m(n_inputs, n_rules);
    std::vector<double> mean(n_inputs, 0.0), sd(n_inputs, 0.0);
    const double count = static_cast<double>(train.count());
    for (std::size_t k = 0; k < train.count(); ++k)
        for (std::size_t j = 0; j < n_inputs; ++j) mean[j] += train.row(k)[j];
    for (auto& v : mean) v /= count;
    for (std::size_t k = 0; k < train.count(); ++k)
        for (std::size_t j = 0; j < n_inputs; ++j) {
            const double d = train.row(k)[j] - mean[j];
            sd[j] += d * d;
        }
    for (auto& v : sd) v = std::sqrt(v / count);

    std::vector<double> target_sum(n_rules, 0.0);
    std::vector<std::size_t> members(n_rules, 0);
    for (std::size_t k = 0; k < train.count(); ++k) {
        target_sum[km.assignments[k]] += train.y[k];
        ++members[km.assignments[k]];
    }
    for (std::size_t i = 0; i < n_rules; ++i) {
        for (std::size_t j = 0; j < n_inputs; ++j) {
            m.center(i, j) = km.centroids[i][j];
            m.set_sigma(i, j, sd[j]);
        }
        m.bias(i) = members[i] ? target_sum[i] / static_cast<double>(members[i]) : 0.0;
    }
    return m;
}

}  // namespace dermfuzz
