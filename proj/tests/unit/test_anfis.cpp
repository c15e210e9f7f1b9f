#include <gtest/gtest.h>

#include "dermfuzz/anfis/model.hpp"
#include "dermfuzz/anfis/serialize.hpp"
#include "dermfuzz/anfis/trainers.hpp"
#include "dermfuzz/anfis/training.hpp"
#include "support.hpp"

using namespace dermfuzz;
using namespace testing_support;

namespace {

AnfisModel random_model(std::size_t n, std::size_t r, Rng& rng) {
    AnfisModel m(n, r);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m.center(i, j) = uniform(rng, -1, 1);
            m.set_sigma(i, j, uniform(rng, 0.6, 2.0));
            m.consequent(i, j) = uniform(rng, -0.5, 0.5);
        }
        m.bias(i) = uniform(rng, -1, 1);
    }
    return m;
}

TrainingSet random_training_set(std::size_t n, std::size_t count, Rng& rng) {
    TrainingSet t;
    t.dim = n;
    for (std::size_t k = 0; k < count; ++k) {
        for (std::size_t j = 0; j < n; ++j) t.x.push_back(uniform(rng, -1, 1));
        t.y.push_back(uniform01(rng) < 0.5 ? 0.0 : 1.0);
    }
    return t;
}

// Straight transcription of the Takagi-Sugeno formulas, written independently.
double forward_oracle(const AnfisModel& m, std::span<const double> x) {
    std::vector<double> w;
    double total = 0;
    for (std::size_t i = 0; i < m.n_rules(); ++i) {
        double prod = 1;
        for (std::size_t j = 0; j < m.n_inputs(); ++j) {
            const double z = (x[j] - m.center(i, j)) / m.sigma(i, j);
            prod *= std::exp(-0.5 * z * z);
        }
        w.push_back(prod);
        total += prod;
    }
    double out = 0;
    for (std::size_t i = 0; i < m.n_rules(); ++i) {
        double f = m.bias(i);
        for (std::size_t j = 0; j < m.n_inputs(); ++j) f += m.consequent(i, j) * x[j];
        out += w[i] / total * f;
    }
    return out;
}

}  // namespace

TEST(Forward, SingleRuleConstant) {
    AnfisModel m(13, 1);
    m.bias(0) = 0.37;
    Rng rng = make_stream(1, 1);
    for (int k = 0; k < 10; ++k) {
        std::vector<double> x(13);
        for (double& v : x) v = uniform(rng, -50, 50);
        EXPECT_DOUBLE_EQ(m.forward(x), 0.37);
    }
}

TEST(Forward, EqualRulesAverageBiases) {
    AnfisModel m(3, 2);
    m.bias(0) = 0.2;
    m.bias(1) = 0.9;
    EXPECT_DOUBLE_EQ(m.forward(std::vector<double>{0.3, -1, 2}), 0.55);
}

TEST(Forward, FarInputFallsBackToUniformFiring) {
    AnfisModel m(2, 2);
    m.set_sigma(0, 0, kSigmaMin);
    m.set_sigma(1, 0, kSigmaMin);
    m.bias(0) = 1.0;
    m.bias(1) = 3.0;
    const auto w = m.firing(std::vector<double>{100.0, 0.0});
    EXPECT_EQ(w[0], 0.5);
    EXPECT_EQ(w[1], 0.5);
    EXPECT_EQ(m.forward(std::vector<double>{100.0, 0.0}), 2.0);
}

TEST(Forward, MatchesIndependentImplementation) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Rng rng = make_stream(seed, 7);
        const std::size_t r = 1 + seed % 6;
        const AnfisModel m = random_model(13, r, rng);
        std::vector<double> x(13);
        for (double& v : x) v = uniform(rng, -1, 1);
        EXPECT_NEAR(m.forward(x), forward_oracle(m, x), 1e-12 * (1 + std::abs(forward_oracle(m, x))));
        double sum = 0;
        for (double w : m.firing(x)) sum += w;
        EXPECT_NEAR(sum, 1.0, 1e-12);
    }
}

TEST(Forward, RejectsWrongArity) {
    EXPECT_THROW(AnfisModel(13, 2).forward(std::vector<double>(12)), ArgumentError);
}

TEST(Predict, TieGoesToMelanoma) {
    EXPECT_EQ(classify_score(0.9), Label::melanoma);
    EXPECT_EQ(classify_score(0.1), Label::benign);
    EXPECT_EQ(classify_score(0.5), Label::melanoma);
    AnfisModel m(2, 1);
    m.bias(0) = 0.5;
    EXPECT_EQ(predict(m, std::vector<double>{0, 0}), Label::melanoma);
}

TEST(Loss, PerfectAndConstantOutputs) {
    AnfisModel m(1, 1);
    m.consequent(0, 0) = 1.0;
    TrainingSet t{1, {0.0, 1.0}, {0.0, 1.0}};
    EXPECT_EQ(loss(m, t), 0.0);
    AnfisModel half(1, 1);
    half.bias(0) = 0.5;
    EXPECT_DOUBLE_EQ(loss(half, t), 0.25);
}

TEST(Loss, MatchesOracleFold) {
    Rng rng = make_stream(3, 3);
    const AnfisModel m = random_model(13, 4, rng);
    const TrainingSet t = random_training_set(13, 50, rng);
    double sum = 0;
    for (std::size_t k = 0; k < t.count(); ++k) sum += std::pow(forward_oracle(m, t.row(k)) - t.y[k], 2);
    EXPECT_NEAR(loss(m, t), sum / 50, 1e-12);
}

TEST(Gradient, MatchesCentralDifferences) {
    const double h = 1e-5;
    for (std::uint64_t draw = 0; draw < 6; ++draw) {
        Rng rng = make_stream(draw, 13);
        const std::size_t r = std::array<std::size_t, 3>{1, 3, 10}[draw % 3];
        const AnfisModel m = random_model(13, r, rng);
        const TrainingSet t = random_training_set(13, 30, rng);
        const auto g = gradient(m, t);
        std::vector<double> p(m.flatten().begin(), m.flatten().end());
        for (std::size_t k = 0; k < p.size(); ++k) {
            auto at = [&](double delta) {
                auto q = p;
                q[k] += delta;
                return anfis_loss(m.shape(), q, t);
            };
            const double fd = (at(h) - at(-h)) / (2 * h);
            const double rel = std::abs(g[k] - fd) / std::max({std::abs(g[k]), std::abs(fd), 1e-6});
            ASSERT_LE(rel, 1e-4) << "draw " << draw << " coord " << k << " analytic " << g[k] << " fd " << fd;
        }
    }
}

TEST(Gradient, ZeroAtExactInterpolant) {
    AnfisModel m(2, 3);
    Rng rng = make_stream(5, 5);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            m.center(i, j) = uniform(rng, -1, 1);
            m.consequent(i, j) = 0.25 * (j + 1);
        }
    for (std::size_t i = 0; i < 3; ++i) m.bias(i) = 0.1;
    TrainingSet t;
    t.dim = 2;
    for (int k = 0; k < 20; ++k) {
        const double a = uniform(rng, -1, 1), b = uniform(rng, -1, 1);
        t.x.insert(t.x.end(), {a, b});
        t.y.push_back(0.1 + 0.25 * a + 0.5 * b);
    }
    EXPECT_LT(loss(m, t), 1e-25);
    for (double v : gradient(m, t)) EXPECT_NEAR(v, 0.0, 1e-10);
}

TEST(Gradient, BiasComponentIsMeanResidualTimesFiring) {
    Rng rng = make_stream(6, 6);
    const AnfisModel m = random_model(4, 3, rng);
    const TrainingSet t = random_training_set(4, 25, rng);
    const auto g = gradient(m, t);
    for (std::size_t i = 0; i < 3; ++i) {
        double expect = 0;
        for (std::size_t k = 0; k < t.count(); ++k)
            expect += 2 * (m.forward(t.row(k)) - t.y[k]) * m.firing(t.row(k))[i];
        expect /= double(t.count());
        EXPECT_NEAR(g[m.shape().consequents_offset() + i * 5 + 4], expect, 1e-12);
    }
}

TEST(TrainGradient, ZeroIterationsIsIdentity) {
    Rng rng = make_stream(7, 7);
    const AnfisModel m = random_model(3, 2, rng);
    const TrainingSet t = random_training_set(3, 10, rng);
    const auto r = train_gradient(m, t, 0.1, 0);
    EXPECT_EQ(r.model, m);
    ASSERT_EQ(r.loss_history.size(), 1u);
    EXPECT_EQ(r.loss_history[0], loss(m, t));
}

TEST(TrainGradient, FitsParabola) {
    TrainingSet t;
    t.dim = 1;
    for (int k = 0; k <= 40; ++k) {
        const double x = -1.0 + k / 20.0;
        t.x.push_back(x);
        t.y.push_back(x * x);
    }
    const AnfisModel init = new_model(1, 4, t, 1);
    const auto r = train_gradient(init, t, 0.05, 2000);
    EXPECT_EQ(r.loss_history.size(), 2001u);
    EXPECT_LT(std::sqrt(r.loss_history.back()), 0.05);
}

TEST(TrainGradient, ConsequentOnlyDescentIsMonotone) {
    Rng rng = make_stream(8, 8);
    const AnfisModel m = random_model(5, 3, rng);
    const TrainingSet t = random_training_set(5, 40, rng);
    const auto r = train_gradient(m, t, 0.05, 200, false);
    for (std::size_t i = 1; i < r.loss_history.size(); ++i) EXPECT_LE(r.loss_history[i], r.loss_history[i - 1]);
    for (std::size_t k = 0; k < m.shape().consequents_offset(); ++k) EXPECT_EQ(r.model.flatten()[k], m.flatten()[k]);
}

TEST(TrainGradient, HugeRateDiverges) {
    Rng rng = make_stream(9, 9);
    const AnfisModel m = random_model(3, 2, rng);
    TrainingSet t = random_training_set(3, 10, rng);
    for (double& v : t.x) v *= 1e4;
    EXPECT_THROW(train_gradient(m, t, 1e6, 50), TrainingDivergedError);
}

TEST(NewModel, SingleRuleIsMeanAndStd) {
    const auto rows = blob_dataset(15, 2);
    const TrainingSet t = to_training_set(rows);
    const AnfisModel m = new_model(13, 1, t, 4);
    for (std::size_t j = 0; j < 13; ++j) {
        double mean = 0, var = 0;
        for (const auto& r : rows) mean += r.values[j];
        mean /= double(rows.size());
        for (const auto& r : rows) var += (r.values[j] - mean) * (r.values[j] - mean);
        EXPECT_NEAR(m.center(0, j), mean, 1e-12);
        EXPECT_NEAR(m.sigma(0, j), std::sqrt(var / double(rows.size())), 1e-12);
    }
    EXPECT_NEAR(m.bias(0), 0.5, 1e-15);
}

TEST(NewModel, DeterministicAndClassAligned) {
    const auto rows = blob_dataset(30, 3, 6.0);
    const TrainingSet t = to_training_set(rows);
    EXPECT_EQ(new_model(13, 2, t, 9), new_model(13, 2, t, 9));
    const AnfisModel m = new_model(13, 2, t, 9);
    std::array<std::array<double, 13>, 2> means{};
    for (const auto& r : rows)
        for (std::size_t j = 0; j < 13; ++j) means[*r.label == Label::melanoma][j] += r.values[j] / 30.0;
    for (int cls = 0; cls < 2; ++cls) {
        std::array<double, 2> d{};
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 13; ++j) d[i] += std::pow(m.center(i, j) - means[cls][j], 2);
        const std::size_t nearest = d[0] < d[1] ? 0 : 1;
        EXPECT_NEAR(m.bias(nearest), cls, 1e-12);
    }
    EXPECT_THROW(new_model(13, 61, t, 0), ArgumentError);
}

TEST(Serialize, JsonRoundTripIsExact) {
    Rng rng = make_stream(10, 10);
    const AnfisModel m = random_model(13, 4, rng);
    FeatureScaling s;
    for (std::size_t j = 0; j < 13; ++j) {
        s.mean[j] = uniform(rng, -5, 5);
        s.std[j] = uniform(rng, 0.1, 3);
    }
    const auto dir = scratch_dir("model_json");
    save_model({m, s}, dir / "m.json");
    const ModelBundle back = load_model(dir / "m.json");
    EXPECT_EQ(back.model, m);
    ASSERT_TRUE(back.scaling.has_value());
    EXPECT_EQ(back.scaling->mean, s.mean);
    EXPECT_EQ(back.scaling->std, s.std);

    const auto doc = model_to_json({m, s});
    for (const char* key : {"format_version", "n_inputs", "n_rules", "centers", "sigmas", "consequents",
                            "feature_means", "feature_stds", "feature_order"})
        EXPECT_TRUE(doc.contains(key)) << key;
}

TEST(Serialize, RejectsBadDocuments) {
    auto doc = model_to_json({AnfisModel(2, 1), std::nullopt});
    auto bad_version = doc;
    bad_version["format_version"] = 99;
    EXPECT_THROW(model_from_json(bad_version), FormatError);
    auto bad_sigma = doc;
    bad_sigma["sigmas"][0][0] = 0.0;
    EXPECT_THROW(model_from_json(bad_sigma), FormatError);
    doc.erase("centers");
    EXPECT_THROW(model_from_json(doc), FormatError);
}

TEST(Trainers, AllMethodsImproveOnSeparableData) {
    const auto rows = blob_dataset(40, 5);
    const Standardized s = standardize(rows, {});
    const TrainingSet t = to_training_set(s.train);
    const AnfisModel init = new_model(13, 3, t, 1);
    TrainerConfig cfg;
    cfg.ica.population = 40;
    cfg.ica.iterations = 30;
    cfg.aco.iterations = 30;
    cfg.gd.iterations = 30;
    for (Method method : {Method::ica_anfis, Method::gd_anfis, Method::aco_anfis}) {
        const TrainedModel r = train_method(method, init, t, cfg, 3);
        EXPECT_EQ(r.history.size(), 31u);
        EXPECT_LE(r.history.back(), r.history.front()) << method_name(method);
        EXPECT_NEAR(loss(r.model, t), r.history.back(), 1e-12) << method_name(method);
        const TrainedModel again = train_method(method, init, t, cfg, 3);
        EXPECT_EQ(again.model, r.model);
    }
    EXPECT_EQ(parse_method("ica"), Method::ica_anfis);
    EXPECT_EQ(parse_method("gd_anfis"), Method::gd_anfis);
    EXPECT_THROW(parse_method("svm"), ArgumentError);
}
