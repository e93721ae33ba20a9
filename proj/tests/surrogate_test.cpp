#include "electrify/surrogate.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <random>

#include "test_util.hpp"

using namespace electrify;
using namespace electrify::surrogate;

namespace {

ScenarioDistributions milan() {
    static const std::vector<double> monthly{2.5, 4.7, 9.3, 13.3, 17.7, 21.9, 24.4, 23.6, 19.4, 13.8, 7.9, 3.4};
    ScenarioDistributions d;
    d.passenger_max = 40;
    d.temp_mixture = ScenarioDistributions::monthly_mixture(monthly, 3.0);
    d.grade_source = {-0.01, -0.004, 0.0, 0.0, 0.003, 0.012};
    return d;
}

// Random design with zero-mean columns.
Matrix centered_design(std::size_t n, std::size_t p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0, 1);
    Matrix X(n, p);
    for (std::size_t c = 0; c < p; ++c) {
        auto col = X.column(c);
        double mean = 0;
        for (double& x : col) mean += (x = nd(rng));
        mean /= static_cast<double>(n);
        for (double& x : col) x -= mean;
    }
    return X;
}

Eigen::MatrixXd to_eigen(const Matrix& X) {
    Eigen::MatrixXd out(X.rows(), X.cols());
    for (std::size_t r = 0; r < X.rows(); ++r)
        for (std::size_t c = 0; c < X.cols(); ++c) out(r, c) = X(r, c);
    return out;
}

}  // namespace

TEST(Sampling, CountAndDeterminism) {
    auto a = sample_scenarios(milan(), 500, 11);
    auto b = sample_scenarios(milan(), 500, 11);
    auto c = sample_scenarios(milan(), 500, 12);
    EXPECT_EQ(a.size(), 500u);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    auto grades = milan().grade_source;
    for (const auto& s : a) {
        EXPECT_GE(s.passengers, 0);
        EXPECT_LE(s.passengers, 40);
        EXPECT_EQ(s.passengers, std::floor(s.passengers));
        EXPECT_NE(std::find(grades.begin(), grades.end(), s.grade_rad), grades.end());
    }
}

TEST(Sampling, ZeroPassengerMax) {
    auto d = milan();
    d.passenger_max = 0;
    for (const auto& s : sample_scenarios(d, 200, 1)) EXPECT_EQ(s.passengers, 0);
}

TEST(Sampling, SingleComponentMean) {
    ScenarioDistributions d;
    d.temp_mixture = {TempComponent{15.0, 4.0, 1.0}};
    d.grade_source = {0.0};
    const std::size_t n = 20000;
    double sum = 0;
    for (const auto& s : sample_scenarios(d, n, 5)) sum += s.ambient_temp_c;
    EXPECT_NEAR(sum / n, 15.0, 3 * 4.0 / std::sqrt(double(n)));
}

TEST(Sampling, Errors) {
    auto d = milan();
    d.grade_source.clear();
    try {
        sample_scenarios(d, 10, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::EmptyGradeSource);
    }
    EXPECT_THROW(sample_scenarios(milan(), 0, 0), Error);
    auto w = milan();
    w.temp_mixture[0].weight = 0.5;
    EXPECT_THROW(sample_scenarios(w, 10, 0), Error);
}

TEST(Features, MonomialCount) {
    EXPECT_EQ(monomial_exponents(6).size(), 83u);
    EXPECT_EQ(monomial_exponents(1).size(), 3u);
    EXPECT_EQ(monomial_exponents(2).size(), 9u);
    for (const auto& e : monomial_exponents(6)) {
        int d = e[0] + e[1] + e[2];
        EXPECT_GE(d, 1);
        EXPECT_LE(d, 6);
    }
}

TEST(Features, StandardizationRoundTrip) {
    auto samples = sample_scenarios(milan(), 300, 2);
    auto fs = build_features(samples, 3);
    for (std::size_t c = 0; c < fs.design.cols(); ++c) {
        double mean = 0, sq = 0;
        for (double x : fs.design.column(c)) mean += x, sq += x * x;
        EXPECT_NEAR(mean / 300, 0.0, 1e-12);
        EXPECT_NEAR(sq / 300, 1.0, 1e-9);
        for (std::size_t i = 0; i < samples.size(); ++i) {
            double raw = monomial(samples[i], fs.exponents[c]);
            double back = fs.design(i, c) * fs.standardization.scale[c] + fs.standardization.mean[c];
            EXPECT_NEAR(back, raw, 1e-12 * std::max(1.0, std::abs(raw)));
        }
    }
}

TEST(Features, ZeroVarianceColumnStaysZero) {
    auto d = milan();
    d.passenger_max = 0;
    auto samples = sample_scenarios(d, 100, 4);
    auto fs = build_features(samples, 2);
    std::vector<double> y;
    for (const auto& s : samples) y.push_back(0.3 + 0.01 * s.ambient_temp_c);
    for (std::size_t c = 0; c < fs.exponents.size(); ++c) {
        EXPECT_EQ(fs.standardization.constant[c], fs.exponents[c][0] > 0);
    }
    ElasticNetConfig cfg;
    cfg.test_fraction = 0;
    auto m = fit_elastic_net(fs, y, cfg);
    for (std::size_t c = 0; c < fs.exponents.size(); ++c) {
        if (fs.exponents[c][0] > 0) EXPECT_EQ(m.coefficients[c], 0.0);
    }
    for (double v : m.coefficients) EXPECT_TRUE(std::isfinite(v));
}

TEST(ElasticNet, RecoversLinearModelWithoutPenalty) {
    const std::size_t n = 200, p = 4;
    auto X = centered_design(n, p, 8);
    std::vector<double> truth{1.5, -2.0, 0.25, 0.0};
    std::vector<double> y(n, 0.7);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < p; ++c) y[i] += truth[c] * X(i, c);
    ElasticNetConfig cfg;
    cfg.l1_weight = cfg.l2_weight = 0;
    cfg.tolerance = 1e-13;
    auto fit = coordinate_descent(X, y, cfg);
    EXPECT_NEAR(fit.intercept, 0.7, 1e-8);
    for (std::size_t c = 0; c < p; ++c) EXPECT_NEAR(fit.coefficients[c], truth[c], 1e-8);
    std::vector<double> pred(n, fit.intercept);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < p; ++c) pred[i] += fit.coefficients[c] * X(i, c);
    EXPECT_LT(rmse(pred, y), 1e-10);
}

TEST(ElasticNet, LargeL1ZeroesEverything) {
    auto X = centered_design(120, 5, 9);
    std::vector<double> y;
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd(3, 1);
    for (std::size_t i = 0; i < 120; ++i) y.push_back(nd(rng) + X(i, 0));
    ElasticNetConfig cfg;
    cfg.l1_weight = 100;
    auto fit = coordinate_descent(X, y, cfg);
    for (double w : fit.coefficients) EXPECT_EQ(w, 0.0);
    double mean = std::accumulate(y.begin(), y.end(), 0.0) / 120;
    EXPECT_NEAR(fit.intercept, mean, 1e-12);
}

TEST(ElasticNet, RidgeMatchesNormalEquations) {
    const std::size_t n = 300, p = 6;
    auto X = centered_design(n, p, 10);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> nd(0, 0.3);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = 2 + X(i, 0) - 0.5 * X(i, 3) + nd(rng);
    for (double l2 : {0.0, 0.01, 0.5}) {
        ElasticNetConfig cfg;
        cfg.l1_weight = 0;
        cfg.l2_weight = l2;
        cfg.tolerance = 1e-12;
        auto fit = coordinate_descent(X, y, cfg);

        Eigen::MatrixXd E = to_eigen(X);
        Eigen::VectorXd yv = Eigen::Map<Eigen::VectorXd>(y.data(), n);
        const double ybar = yv.mean();
        Eigen::MatrixXd A = E.transpose() * E / double(n) + l2 * Eigen::MatrixXd::Identity(p, p);
        Eigen::VectorXd rhs = E.transpose() * (yv.array() - ybar).matrix() / double(n);
        Eigen::VectorXd w = A.ldlt().solve(rhs);
        EXPECT_NEAR(fit.intercept, ybar, 1e-6);
        for (std::size_t c = 0; c < p; ++c) EXPECT_NEAR(fit.coefficients[c], w(c), 1e-6) << "l2=" << l2;
    }
}

TEST(ElasticNet, ObjectiveNeverIncreases) {
    auto samples = sample_scenarios(milan(), 400, 3);
    auto fs = build_features(samples, 4);
    std::vector<double> y;
    for (const auto& s : samples) y.push_back(0.9 + 0.004 * s.passengers + 0.0003 * std::pow(s.ambient_temp_c - 18, 2));
    ElasticNetConfig cfg;
    auto fit = coordinate_descent(fs.design, y, cfg, fs.standardization.constant);
    ASSERT_GE(fit.objective_history.size(), 2u);
    for (std::size_t i = 1; i < fit.objective_history.size(); ++i) {
        EXPECT_LE(fit.objective_history[i], fit.objective_history[i - 1] + 1e-12);
    }
    EXPECT_NEAR(fit.objective_history.back(),
                elastic_net_objective(fs.design, y, fit.intercept, fit.coefficients, cfg.l1_weight, cfg.l2_weight),
                1e-12);
}

TEST(ElasticNet, NonConvergenceIsReported) {
    auto samples = sample_scenarios(milan(), 200, 3);
    auto fs = build_features(samples, 6);
    std::vector<double> y;
    for (const auto& s : samples) y.push_back(std::sin(s.ambient_temp_c) + s.passengers * 0.01);
    ElasticNetConfig cfg;
    cfg.max_iterations = 2;
    cfg.tolerance = 1e-14;
    try {
        coordinate_descent(fs.design, y, cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::NonConvergence);
    }
    cfg.l1_weight = -1;
    EXPECT_THROW(coordinate_descent(fs.design, y, cfg), Error);
}

TEST(Split, SizesAndDisjoint) {
    auto [train, test] = train_test_split(100, 0.2, 4);
    EXPECT_EQ(train.size(), 80u);
    EXPECT_EQ(test.size(), 20u);
    std::vector<std::size_t> all(train);
    all.insert(all.end(), test.begin(), test.end());
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(all[i], i);
    EXPECT_EQ(train_test_split(100, 0.2, 4), train_test_split(100, 0.2, 4));
}

class TrainedSurrogate : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        PhysicsSetup setup;
        setup.cycle = drive::load_drive_cycle(testutil::data_dir() / "cycles" / "synthetic_stop_and_go.csv");
        ElasticNetConfig cfg;
        cfg.seed = 7;
        result_ = new TrainingResult(train_surrogate(setup, milan(), 1000, cfg));
    }
    static void TearDownTestSuite() { delete result_; }
    static TrainingResult* result_;
};
TrainingResult* TrainedSurrogate::result_ = nullptr;

TEST_F(TrainedSurrogate, FitsPhysics) {
    const auto& m = result_->model;
    ASSERT_TRUE(m.fitted());
    ASSERT_TRUE(m.test_rmse.has_value());
    double mean_abs = 0;
    for (double t : result_->targets) mean_abs += std::abs(t);
    mean_abs /= result_->targets.size();
    EXPECT_LE(*m.test_rmse, 0.05 * mean_abs);
    auto pred = predict_batch(m, result_->samples);
    EXPECT_LE(rmse(pred, result_->targets), 0.05 * mean_abs);
}

TEST_F(TrainedSurrogate, BatchPredictionIsFastAndDeterministic) {
    auto queries = sample_scenarios(milan(), 10000, 99);
    auto t0 = std::chrono::steady_clock::now();
    auto a = predict_batch(result_->model, queries);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_LT(secs, 1.0);
    EXPECT_EQ(a, predict_batch(result_->model, queries));
    for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(a[i], predict(result_->model, queries[i]));
}
