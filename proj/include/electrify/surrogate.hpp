#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "electrify/drive.hpp"
#include "electrify/error.hpp"

namespace electrify::surrogate {

struct ScenarioSample {
    double passengers = 0;
    double ambient_temp_c = 0;
    double grade_rad = 0;

    bool operator==(const ScenarioSample&) const = default;
};

struct TempComponent {
    double mean_c = 0;
    double stddev_c = 1;
    double weight = 1;
};

struct ScenarioDistributions {
    int passenger_max = 40;
    std::vector<TempComponent> temp_mixture;
    std::vector<double> grade_source;

    // Equal-weight mixture with one component per monthly mean temperature.
    static std::vector<TempComponent> monthly_mixture(std::span<const double> monthly_means_c, double stddev_c) {
        std::vector<TempComponent> out;
        for (double m : monthly_means_c) {
            out.push_back(TempComponent{m, stddev_c, 1.0 / static_cast<double>(monthly_means_c.size())});
        }
        return out;
    }
};

inline void validate(const ScenarioDistributions& d) {
    if (d.passenger_max < 0) throw Error(ErrorCategory::InvalidParameter, "passenger_max must be >= 0");
    if (d.temp_mixture.empty()) throw Error(ErrorCategory::InvalidParameter, "temperature mixture is empty");
    double total = 0;
    for (const auto& c : d.temp_mixture) {
        if (!(c.stddev_c > 0)) throw Error(ErrorCategory::InvalidParameter, "mixture stddev must be > 0");
        if (!(c.weight >= 0)) throw Error(ErrorCategory::InvalidParameter, "mixture weight must be >= 0");
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw Error(ErrorCategory::InvalidParameter, "mixture weights must sum to 1");
    }
}

// Draws scenarios: passengers uniform over {0..passenger_max}, temperature from
// the Gaussian mixture, grade uniformly from the empirical grade list.
inline std::vector<ScenarioSample> sample_scenarios(const ScenarioDistributions& dists, std::size_t n,
                                                    std::uint64_t seed) {
    if (n < 1) throw Error(ErrorCategory::InvalidParameter, "sample count must be >= 1");
    if (dists.grade_source.empty()) throw Error(ErrorCategory::EmptyGradeSource, "no grades to sample from");
    validate(dists);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> passengers(0, dists.passenger_max);
    std::vector<double> weights;
    for (const auto& c : dists.temp_mixture) weights.push_back(c.weight);
    std::discrete_distribution<std::size_t> component(weights.begin(), weights.end());
    std::normal_distribution<double> standard_normal(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> grade_index(0, dists.grade_source.size() - 1);

    std::vector<ScenarioSample> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        ScenarioSample s;
        s.passengers = passengers(rng);
        const auto& c = dists.temp_mixture[component(rng)];
        s.ambient_temp_c = c.mean_c + c.stddev_c * standard_normal(rng);
        s.grade_rad = dists.grade_source[grade_index(rng)];
        out.push_back(s);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Polynomial features

using Exponents = std::array<int, 3>;  // powers of (passengers, temperature, grade)

// All monomials of total degree 1..degree, by increasing degree and then by
// decreasing passenger power, decreasing temperature power.
inline std::vector<Exponents> monomial_exponents(int degree) {
    std::vector<Exponents> out;
    for (int d = 1; d <= degree; ++d) {
        for (int a = d; a >= 0; --a) {
            for (int b = d - a; b >= 0; --b) out.push_back({a, b, d - a - b});
        }
    }
    return out;
}

inline double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

inline double monomial(const ScenarioSample& s, const Exponents& e) {
    return ipow(s.passengers, e[0]) * ipow(s.ambient_temp_c, e[1]) * ipow(s.grade_rad, e[2]);
}

// Dense column-major matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }
    std::span<double> column(std::size_t c) { return {data_.data() + c * rows_, rows_}; }
    std::span<const double> column(std::size_t c) const { return {data_.data() + c * rows_, rows_}; }

    Matrix select_rows(std::span<const std::size_t> idx) const {
        Matrix out(idx.size(), cols_);
        for (std::size_t c = 0; c < cols_; ++c) {
            for (std::size_t i = 0; i < idx.size(); ++i) out(i, c) = (*this)(idx[i], c);
        }
        return out;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct Standardization {
    std::vector<double> mean;
    std::vector<double> scale;
    // Columns with zero variance; their coefficients stay at zero.
    std::vector<bool> constant;
};

struct FeatureSet {
    int degree = 6;
    std::vector<Exponents> exponents;
    Matrix design;  // standardized
    Standardization standardization;
};

// Expands samples into standardized monomial columns. Zero-variance columns
// get scale 1 and are flagged constant.
inline FeatureSet build_features(std::span<const ScenarioSample> samples, int degree = 6) {
    if (samples.empty()) throw Error(ErrorCategory::InvalidInput, "no samples to build features from");
    if (degree < 1) throw Error(ErrorCategory::InvalidParameter, "polynomial degree must be >= 1");
    FeatureSet fs;
    fs.degree = degree;
    fs.exponents = monomial_exponents(degree);
    const std::size_t n = samples.size();
    const std::size_t p = fs.exponents.size();
    fs.design = Matrix(n, p);
    fs.standardization.mean.assign(p, 0.0);
    fs.standardization.scale.assign(p, 1.0);
    fs.standardization.constant.assign(p, false);

    for (std::size_t c = 0; c < p; ++c) {
        auto col = fs.design.column(c);
        for (std::size_t i = 0; i < n; ++i) col[i] = monomial(samples[i], fs.exponents[c]);
        const double mean = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(n);
        double var = 0;
        for (double x : col) var += (x - mean) * (x - mean);
        var /= static_cast<double>(n);
        double scale = std::sqrt(var);
        double max_abs = 0;
        for (double x : col) max_abs = std::max(max_abs, std::abs(x));
        // Relative threshold: identical samples can leave rounding noise.
        if (!(scale > 1e-12 * max_abs)) {
            scale = 1.0;
            fs.standardization.constant[c] = true;
        }
        fs.standardization.mean[c] = mean;
        fs.standardization.scale[c] = scale;
        for (double& x : col) x = fs.standardization.constant[c] ? 0.0 : (x - mean) / scale;
    }
    return fs;
}

// ---------------------------------------------------------------------------
// Elastic net

struct ElasticNetConfig {
    double l1_weight = 1e-4;
    double l2_weight = 1e-4;
    std::size_t max_iterations = 10000;
    double tolerance = 1e-8;
    std::uint64_t seed = 0;
    double test_fraction = 0.2;
};

inline void validate(const ElasticNetConfig& cfg) {
    if (!(cfg.l1_weight >= 0) || !(cfg.l2_weight >= 0)) {
        throw Error(ErrorCategory::InvalidParameter, "penalty weights must be >= 0");
    }
    if (!(cfg.tolerance > 0)) throw Error(ErrorCategory::InvalidParameter, "tolerance must be > 0");
    if (cfg.max_iterations < 1) throw Error(ErrorCategory::InvalidParameter, "max_iterations must be >= 1");
    if (!(cfg.test_fraction >= 0 && cfg.test_fraction < 1)) {
        throw Error(ErrorCategory::InvalidParameter, "test_fraction must be in [0, 1)");
    }
}

struct ElasticNetFit {
    double intercept = 0;
    std::vector<double> coefficients;
    std::size_t sweeps = 0;
    double last_delta = 0;
    // Objective after each full sweep.
    std::vector<double> objective_history;
};

inline double soft_threshold(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

// Objective minimized by coordinate_descent:
//   (1/2n)·‖y − b − Xw‖² + λ₁‖w‖₁ + (λ₂/2)‖w‖²
inline double elastic_net_objective(const Matrix& X, std::span<const double> y, double intercept,
                                    std::span<const double> w, double l1, double l2) {
    const std::size_t n = X.rows();
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double pred = intercept;
        for (std::size_t c = 0; c < X.cols(); ++c) pred += X(i, c) * w[c];
        rss += (y[i] - pred) * (y[i] - pred);
    }
    double l1n = 0;
    double l2n = 0;
    for (double v : w) {
        l1n += std::abs(v);
        l2n += v * v;
    }
    return rss / (2.0 * static_cast<double>(n)) + l1 * l1n + 0.5 * l2 * l2n;
}

// Cyclic coordinate descent with soft-thresholding. The intercept is
// unpenalized and refreshed at the start of each sweep. Columns flagged in
// `frozen` keep a zero coefficient. Stops when the largest parameter change in
// a sweep drops below cfg.tolerance.
inline ElasticNetFit coordinate_descent(const Matrix& X, std::span<const double> y, const ElasticNetConfig& cfg,
                                        const std::vector<bool>& frozen = {}) {
    validate(cfg);
    const std::size_t n = X.rows();
    const std::size_t p = X.cols();
    if (n != y.size()) throw Error(ErrorCategory::InvalidInput, "design rows and target length differ");
    if (n < 2) throw Error(ErrorCategory::InvalidInput, "need at least two rows to fit");
    const double inv_n = 1.0 / static_cast<double>(n);

    std::vector<double> col_sq(p, 0.0);
    for (std::size_t c = 0; c < p; ++c) {
        for (double x : X.column(c)) col_sq[c] += x * x;
        col_sq[c] *= inv_n;
    }

    ElasticNetFit fit;
    fit.coefficients.assign(p, 0.0);
    std::vector<double> residual(y.begin(), y.end());
    auto& w = fit.coefficients;

    for (std::size_t sweep = 1; sweep <= cfg.max_iterations; ++sweep) {
        double max_delta = 0;

        const double shift = std::accumulate(residual.begin(), residual.end(), 0.0) * inv_n;
        fit.intercept += shift;
        for (double& r : residual) r -= shift;
        max_delta = std::abs(shift);

        for (std::size_t c = 0; c < p; ++c) {
            if ((!frozen.empty() && frozen[c]) || col_sq[c] == 0.0) continue;
            auto col = X.column(c);
            double rho = 0;
            for (std::size_t i = 0; i < n; ++i) rho += col[i] * residual[i];
            rho = rho * inv_n + col_sq[c] * w[c];
            const double updated = soft_threshold(rho, cfg.l1_weight) / (col_sq[c] + cfg.l2_weight);
            const double delta = updated - w[c];
            if (delta != 0.0) {
                for (std::size_t i = 0; i < n; ++i) residual[i] -= delta * col[i];
                w[c] = updated;
            }
            max_delta = std::max(max_delta, std::abs(delta));
        }

        double rss = 0;
        for (double r : residual) rss += r * r;
        double l1n = 0;
        double l2n = 0;
        for (double v : w) {
            l1n += std::abs(v);
            l2n += v * v;
        }
        fit.objective_history.push_back(rss * 0.5 * inv_n + cfg.l1_weight * l1n + 0.5 * cfg.l2_weight * l2n);
        fit.sweeps = sweep;
        fit.last_delta = max_delta;
        if (max_delta < cfg.tolerance) return fit;
    }
    throw Error(ErrorCategory::NonConvergence, "coordinate descent did not converge after " +
                                                   std::to_string(fit.sweeps) + " sweeps (last delta " +
                                                   csv::format_double(fit.last_delta) + ")");
}

// ---------------------------------------------------------------------------
// Surrogate model

struct SurrogateModel {
    int degree = 6;
    std::vector<Exponents> exponents;
    std::vector<double> coefficients;
    double intercept = 0;
    std::vector<double> feature_mean;
    std::vector<double> feature_scale;
    double train_rmse = 0;
    std::optional<double> test_rmse;
    std::uint64_t seed = 0;
    std::size_t n_samples = 0;
    double l1_weight = 0;
    double l2_weight = 0;
    std::size_t sweeps = 0;
    std::string content_hash;

    bool fitted() const { return !exponents.empty() && exponents.size() == coefficients.size(); }
};

inline double predict(const SurrogateModel& model, const ScenarioSample& s) {
    double out = model.intercept;
    for (std::size_t f = 0; f < model.exponents.size(); ++f) {
        if (model.coefficients[f] == 0.0) continue;
        out += model.coefficients[f] * (monomial(s, model.exponents[f]) - model.feature_mean[f]) /
               model.feature_scale[f];
    }
    return out;
}

inline std::vector<double> predict_batch(const SurrogateModel& model, std::span<const ScenarioSample> samples) {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(predict(model, s));
    return out;
}

inline double rmse(std::span<const double> a, std::span<const double> b) {
    double sum = 0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(sum / static_cast<double>(a.size()));
}

// Seeded shuffle split into (train, test) row indices.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> train_test_split(std::size_t n,
                                                                                      double test_fraction,
                                                                                      std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    auto n_test = static_cast<std::size_t>(std::floor(test_fraction * static_cast<double>(n)));
    if (n - n_test < 2) n_test = n >= 2 ? n - 2 : 0;
    std::vector<std::size_t> test(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
    std::vector<std::size_t> train(idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
    return {std::move(train), std::move(test)};
}

// Fits on a seeded 80/20 split of the design rows and reports RMSE on both.
inline SurrogateModel fit_elastic_net(const FeatureSet& features, std::span<const double> y,
                                      const ElasticNetConfig& cfg) {
    validate(cfg);
    const std::size_t n = features.design.rows();
    if (n != y.size()) throw Error(ErrorCategory::InvalidInput, "design rows and target length differ");
    if (n < 2) throw Error(ErrorCategory::InvalidInput, "need at least two rows to fit");

    auto [train_idx, test_idx] = train_test_split(n, cfg.test_fraction, cfg.seed);
    Matrix train_x = features.design.select_rows(train_idx);
    std::vector<double> train_y;
    for (auto i : train_idx) train_y.push_back(y[i]);

    auto fit = coordinate_descent(train_x, train_y, cfg, features.standardization.constant);

    SurrogateModel m;
    m.degree = features.degree;
    m.exponents = features.exponents;
    m.coefficients = fit.coefficients;
    m.intercept = fit.intercept;
    m.feature_mean = features.standardization.mean;
    m.feature_scale = features.standardization.scale;
    m.seed = cfg.seed;
    m.n_samples = n;
    m.l1_weight = cfg.l1_weight;
    m.l2_weight = cfg.l2_weight;
    m.sweeps = fit.sweeps;

    auto predict_rows = [&](const std::vector<std::size_t>& rows) {
        std::vector<double> pred;
        std::vector<double> actual;
        for (auto i : rows) {
            double v = fit.intercept;
            for (std::size_t c = 0; c < features.design.cols(); ++c) v += features.design(i, c) * fit.coefficients[c];
            pred.push_back(v);
            actual.push_back(y[i]);
        }
        return rmse(pred, actual);
    };
    m.train_rmse = predict_rows(train_idx);
    if (!test_idx.empty()) m.test_rmse = predict_rows(test_idx);
    return m;
}

// ---------------------------------------------------------------------------
// Training against the physics model

struct PhysicsSetup {
    drive::DriveCycle cycle;
    drive::BusSpec bus;
    drive::HvacModel hvac;
    double air_density_kgpm3 = 1.2;
    double gravity_mps2 = 9.81;
};

// Energy efficiency (kWh/km) of the drive cycle under one scenario.
inline double physics_efficiency(const PhysicsSetup& setup, const ScenarioSample& s) {
    drive::EnvConditions env;
    env.passengers = s.passengers;
    env.ambient_temp_c = s.ambient_temp_c;
    env.grade_rad = s.grade_rad;
    env.air_density_kgpm3 = setup.air_density_kgpm3;
    env.gravity_mps2 = setup.gravity_mps2;
    return drive::segment_energy_efficiency(setup.cycle, env, setup.bus, setup.hvac);
}

struct TrainingResult {
    SurrogateModel model;
    std::vector<ScenarioSample> samples;
    std::vector<double> targets;
};

inline TrainingResult train_surrogate(const PhysicsSetup& setup, const ScenarioDistributions& dists,
                                      std::size_t n_samples, const ElasticNetConfig& cfg, int degree = 6) {
    TrainingResult out;
    out.samples = sample_scenarios(dists, n_samples, cfg.seed);
    out.targets.reserve(out.samples.size());
    for (const auto& s : out.samples) out.targets.push_back(physics_efficiency(setup, s));
    auto features = build_features(out.samples, degree);
    out.model = fit_elastic_net(features, out.targets, cfg);
    return out;
}

}  // namespace electrify::surrogate
