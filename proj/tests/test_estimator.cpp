#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "qtrack/errors.hpp"
#include "qtrack/estimator.hpp"
#include "qtrack/harness.hpp"

using namespace qtrack;

namespace {

// High-precision reference value of the predicted weight at phi'theta = 1
// for the example quantizer under standard normal noise (sum of four
// weighted normal-CDF differences, computed independently to 25 digits).
constexpr double kPredictedWeightAtOne = -38.85363528384910356516672;

ExperimentConfig example_config() {
    ExperimentConfig cfg;
    cfg.theta = {4.0, 1.0};
    cfg.quantizer = quantizer_preset("paper");
    cfg.omega = OmegaSet::box(-6, 6, -2, 2);
    cfg.theta_hat0 = ParamVec{5.0, 0.0};
    cfg.reference = ReferenceSpec::alternating();
    return cfg;
}

} // namespace

TEST_CASE("predicted weight examples") {
    QuantizerSpec q = quantizer_preset("paper");
    NoiseModel noise = NoiseModel::gaussian(1.0);

    // symmetric thresholds + antisymmetric weights cancel exactly at 0
    CHECK(predicted_weight({0, 0}, {1, 1}, q, noise) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::fabs(predicted_weight({0, 0}, {1, 1}, q, noise)) <= 1e-12);

    // all probability mass in the top bucket in the limit
    CHECK(predicted_weight({1e9, 0}, {1, 0}, q, noise) ==
          doctest::Approx(-80.0).epsilon(1e-14));

    CHECK(predicted_weight({1.0, 0.0}, {1.0, 0.0}, q, noise) ==
          doctest::Approx(kPredictedWeightAtOne).epsilon(1e-9));

    // range
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> v(-4.0, 4.0);
    for (int i = 0; i < 2000; ++i) {
        double a = predicted_weight({v(rng), v(rng)}, {v(rng), v(rng)}, q,
                                    noise);
        CHECK(a <= q.weights.front() + 1e-12);
        CHECK(a >= q.weights.back() - 1e-12);
    }
}

TEST_CASE("update clamps into omega") {
    ExperimentConfig cfg = example_config();
    EstimatorState est({5.0, 0.0}, cfg.omega, cfg.quantizer, cfg.noise);
    est.update({0.2, 0.0}, -50.0);
    // raw first coordinate is 5 + 0.2 (A + 50) = 7.22927..., clamped to 6
    CHECK(est.theta_hat() == ParamVec{6.0, 0.0});
    CHECK(est.step() == 2);
}

TEST_CASE("update with zero regressor is a no-op") {
    ExperimentConfig cfg = example_config();
    EstimatorState est({5.0, 0.0}, cfg.omega, cfg.quantizer, cfg.noise);
    est.update({0.0, 0.0}, -50.0);
    CHECK(est.theta_hat() == ParamVec{5.0, 0.0});
    CHECK(est.step() == 2);
}

TEST_CASE("update with zero innovation is a no-op") {
    // Far in the saturated regime the CDF differences collapse to
    // (0, ..., 0, 1), so the predicted weight equals the bottom weight
    // exactly and s_bar equal to it yields a zero innovation.
    ExperimentConfig cfg = example_config();
    EstimatorState est({5.0, 0.0}, cfg.omega, cfg.quantizer, cfg.noise);
    CHECK(predicted_weight({5.0, 0.0}, {1e9, 0.0}, cfg.quantizer,
                           cfg.noise) == -80.0);
    est.update({1e9, 0.0}, -80.0);
    CHECK(est.theta_hat() == ParamVec{5.0, 0.0});
}

TEST_CASE("update rejects foreign observations") {
    ExperimentConfig cfg = example_config();
    EstimatorState est({5.0, 0.0}, cfg.omega, cfg.quantizer, cfg.noise);
    CHECK_THROWS_AS(est.update({0.2, 0.0}, -49.5), ValidationError);
}

TEST_CASE("estimation error") {
    CHECK(estimation_error({4, 1}, {4, 1}) == 0.0);
    CHECK(estimation_error({5, 0}, {4, 1}) == doctest::Approx(2.0));
    CHECK(estimation_error({6, 0}, {4, 1}) == doctest::Approx(5.0));
}

TEST_CASE("martingale identity at the true parameter") {
    // With the estimate frozen at theta, A - S_bar has conditional mean 0.
    QuantizerSpec q = quantizer_preset("paper");
    NoiseModel noise = NoiseModel::gaussian(1.0);
    ParamVec theta{4.0, 1.0};
    Regressor phi{0.25, 0.1};
    double a = predicted_weight(theta, phi, q, noise);
    double structural = phi.dot(theta);

    TrialStream stream(77, 0, kStreamPlantNoise);
    const int n = 1000000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 1; i <= n; ++i) {
        double w = noise.sample(stream, static_cast<std::uint64_t>(i));
        double d = a - weighted_observation(q, quantize(q, structural + w));
        sum += d;
        sumsq += d * d;
    }
    double mean = sum / n;
    double sd = std::sqrt(sumsq / n - mean * mean);
    CHECK(std::fabs(mean) <= 3.0 * sd / std::sqrt(double(n)));
}

TEST_CASE("membership and per-step bound along a trajectory") {
    ExperimentConfig cfg = example_config();
    cfg.horizon = 3000;
    TrialRecord rec = run_trial(cfg, 0);
    REQUIRE(!rec.diverged_at);
    CHECK(rec.membership_violations == 0);
    CHECK(rec.step_bound_violations == 0);
}

TEST_CASE("two-index estimate drift bound") {
    // ||th(i) - th(j)|| <= M (i-j)/(j+1) * sum|beta_p| along a certified
    // trajectory, M the certified input bound.
    ExperimentConfig cfg = example_config();
    cfg.omega = OmegaSet::signed_box(+1, 3.0, 6.5, 2.0);
    cfg.horizon = 2000;
    TrialRecord rec = run_trial(cfg, 1);
    REQUIRE(!rec.diverged_at);
    REQUIRE(rec.input_bound_checked);

    double m_bound = std::sqrt(2.0) * 2.1 / (3.0 - 2.0);
    double beta_abs_sum = 80.0 + 50.0 + 50.0 + 80.0;
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<std::int64_t> pick(1, cfg.horizon);
    for (int t = 0; t < 5000; ++t) {
        std::int64_t i = pick(rng), j = pick(rng);
        if (i == j) continue;
        if (i < j) std::swap(i, j);
        ParamVec thi{rec.theta1[size_t(i - 1)], rec.theta2[size_t(i - 1)]};
        ParamVec thj{rec.theta1[size_t(j - 1)], rec.theta2[size_t(j - 1)]};
        double bound = m_bound * double(i - j) / double(j + 1) * beta_abs_sum;
        CHECK((thi - thj).norm() <= bound * (1 + 1e-12));
    }
}

TEST_CASE("median estimation error decreases across decades") {
    ExperimentConfig cfg = example_config();
    cfg.horizon = 10000;
    const int trials = 100;
    std::vector<double> e2(trials), e3(trials), e4(trials);
    for (int r = 0; r < trials; ++r) {
        TrialRecord rec = run_trial(cfg, static_cast<std::uint64_t>(r));
        REQUIRE(!rec.diverged_at);
        e2[size_t(r)] = rec.err_sq[99];
        e3[size_t(r)] = rec.err_sq[999];
        e4[size_t(r)] = rec.err_sq[9999];
    }
    auto median = [](std::vector<double> v) {
        std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
        return v[v.size() / 2];
    };
    double m2 = median(e2), m3 = median(e3), m4 = median(e4);
    CHECK(m2 > m3);
    CHECK(m3 > m4);
}
