#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qtrack/errors.hpp"
#include "qtrack/estimator.hpp"
#include "qtrack/plant.hpp"

using namespace qtrack;

namespace {

PlantState make_plant(double u_prev = 0.0) {
    return PlantState{{4.0, 1.0}, quantizer_preset("paper"),
                      NoiseModel::gaussian(1.0), u_prev, 1};
}

} // namespace

TEST_CASE("plant output") {
    CHECK(output(make_plant(), 0.2, 0.0) == doctest::Approx(0.8));
    CHECK(output(make_plant(), 0.0, 0.0) == 0.0);
    CHECK(output(make_plant(0.25), 0.5, -0.3) == doctest::Approx(1.95));
}

TEST_CASE("quantize buckets") {
    QuantizerSpec q = quantizer_preset("paper");
    CHECK(quantize(q, 1.5) == 2);
    CHECK(quantize(q, 0.0) == 1); // right-closed boundary
    CHECK(quantize(q, -3.0) == 0);
    CHECK(quantize(q, -2.0) == 0);
    CHECK(quantize(q, 2.0) == 2);
    CHECK(quantize(q, 2.0000001) == 3);
}

TEST_CASE("quantize agrees with linear scan oracle") {
    QuantizerSpec q = quantizer_preset("paper");
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> val(-6.0, 6.0);
    for (int i = 0; i < 100000; ++i) {
        double y = val(rng);
        CHECK(quantize(q, y) == oracles::linear_scan_quantize(q, y));
    }
    for (double c : q.thresholds) { // exact threshold hits
        CHECK(quantize(q, c) == oracles::linear_scan_quantize(q, c));
        CHECK(quantize(q, std::nextafter(c, 1e300)) ==
              oracles::linear_scan_quantize(q, std::nextafter(c, 1e300)));
    }
}

TEST_CASE("quantize is monotone") {
    QuantizerSpec q{{-1.5, 0.25, 3.0, 7.5}, {5, 4, 3, 2, 1}};
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> val(-10.0, 10.0);
    for (int i = 0; i < 20000; ++i) {
        double y1 = val(rng), y2 = val(rng);
        if (y1 > y2) std::swap(y1, y2);
        CHECK(quantize(q, y1) <= quantize(q, y2));
    }
}

TEST_CASE("weighted observation") {
    QuantizerSpec q = quantizer_preset("paper");
    CHECK(weighted_observation(q, 2) == -50.0);
    CHECK(weighted_observation(q, 0) == 80.0);
    CHECK_THROWS_AS(weighted_observation(q, 4), ValidationError);
    for (int level = 0; level <= 3; ++level) {
        double sbar = weighted_observation(q, level);
        CHECK(sbar <= q.weights.front());
        CHECK(sbar >= q.weights.back());
    }
}

TEST_CASE("empirical law of the weighted observation") {
    // Mean of S_bar over many draws matches the CDF-difference formula.
    QuantizerSpec q = quantizer_preset("paper");
    NoiseModel noise = NoiseModel::gaussian(1.0);
    ParamVec theta{4.0, 1.0};
    Regressor phi{0.5, 0.25};
    double structural = phi.dot(theta);

    TrialStream stream(123, 0, kStreamPlantNoise);
    const int n = 1000000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 1; i <= n; ++i) {
        double w = noise.sample(stream, static_cast<std::uint64_t>(i));
        double sbar = weighted_observation(q, quantize(q, structural + w));
        sum += sbar;
        sumsq += sbar * sbar;
    }
    double mean = sum / n;
    double sd = std::sqrt(sumsq / n - mean * mean);
    double expected = predicted_weight(theta, phi, q, noise);
    CHECK(std::fabs(mean - expected) <= 3.0 * sd / std::sqrt(double(n)));
}
