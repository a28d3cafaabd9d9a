#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "oracles.hpp"
#include "qtrack/errors.hpp"
#include "qtrack/omega.hpp"
#include "qtrack/quantizer.hpp"
#include "qtrack/reference.hpp"
#include "qtrack/types.hpp"

using namespace qtrack;

namespace {

std::string thrown_code(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const ValidationError& e) {
        return e.code();
    }
    return "";
}

} // namespace

TEST_CASE("quantizer validation") {
    QuantizerSpec ok{{-2, 0, 2}, {80, 50, -50, -80}};
    CHECK_NOTHROW(validate_quantizer(ok));

    QuantizerSpec dup{{0, 0}, {1, 0, -1}};
    CHECK(thrown_code([&] { validate_quantizer(dup); }) ==
          "NonAscendingThresholds");

    QuantizerSpec flat{{0}, {1, 1}};
    CHECK(thrown_code([&] { validate_quantizer(flat); }) ==
          "NonDecreasingWeights");

    QuantizerSpec empty{{}, {}};
    CHECK(thrown_code([&] { validate_quantizer(empty); }) == "EmptyQuantizer");

    QuantizerSpec mismatched{{0.0, 1.0}, {2, 1}};
    CHECK(thrown_code([&] { validate_quantizer(mismatched); }) ==
          "WeightCountMismatch");

    CHECK_NOTHROW(validate_quantizer(quantizer_preset("paper")));
    CHECK(thrown_code([&] { quantizer_preset("nope"); }) == "UnknownPreset");
}

TEST_CASE("box projection clamps") {
    OmegaSet om = OmegaSet::box(-6, 6, -2, 2);
    CHECK(om.project({7, 1}) == ParamVec{6, 1});
    CHECK(om.project({1, 1}) == ParamVec{1, 1});
    CHECK(om.project({7, -5}) == ParamVec{6, -2});
}

TEST_CASE("signed box projection") {
    OmegaSet om = OmegaSet::signed_box(+1, 3.0, 6.5, 2.0);
    CHECK(om.project({0, 0}) == ParamVec{3, 0});
    CHECK(om.project({10, 3}) == ParamVec{6.5, 2});
    CHECK(om.project({4, -1}) == ParamVec{4, -1});

    OmegaSet neg = OmegaSet::signed_box(-1, 3.0, 6.5, 2.0);
    CHECK(neg.project({0, 0}) == ParamVec{-3, 0});
    CHECK(neg.project({-10, 0.5}) == ParamVec{-6.5, 0.5});

    CHECK(thrown_code([] { OmegaSet::signed_box(+1, 2.0, 6.5, 3.0); }) ==
          "InvalidBounds");
    CHECK(thrown_code([] { OmegaSet::box(1, 0, 0, 1); }) == "InvalidBox");
}

TEST_CASE("projection contraction, idempotence, membership") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coord(-20.0, 20.0);
    OmegaSet boxes[] = {OmegaSet::box(-6, 6, -2, 2),
                        OmegaSet::signed_box(+1, 3.0, 6.5, 2.0)};
    for (const OmegaSet& om : boxes) {
        for (int i = 0; i < 20000; ++i) {
            ParamVec a{coord(rng), coord(rng)};
            ParamVec b{coord(rng), coord(rng)};
            ParamVec pa = om.project(a), pb = om.project(b);
            CHECK((pa - pb).norm() <= (a - b).norm() + 1e-10);
            CHECK(om.project(pa) == pa);
            CHECK(om.contains(pa));
            if (om.contains(a)) CHECK(om.project(a) == a);
        }
    }
}

TEST_CASE("box projection matches grid argmin") {
    OmegaSet om = OmegaSet::box(-6, 6, -2, 2);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coord(-9.0, 9.0);
    for (int i = 0; i < 40; ++i) {
        ParamVec x{coord(rng), coord(rng)};
        ParamVec got = om.project(x);
        ParamVec ref = oracles::grid_argmin_projection(om, x, 1e-3);
        CHECK(std::fabs(got.c1 - ref.c1) <= 1e-3 + 1e-12);
        CHECK(std::fabs(got.c2 - ref.c2) <= 1e-3 + 1e-12);
    }
}

TEST_CASE("min phase margin") {
    CHECK(min_phase_margin({4, 1}) == doctest::Approx(3.0));
    CHECK(min_phase_margin({1, 2}) == 0.0);
    CHECK(min_phase_margin({-3, 0.5}) == doctest::Approx(2.5));
}

TEST_CASE("min phase margin equals grid minimum of |Q|") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> coef(-5.0, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
        ParamVec th{coef(rng), coef(rng)};
        double grid_min = std::numeric_limits<double>::infinity();
        for (int i = -10000; i <= 10000; ++i) {
            double w = i * 1e-4;
            grid_min = std::min(grid_min, std::fabs(th.c1 + th.c2 * w));
        }
        CHECK(std::fabs(min_phase_margin(th) - grid_min) <= 1e-3);
    }
}

TEST_CASE("reference signals replay deterministically and stay bounded") {
    ReferenceSpec alt = ReferenceSpec::alternating();
    RealizedReference a = alt.realize(21, 4);
    RealizedReference b = alt.realize(21, 4);
    RealizedReference other = alt.realize(21, 5);
    bool any_diff = false;
    for (std::int64_t k = 1; k <= 400; ++k) {
        CHECK(a.at(k) == b.at(k));
        CHECK(std::fabs(a.at(k)) <= a.bound());
        if (a.at(k) != other.at(k)) any_diff = true;
        if (k % 2 == 1) {
            CHECK(a.at(k) == 1.0);
        } else {
            CHECK(a.at(k) > 2.0);
            CHECK(a.at(k) < 2.1);
        }
    }
    CHECK(any_diff); // distinct trials draw distinct sequences
    CHECK(a.bound() == doctest::Approx(2.1));
}

TEST_CASE("table and explicit-epsilon references") {
    RealizedReference t = ReferenceSpec::table({1.0, -2.0, 0.5}).realize(1, 0);
    CHECK(t.at(1) == 1.0);
    CHECK(t.at(2) == -2.0);
    CHECK(t.at(3) == 0.5);
    CHECK(t.at(4) == 1.0); // cycles
    CHECK(t.bound() == 2.0);

    RealizedReference e =
        ReferenceSpec::alternating_with_eps({0.05}).realize(9, 3);
    CHECK(e.at(1) == 1.0);
    CHECK(e.at(2) == doctest::Approx(2.05));
    CHECK(e.at(4) == doctest::Approx(2.05));

    RealizedReference c =
        ReferenceSpec::custom([](std::int64_t k) { return k % 2 ? -1.0 : 1.0; },
                              1.0)
            .realize(1, 0);
    CHECK(c.at(1) == -1.0);
    CHECK(c.at(2) == 1.0);
    CHECK_THROWS_AS(ReferenceSpec::table({}), ValidationError);
}

TEST_CASE("omega geometry helpers") {
    OmegaSet box = OmegaSet::box(-6, 6, -2, 2);
    CHECK(box.sup_norm() == doctest::Approx(std::sqrt(40.0)));
    CHECK(box.min_abs_first() == 0.0);
    CHECK(box.max_abs_second() == 2.0);

    OmegaSet sb = OmegaSet::signed_box(+1, 3.0, 6.5, 2.0);
    CHECK(sb.sup_norm() == 6.5);
    CHECK(sb.min_abs_first() == 3.0);
    CHECK(sb.max_abs_second() == 2.0);

    OmegaSet off = OmegaSet::box(3, 6, -2, 2);
    CHECK(off.min_abs_first() == 3.0);
}
