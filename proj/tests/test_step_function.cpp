#include <cmath>
#include <random>

#include "doctest.h"

#include "blb/errors.hpp"
#include "blb/funcspace.hpp"
#include "blb/kahan.hpp"
#include "blb/scalar_map.hpp"
#include "blb/step_function.hpp"
#include "helpers.hpp"

using namespace blb;

TEST_CASE("pow_sign realizes |t|^{q-1} t without singular intermediates") {
    CHECK(pow_sign(0.0, 0.5) == 0.0);
    CHECK(pow_sign(4.0, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(pow_sign(-4.0, 0.5) == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(pow_sign(-2.0, 3.0) == doctest::Approx(-8.0).epsilon(1e-15));
}

TEST_CASE("compensated sum beats naive accumulation") {
    CompensatedSum acc;
    const double big = 1e16, small = 1.0;
    acc.add(big);
    for (int i = 0; i < 10; ++i) acc.add(small);
    acc.add(-big);
    CHECK(acc.value() == 10.0);
}

TEST_CASE("step function evaluation uses closed-open cells") {
    const StepFunction f{{0.0, 0.25, 1.0}, {2.0, -3.0}};
    CHECK(f(0.0) == 2.0);
    CHECK(f(0.2499999) == 2.0);
    CHECK(f(0.25) == -3.0);
    CHECK(f(0.999) == -3.0);
    CHECK(f(1.0) == -3.0);  // endpoint carries the last value
}

TEST_CASE("step validation rejects broken invariants") {
    CHECK_THROWS_AS(StepFunction({{0.0, 0.5}, {1.0, 2.0}}).validate(),
                    ValidationError);  // count mismatch
    CHECK_THROWS_AS(StepFunction({{0.1, 1.0}, {1.0}}).validate(),
                    ValidationError);  // first breakpoint not 0
    CHECK_THROWS_AS(StepFunction({{0.0, 0.9}, {1.0}}).validate(),
                    ValidationError);  // last breakpoint not 1
    CHECK_THROWS_AS(StepFunction({{0.0, 0.5, 0.5, 1.0}, {1.0, 2.0, 3.0}})
                        .validate(),
                    ValidationError);  // not strictly increasing
    CHECK_NOTHROW(StepFunction({{0.0, 0.5, 1.0}, {1.0, 2.0}}).validate());
}

TEST_CASE("from_levels builds exact cumulative breakpoints") {
    const auto f = StepFunction::from_levels({1.0, -2.0, 0.5},
                                             {0.25, 0.5, 0.25});
    REQUIRE(f.breakpoints.size() == 4);
    CHECK(f.breakpoints[0] == 0.0);
    CHECK(f.breakpoints[1] == 0.25);
    CHECK(f.breakpoints[2] == 0.75);
    CHECK(f.breakpoints[3] == 1.0);  // pinned exactly
    CHECK_THROWS_AS(StepFunction::from_levels({1.0}, {0.99}), ValidationError);
    CHECK_THROWS_AS(StepFunction::from_levels({1.0, 2.0}, {0.5, -0.5}),
                    ValidationError);
}

TEST_CASE("compose acts level-wise") {
    const auto f = StepFunction::from_levels({2.0, -3.0}, {0.5, 0.5});
    const auto g = compose(f, maps::square());
    CHECK(g.values[0] == 4.0);
    CHECK(g.values[1] == 9.0);
    CHECK(g.breakpoints == f.breakpoints);
}

TEST_CASE("sampled profile interpolates linearly and validates") {
    SampledProfile p;
    p.s = {0.0, 0.5, 1.0};
    p.v = {-1.0, 0.0, 1.0};
    p.a = 1.0;
    CHECK_NOTHROW(p.validate());
    CHECK(p(0.25) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(p(1.0) == 1.0);
    SampledProfile bad = p;
    bad.v = {0.0, -0.5, 1.0};  // not nondecreasing
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    SampledProfile out_of_range = p;
    out_of_range.v = {-1.0, 0.0, 1.5};
    CHECK_THROWS_AS(out_of_range.validate(), ValidationError);
}

TEST_CASE("discretize preserves the mean exactly") {
    SampledProfile p;
    const int n = 257;
    p.s.resize(n + 1);
    p.v.resize(n + 1);
    p.a = 1.0;
    for (int i = 0; i <= n; ++i) {
        p.s[i] = static_cast<double>(i) / n;
        p.v[i] = -1.0 + 2.0 * p.s[i] * p.s[i];  // nondecreasing on [0,1]
    }
    p.s.back() = 1.0;
    const auto step = discretize(p);
    const double mean_profile = integrate_composition(p, maps::identity());
    const double mean_step = integrate_composition(step, maps::identity());
    CHECK(std::abs(mean_profile - mean_step) <= 1e-12);
}

TEST_CASE("random steps round through from_levels consistently") {
    std::mt19937 g(2024);
    for (int trial = 0; trial < 25; ++trial) {
        const auto f = testutil::random_step(g);
        CHECK_NOTHROW(f.validate());
        CHECK(f.breakpoints.back() == 1.0);
    }
}
