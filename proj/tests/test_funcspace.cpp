#include <cmath>
#include <random>

#include "doctest.h"

#include "blb/errors.hpp"
#include "blb/funcspace.hpp"
#include "blb/scalar_map.hpp"
#include "blb/step_function.hpp"
#include "helpers.hpp"

using namespace blb;

TEST_CASE("two-level composition integrals at the pinned values") {
    const auto two = StepFunction::from_levels({1.0, -1.0}, {0.5, 0.5});
    CHECK(integrate_composition(two, maps::identity()) == 0.0);
    CHECK(integrate_composition(two, maps::square()) == 1.0);
    // ∫ (1+v)^4 = (16 + 0)/2 = 8 → F_4 integral = 8 - 1 - 1 = 6.
    CHECK(integrate_composition(two, maps::F(4.0)) ==
          doctest::Approx(6.0).epsilon(1e-15));
}

TEST_CASE("composition integral agrees with an independent accumulation") {
    std::mt19937 g(7);
    for (int trial = 0; trial < 40; ++trial) {
        const auto f = testutil::random_step(g);
        for (const auto& phi : maps::default_catalog(2.5)) {
            const double lib = integrate_composition(f, phi);
            const double ind = testutil::independent_composition(
                f, [&](double t) { return phi(t); });
            CHECK(std::abs(lib - ind) <= 1e-12);
        }
    }
}

TEST_CASE("pair integrates products exactly on merged breakpoints") {
    const StepFunction half{{0.0, 0.5, 1.0}, {1.0, 0.0}};
    const StepFunction one = StepFunction::constant(1.0);
    const auto two = StepFunction::from_levels({1.0, -1.0}, {0.5, 0.5});
    CHECK(pair(half, one) == 0.5);
    CHECK(pair(two, one) == 0.0);
    CHECK(pair(two, two) == 1.0);
    const StepFunction q{{0.0, 0.25, 1.0}, {4.0, 0.0}};
    CHECK(pair(q, half) == 1.0);  // overlap [0, 0.25) of value 4
}

TEST_CASE("lp_norm matches hand values and rejects p <= 1") {
    const auto two = StepFunction::from_levels({2.0, -2.0}, {0.5, 0.5});
    CHECK(lp_norm(two, 4.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(lp_norm(two, 1.0), ValidationError);
}

TEST_CASE("profile composition quadrature integrates t^2 over a ramp") {
    SampledProfile ramp;
    ramp.s = {0.0, 1.0};
    ramp.v = {0.0, 1.0};
    ramp.a = 1.0;
    const auto q = integrate_composition_quad(ramp, maps::square());
    CHECK(std::abs(q.value - 1.0 / 3.0) <= 1e-14);
    CHECK(std::abs(q.value - 1.0 / 3.0) <= q.error_estimate + 1e-14);
}

TEST_CASE("profile composition splits cells at kink preimages") {
    // v ramps from -1 to 1; |v|^{1.5} has a kink at v = 0 (s = 1/2).
    SampledProfile ramp;
    ramp.s = {0.0, 1.0};
    ramp.v = {-1.0, 1.0};
    ramp.a = 1.0;
    const auto q = integrate_composition_quad(ramp, maps::abs_p(1.5));
    // ∫₀¹ |2s-1|^{1.5} ds = 2·(1/2)·∫₀¹ u^{1.5} du = 1/2.5.
    CHECK(std::abs(q.value - 0.4) <= 1e-9);
    const double simpson = testutil::simpson(
        [&](double s) { return std::pow(std::abs(ramp(s)), 1.5); }, 0.0, 1.0,
        200001);
    CHECK(std::abs(q.value - simpson) <= 1e-9);
}
