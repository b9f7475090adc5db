#include <cmath>

#include "doctest.h"

#include "blb/counterexample.hpp"
#include "blb/errors.hpp"
#include "blb/funcspace.hpp"
#include "blb/scalar_map.hpp"
#include "helpers.hpp"

using namespace blb;

TEST_CASE("moment spec rejects out-of-domain exponents with explanations") {
    MomentSpec s;
    s.p = 2.0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s.p = 1.0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s.p = 3.0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s.p = 1.5;
    CHECK_NOTHROW(s.validate());
}

TEST_CASE("step search at p = 1.5 finds the sqrt(2) - 2 optimum") {
    MomentSpec spec;
    spec.p = 1.5;
    const auto rep = search_step_profile(spec);
    CHECK(rep.verdict);
    CHECK(rep.route == "step");
    CHECK(std::abs(rep.moment1) <= 1e-12);
    CHECK(std::abs(rep.moment2) <= 1e-12);
    // The optimum concentrates on ±1; the measure floor shifts the value by
    // O(1e-6) at most.
    CHECK(std::abs(rep.objective - (std::sqrt(2.0) - 2.0)) <= 5e-5);
    REQUIRE(rep.defect_check.has_value());
    CHECK(rep.defect_check->tail_error <= 1e-10);
    CHECK(std::abs(rep.defect_check->theoretical_limit - rep.objective) <=
          1e-12);
}

TEST_CASE("step search at p = 2.5 with a wide level range") {
    MomentSpec spec;
    spec.p = 2.5;
    spec.a = 8.0;
    const auto rep = search_step_profile(spec);
    CHECK(rep.verdict);
    CHECK(std::abs(rep.moment1) <= 1e-12);
    CHECK(std::abs(rep.moment2) <= 1e-12);
    CHECK(rep.objective == doctest::Approx(-0.004194196566).epsilon(1e-4));
    const auto& prof = std::get<StepFunction>(rep.profile);
    REQUIRE(prof.values.size() == 3);
    CHECK(prof.values[0] == doctest::Approx(-8.0).epsilon(1e-9));
    CHECK(prof.values[1] == doctest::Approx(-0.02511).epsilon(1e-2));
    CHECK(prof.values[2] == doctest::Approx(0.57256).epsilon(1e-2));
}

TEST_CASE("step search is deterministic for a fixed seed") {
    MomentSpec spec;
    spec.p = 1.7;
    const auto a = search_step_profile(spec, 3, 5);
    const auto b = search_step_profile(spec, 3, 5);
    CHECK(a.objective == b.objective);
    CHECK(std::get<StepFunction>(a.profile).values ==
          std::get<StepFunction>(b.profile).values);
    CHECK(std::get<StepFunction>(a.profile).breakpoints ==
          std::get<StepFunction>(b.profile).breakpoints);
}

TEST_CASE("density design at p = 1.5 hits the capped closed form") {
    MomentSpec spec;
    spec.p = 1.5;
    const auto d = design_density(spec, 1.0, 4);
    CHECK(d.success);
    // With conditioning cap 50 the optimal density is psi = 1 + 49 t²:
    // R = (f0 + 49 f2) / (104/3) with
    // f0 = 2^2.5/2.5 - 2 - 2/2.5,
    // f2 = (2^4.5/4.5 - 2·2^3.5/3.5 + 2^2.5/2.5) - 2/3 - 2/4.5.
    const double f0 = std::pow(2.0, 2.5) / 2.5 - 2.0 - 2.0 / 2.5;
    const double f2 = (std::pow(2.0, 4.5) / 4.5 -
                       2.0 * std::pow(2.0, 3.5) / 3.5 +
                       std::pow(2.0, 2.5) / 2.5) -
                      2.0 / 3.0 - 2.0 / 4.5;
    const double want = (f0 + 49.0 * f2) / (104.0 / 3.0);
    CHECK(std::abs(d.normalized_objective - want) <= 1e-9);
    CHECK(std::abs(d.gamma - 104.0 / 3.0) <= 1e-9);
    REQUIRE(d.coefficients.size() == 4);
    CHECK(std::abs(d.coefficients[0] - 1.0) <= 1e-9);
    CHECK(std::abs(d.coefficients[1]) <= 1e-9);
    CHECK(std::abs(d.coefficients[2] - 49.0) <= 1e-7);
    CHECK(std::abs(d.coefficients[3]) <= 1e-9);
    CHECK(d.psi_min >= 1.0 - 1e-12);
    // Independent check of the normalized objective by dense sampling.
    const double num = testutil::simpson(
        [&](double t) {
            return (std::pow(std::abs(1.0 + t), 1.5) - 1.0 -
                    std::pow(std::abs(t), 1.5)) *
                   d.psi(t);
        },
        -1.0, 1.0, 400000);
    const double den = testutil::simpson([&](double t) { return d.psi(t); },
                                         -1.0, 1.0, 400000);
    CHECK(std::abs(d.normalized_objective - num / den) <= 1e-8);
}

TEST_CASE("density design reports failure honestly above p = 2") {
    MomentSpec spec;
    spec.p = 2.5;
    const auto d = design_density(spec, 1.0, 6);
    CHECK(!d.success);
    CHECK(d.normalized_objective >= 0.0);
    CHECK(d.psi_min >= 1.0 - 1e-12);  // still a valid density
    // Constraints still hold exactly for the reported coefficients.
    const double m1 = testutil::simpson(
        [&](double t) { return t * d.psi(t); }, -1.0, 1.0, 200000);
    CHECK(std::abs(m1) <= 1e-10);
}

TEST_CASE("shooting with psi = 1 is exactly linear with gamma = 2a") {
    DensityDesign flat;
    flat.a = 1.0;
    flat.p = 1.5;
    flat.coefficients = {1.0};
    flat.psi_min = 1.0;
    flat.gamma = 2.0;
    flat.success = false;
    flat.normalized_objective = 0.0;
    const auto [gamma, prof] = solve_profile_ode(flat, 1.0, 512, 1e-10);
    CHECK(std::abs(gamma - 2.0) <= 1e-10);
    for (std::size_t i = 0; i < prof.s.size(); ++i)
        CHECK(std::abs(prof.v[i] - (-1.0 + 2.0 * prof.s[i])) <= 1e-10);
}

TEST_CASE("pushforward moments for psi = 1 are plain averages") {
    DensityDesign flat;
    flat.a = 1.0;
    flat.p = 1.5;
    flat.coefficients = {1.0};
    flat.psi_min = 1.0;
    flat.gamma = 2.0;
    flat.success = false;
    flat.normalized_objective = 0.0;
    CHECK(std::abs(pushforward_moment(flat, maps::square()) - 1.0 / 3.0) <=
          1e-13);
    CHECK(std::abs(pushforward_moment(flat, maps::identity())) <= 1e-13);
}

TEST_CASE("ODE route at p = 1.5 produces a verified witness") {
    MomentSpec spec;
    spec.p = 1.5;
    const auto rep = ode_route_report(spec, 1.0, 4, 8192, 1e-9);
    CHECK(rep.verdict);
    CHECK(rep.route == "ode");
    CHECK(std::abs(rep.moment1) <= 1e-8);
    CHECK(std::abs(rep.moment2) <= 1e-8);
    CHECK(rep.objective <= -1e-3);
    // Profile objective tracks the design's normalized objective.
    const auto d = design_density(spec, 1.0, 4);
    CHECK(std::abs(rep.objective - d.normalized_objective) <= 1e-6);
    const auto verify = verify_counterexample(rep, geometric_j_list(1, 256));
    CHECK(verify.pairings_vanish);
    CHECK(verify.composed_pairings_vanish);
    CHECK(verify.defect_negative);
    CHECK(verify.verdict);
}

TEST_CASE("verification suite passes on the step witness") {
    MomentSpec spec;
    spec.p = 1.5;
    const auto rep = search_step_profile(spec);
    const auto verify = verify_counterexample(rep, geometric_j_list(1, 1024));
    CHECK(verify.pairings_vanish);
    CHECK(verify.composed_pairings_vanish);
    CHECK(verify.defect_negative);
    CHECK(std::abs(verify.defect_limit - rep.objective) <= 1e-12);
    CHECK(verify.verdict);
}

TEST_CASE("search rejects fewer than three levels") {
    MomentSpec spec;
    spec.p = 1.5;
    CHECK_THROWS_AS(search_step_profile(spec, 2), ValidationError);
}
