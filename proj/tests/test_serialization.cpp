#include <string>

#include "doctest.h"

#include "blb/counterexample.hpp"
#include "blb/errors.hpp"
#include "blb/oscillate.hpp"
#include "blb/serialization.hpp"

using namespace blb;

TEST_CASE("step functions round-trip byte-identically") {
    const auto f = StepFunction::from_levels({1.0 / 3.0, -2.0, 0.125},
                                             {0.25, 0.5, 0.25});
    const std::string a = io::to_json(f);
    const std::string b = io::to_json(io::step_from_json(a));
    CHECK(a == b);
}

TEST_CASE("sampled profiles round-trip byte-identically") {
    SampledProfile p;
    p.s = {0.0, 0.3, 1.0};
    p.v = {-0.5, 0.1, 0.5};
    p.a = 0.5;
    const std::string a = io::to_json(p);
    const std::string b = io::to_json(io::sampled_from_json(a));
    CHECK(a == b);
}

TEST_CASE("profile parser accepts tagged and bare forms") {
    const auto f = StepFunction::constant(2.0);
    const Profile tagged = io::profile_from_json(io::to_json(Profile{f}));
    CHECK(std::holds_alternative<StepFunction>(tagged));
    const Profile bare = io::profile_from_json(io::to_json(f));
    CHECK(std::holds_alternative<StepFunction>(bare));
    CHECK(std::get<StepFunction>(bare).values[0] == 2.0);
}

TEST_CASE("malformed input comes back as a validation error") {
    CHECK_THROWS_AS(io::step_from_json("{not json"), ValidationError);
    CHECK_THROWS_AS(io::step_from_json("{\"breakpoints\": [0, 1]}"),
                    ValidationError);
    CHECK_THROWS_AS(
        io::step_from_json(
            "{\"breakpoints\": [0.5, 1.0], \"values\": [1.0]}"),
        ValidationError);  // violates the 0-start invariant
    CHECK_THROWS_AS(io::profile_from_json("{\"kind\": \"spline\"}"),
                    ValidationError);
}

TEST_CASE("counterexample reports round-trip") {
    MomentSpec spec;
    spec.p = 1.5;
    const auto rep = search_step_profile(spec);
    const std::string a = io::to_json(rep);
    const auto back = io::counterexample_from_json(a);
    CHECK(io::to_json(back) == a);
    CHECK(back.verdict == rep.verdict);
    CHECK(back.objective == rep.objective);
}

TEST_CASE("density designs round-trip") {
    MomentSpec spec;
    spec.p = 1.5;
    const auto d = design_density(spec, 1.0, 4);
    const std::string a = io::to_json(d);
    const auto back = io::design_from_json(a);
    CHECK(io::to_json(back) == a);
}

TEST_CASE("csv writers emit the documented headers") {
    const auto two = StepFunction::from_levels({1.0, -1.0}, {0.5, 0.5});
    const auto est = convergence_table(two, StepFunction::constant(1.0),
                                       {1, 2, 4});
    const std::string wcsv = io::to_csv(est);
    CHECK(wcsv.rfind("j,pairing,deviation\n", 0) == 0);

    const auto series = defect_series(StepFunction::constant(1.0),
                                      Profile{two}, 4.0, {1, 2, 4});
    const std::string dcsv = io::to_csv(series);
    CHECK(dcsv.rfind("j,D,theoretical_limit,deviation\n", 0) == 0);
    CHECK(dcsv.find("\n1,6,6,0\n") != std::string::npos);
}
