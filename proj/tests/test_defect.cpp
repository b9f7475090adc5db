#include <cmath>
#include <random>

#include "doctest.h"

#include "blb/defect.hpp"
#include "blb/errors.hpp"
#include "blb/funcspace.hpp"
#include "blb/oscillate.hpp"
#include "blb/scalar_map.hpp"
#include "helpers.hpp"

using namespace blb;

namespace {
// Project the first two levels so both moments ∫v and ∫|v|^{p-2}v vanish.
StepFunction project_moments(StepFunction v, double p) {
    const std::size_t n = v.values.size();
    REQUIRE(n >= 3);
    std::vector<double> m(n);
    for (std::size_t i = 0; i < n; ++i)
        m[i] = v.breakpoints[i + 1] - v.breakpoints[i];
    for (int iter = 0; iter < 80; ++iter) {
        double r1 = 0.0, r2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            r1 += m[i] * v.values[i];
            r2 += m[i] * pow_sign(v.values[i], p - 1.0);
        }
        if (std::abs(r1) + std::abs(r2) < 1e-14) break;
        const double a = m[0], b = m[1];
        const double c = m[0] * (p - 1.0) *
                         std::pow(std::abs(v.values[0]), p - 2.0);
        const double d = m[1] * (p - 1.0) *
                         std::pow(std::abs(v.values[1]), p - 2.0);
        const double det = a * d - b * c;
        REQUIRE(std::abs(det) > 1e-14);
        v.values[0] -= (d * r1 - b * r2) / det;
        v.values[1] -= (-c * r1 + a * r2) / det;
    }
    return v;
}
}  // namespace

TEST_CASE("constant-u defect equals the composition mean for every j") {
    const auto two = StepFunction::from_levels({1.0, -1.0}, {0.5, 0.5});
    const auto u = StepFunction::constant(1.0);
    const double want = integrate_composition(two, maps::F(4.0));  // 6
    CHECK(want == doctest::Approx(6.0).epsilon(1e-15));
    for (unsigned j : {1u, 2u, 3u, 5u, 17u, 256u, 1024u})
        CHECK(std::abs(bl_defect(u, two, 4.0, j) - want) <= 1e-12);
}

TEST_CASE("two-level u against the sign profile: exact odd/even values") {
    const auto u = StepFunction::from_levels({0.0, 1.0}, {0.5, 0.5});
    const auto v = StepFunction::from_levels({1.0, -1.0}, {0.5, 0.5});
    for (unsigned j = 1; j <= 64; ++j) {
        const double d = bl_defect(u, v, 4.0, j);
        if (j % 2 == 1)
            CHECK(std::abs(d - (3.0 - 4.0 / j)) <= 1e-12);
        else
            CHECK(std::abs(d - 3.0) <= 1e-12);
    }
}

TEST_CASE("defect series limit is the level-wise theory value") {
    const auto u = StepFunction::from_levels({0.0, 1.0}, {0.5, 0.5});
    const auto v = StepFunction::from_levels({1.0, -1.0}, {0.5, 0.5});
    const auto series = defect_series(u, Profile{v}, 4.0,
                                      geometric_j_list(1, 1024));
    CHECK(series.theoretical_limit == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(series.tail_error <= 1e-12);  // geometric tail is all even j
}

TEST_CASE("theory limit agrees with a dense oracle on random inputs") {
    std::mt19937 g(23);
    for (int trial = 0; trial < 6; ++trial) {
        const auto u = testutil::random_step(g, 4);
        const auto v = testutil::random_step(g, 4);
        const double p = 2.5;
        const double lib = defect_limit_theory(u, v, p);
        // Independent: Σ_i m_i ∫ (|u_i+v(t)|^p - |u_i|^p - |v(t)|^p) dt,
        // with the inner integral evaluated level-wise on v.
        long double acc = 0.0L;
        for (std::size_t i = 0; i < u.values.size(); ++i) {
            const double mu = u.breakpoints[i + 1] - u.breakpoints[i];
            const double ui = u.values[i];
            for (std::size_t k = 0; k < v.values.size(); ++k) {
                const double mv = v.breakpoints[k + 1] - v.breakpoints[k];
                const double t = v.values[k];
                acc += static_cast<long double>(mu) * mv *
                       (std::pow(std::abs(ui + t), p) -
                        std::pow(std::abs(ui), p) - std::pow(std::abs(t), p));
            }
        }
        CHECK(std::abs(lib - static_cast<double>(acc)) <= 1e-12);
    }
}

TEST_CASE("defect against a sampled ramp matches the step discretization") {
    SampledProfile ramp;
    const int n = 2048;
    ramp.s.resize(n + 1);
    ramp.v.resize(n + 1);
    ramp.a = 1.0;
    for (int i = 0; i <= n; ++i) {
        ramp.s[i] = static_cast<double>(i) / n;
        ramp.v[i] = 2.0 * ramp.s[i] - 1.0;
    }
    ramp.s.back() = 1.0;
    const auto u = StepFunction::from_levels({0.5, -0.25}, {0.5, 0.5});
    for (unsigned j : {1u, 4u, 32u}) {
        const double via_profile = bl_defect(u, ramp, 2.5, j);
        const double via_step = bl_defect(u, discretize(ramp), 2.5, j);
        CHECK(std::abs(via_profile - via_step) <= 1e-6);
    }
    // Theory limits agree across representations too.
    CHECK(std::abs(defect_limit_theory(u, ramp, 2.5) -
                   defect_limit_theory(u, discretize(ramp), 2.5)) <= 1e-6);
}

TEST_CASE("p4 identity: cross term and exactness for constant u") {
    const auto v = StepFunction::from_levels({1.0, -1.0}, {0.5, 0.5});

    const auto one = StepFunction::constant(1.0);
    const auto exact = p4_identity_check(one, v, geometric_j_list(1, 1024));
    CHECK(exact.preconditions_ok);
    // 6·Σ m_i u_i²·∫v² = 6·1·1 = 6, and D_j hits it at every j.
    CHECK(exact.cross_term == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(exact.exact_for_constant_u);
    CHECK(exact.ok);

    const auto u = StepFunction::from_levels({0.0, 1.0}, {0.5, 0.5});
    const auto rep = p4_identity_check(u, v, geometric_j_list(1, 1024));
    CHECK(rep.preconditions_ok);
    // 6·Σ m_i u_i²·∫v² = 6·(1/2)·1 = 3.
    CHECK(rep.cross_term == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(rep.max_tail_deviation <= 1e-3);
    CHECK_FALSE(rep.exact_for_constant_u);
    CHECK(rep.ok);
}

TEST_CASE("p4 identity refuses profiles with nonvanishing odd moments") {
    const auto u = StepFunction::constant(1.0);
    const auto skew = StepFunction::from_levels({1.0, -0.5}, {0.5, 0.5});
    const auto rep = p4_identity_check(u, skew, geometric_j_list(1, 64));
    CHECK(!rep.preconditions_ok);
    CHECK(!rep.ok);
}

TEST_CASE("p = 2 defect is exactly twice the oscillated pairing") {
    std::mt19937 g(29);
    for (int trial = 0; trial < 8; ++trial) {
        const auto u = testutil::random_step(g, 5);
        auto v = testutil::random_step(g, 5);
        // center v
        const double mean = integrate_composition(v, maps::identity());
        for (double& t : v.values) t -= mean;
        for (unsigned j : {1u, 2u, 3u, 8u, 33u, 64u})
            CHECK(std::abs(bl_defect(u, v, 2.0, j) -
                           2.0 * pair_oscillated(v, u, j)) <= 1e-12);
    }
}

TEST_CASE("companion-function hypothesis propagates to nonnegative defects") {
    const auto u = StepFunction::from_levels({0.25, 0.75}, {0.5, 0.5});
    const auto v = project_moments(
        StepFunction::from_levels({0.9, -0.8, 0.3}, {0.25, 0.5, 0.25}), 4.0);
    const auto rep = theorem41_check(u, v, 4.0, geometric_j_list(1, 512),
                                     PsiVariant::sign_corrected);
    CHECK(rep.psi_vanishes);
    CHECK(rep.conclusion_holds);
    CHECK(rep.min_D_tail >= -rep.tail_tolerance);
}

TEST_CASE("positive-exponent theory limits are nonnegative at zero moments") {
    std::mt19937 g(31);
    const auto one = StepFunction::constant(1.0);
    for (double p : {3.0, 4.0}) {
        for (int trial = 0; trial < 10; ++trial) {
            auto v = testutil::random_step(g, 5);
            if (v.values.size() < 3) continue;
            v = project_moments(v, p);
            CHECK(defect_limit_theory(one, v, p) >= -1e-8);
        }
    }
}
