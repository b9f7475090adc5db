#include <cmath>

#include "doctest.h"

#include "blb/quadrature.hpp"

using namespace blb;

TEST_CASE("GL8 integrates polynomials of degree 15 exactly") {
    const auto poly = [](double x) {
        double acc = 0.0, p = 1.0;
        for (int k = 0; k <= 15; ++k) {
            acc += (k + 1.0) * p;
            p *= x;
        }
        return acc;
    };
    // ∫₀¹ Σ (k+1) x^k dx = Σ 1 = 16.
    CHECK(gl8(poly, 0.0, 1.0) == doctest::Approx(16.0).epsilon(1e-14));
    CHECK(gl16(poly, 0.0, 1.0) == doctest::Approx(16.0).epsilon(1e-14));
}

TEST_CASE("integrate_1d resolves algebraic kinks to near machine precision") {
    // ∫_{-1}^{1} |t|^{1.5} dt = 2/2.5 = 0.8, kink at 0.
    const auto q = integrate_1d(
        [](double t) { return std::pow(std::abs(t), 1.5); }, -1.0, 1.0, {0.0});
    CHECK(std::abs(q.value - 0.8) <= 1e-13);
    CHECK(std::abs(q.value - 0.8) <= q.error_estimate + 1e-13);
}

TEST_CASE("integrate_1d handles half-power singularity at an endpoint") {
    // ∫₀¹ √t dt = 2/3 — integrand derivative blows up at 0.
    const auto q = integrate_1d([](double t) { return std::sqrt(t); }, 0.0,
                                1.0, {});
    CHECK(std::abs(q.value - 2.0 / 3.0) <= 1e-12);
}

TEST_CASE("integrate_1d error estimate is honest on smooth integrands") {
    const auto q = integrate_1d([](double t) { return std::exp(t); }, 0.0, 1.0,
                                {});
    const double truth = std::exp(1.0) - 1.0;
    CHECK(std::abs(q.value - truth) <= q.error_estimate + 1e-14);
    CHECK(std::abs(q.value - truth) <= 1e-13);
}
