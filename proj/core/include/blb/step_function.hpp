#pragma once

#include <cstddef>
#include <vector>

#include "blb/scalar_map.hpp"

namespace blb {

// Piecewise-constant function on [0,1]: value values[i-1] on the closed-open
// interval [breakpoints[i-1], breakpoints[i]).  Endpoint values are
// measure-zero and never affect integrals.
struct StepFunction {
    std::vector<double> breakpoints;  // 0 = x_0 < x_1 < … < x_M = 1
    std::vector<double> values;       // t_1 … t_M

    [[nodiscard]] std::size_t pieces() const { return values.size(); }
    [[nodiscard]] double operator()(double x) const;

    // Throws ValidationError when the invariants fail.
    void validate() const;

    static StepFunction constant(double c);
    // Builds breakpoints from cumulative measures (must sum to 1 within
    // 1e-12; the final breakpoint is pinned to exactly 1).
    static StepFunction from_levels(const std::vector<double>& values,
                                    const std::vector<double>& measures);
};

// Level-wise composition φ∘f (never evaluated pointwise on a grid).
StepFunction compose(const StepFunction& f, const ScalarMap& phi);

// Monotone profile on [0,1] sampled at strictly increasing abscissae with
// linear interpolation, range-bounded by |v| ≤ a (within endpoint_tol at the
// shot endpoint).
struct SampledProfile {
    std::vector<double> s;  // s_0 = 0 < … < s_N = 1
    std::vector<double> v;  // nondecreasing
    double a = 1.0;

    [[nodiscard]] double operator()(double x) const;
    void validate(double endpoint_tol = 1e-6) const;
};

// Cell-average step approximation of a profile (exactly integral-preserving
// for the identity map; used where step-only machinery meets profiles).
StepFunction discretize(const SampledProfile& p);

}  // namespace blb
