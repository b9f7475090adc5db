#include "blb/step_function.hpp"

#include <algorithm>
#include <cmath>

#include "blb/errors.hpp"
#include "blb/kahan.hpp"

namespace blb {

double StepFunction::operator()(double x) const {
    if (x <= breakpoints.front()) return values.front();
    if (x >= breakpoints.back()) return values.back();
    const auto it =
        std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
    return values[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
}

void StepFunction::validate() const {
    if (values.empty()) throw ValidationError("StepFunction: needs >= 1 piece");
    if (breakpoints.size() != values.size() + 1)
        throw ValidationError(
            "StepFunction: count(values) must equal count(breakpoints) - 1");
    if (breakpoints.front() != 0.0)
        throw ValidationError("StepFunction: first breakpoint must be 0");
    if (breakpoints.back() != 1.0)
        throw ValidationError("StepFunction: last breakpoint must be 1");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i] > breakpoints[i - 1]))
            throw ValidationError(
                "StepFunction: breakpoints must be strictly increasing");
    for (double t : values)
        if (!std::isfinite(t))
            throw ValidationError("StepFunction: values must be finite");
}

StepFunction StepFunction::constant(double c) {
    StepFunction f;
    f.breakpoints = {0.0, 1.0};
    f.values = {c};
    return f;
}

StepFunction StepFunction::from_levels(const std::vector<double>& values,
                                       const std::vector<double>& measures) {
    if (values.size() != measures.size() || values.empty())
        throw ValidationError("from_levels: need matching values/measures");
    CompensatedSum total;
    for (double m : measures) {
        if (!(m > 0.0)) throw ValidationError("from_levels: measures must be > 0");
        total.add(m);
    }
    if (std::abs(total.value() - 1.0) > 1e-12)
        throw ValidationError("from_levels: measures must sum to 1");
    StepFunction f;
    f.values = values;
    f.breakpoints.resize(values.size() + 1);
    f.breakpoints.front() = 0.0;
    CompensatedSum cum;
    for (std::size_t i = 0; i + 1 < measures.size(); ++i) {
        cum.add(measures[i]);
        f.breakpoints[i + 1] = cum.value();
    }
    f.breakpoints.back() = 1.0;
    f.validate();
    return f;
}

StepFunction compose(const StepFunction& f, const ScalarMap& phi) {
    StepFunction out = f;
    for (double& t : out.values) t = phi(t);
    return out;
}

double SampledProfile::operator()(double x) const {
    if (x <= s.front()) return v.front();
    if (x >= s.back()) return v.back();
    const auto it = std::upper_bound(s.begin(), s.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - s.begin());
    const double w = (x - s[i - 1]) / (s[i] - s[i - 1]);
    return v[i - 1] + w * (v[i] - v[i - 1]);
}

void SampledProfile::validate(double endpoint_tol) const {
    if (s.size() != v.size() || s.size() < 2)
        throw ValidationError("SampledProfile: needs >= 2 matched samples");
    if (!(a > 0.0)) throw ValidationError("SampledProfile: a must be > 0");
    if (s.front() != 0.0 || s.back() != 1.0)
        throw ValidationError("SampledProfile: s must start at 0 and end at 1");
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (!(s[i] > s[i - 1]))
            throw ValidationError("SampledProfile: s must be strictly increasing");
        if (v[i] < v[i - 1])
            throw ValidationError("SampledProfile: v must be nondecreasing");
    }
    for (double t : v)
        if (std::abs(t) > a + endpoint_tol)
            throw ValidationError("SampledProfile: |v| exceeds the range bound a");
}

StepFunction discretize(const SampledProfile& p) {
    StepFunction f;
    f.breakpoints = p.s;
    f.breakpoints.front() = 0.0;
    f.breakpoints.back() = 1.0;
    f.values.resize(p.s.size() - 1);
    for (std::size_t i = 0; i + 1 < p.s.size(); ++i)
        f.values[i] = 0.5 * (p.v[i] + p.v[i + 1]);
    f.validate();
    return f;
}

}  // namespace blb
