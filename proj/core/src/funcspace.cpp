#include "blb/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blb/errors.hpp"
#include "blb/kahan.hpp"

namespace blb {

double integrate_composition(const StepFunction& f, const ScalarMap& phi) {
    f.validate();
    CompensatedSum acc;
    for (std::size_t i = 0; i < f.pieces(); ++i)
        acc.add(phi(f.values[i]) * (f.breakpoints[i + 1] - f.breakpoints[i]));
    return acc.value();
}

QuadResult integrate_composition_quad(const SampledProfile& f,
                                      const ScalarMap& phi) {
    f.validate();
    CompensatedSum value, err, scale;
    for (std::size_t i = 0; i + 1 < f.s.size(); ++i) {
        const double s0 = f.s[i], s1 = f.s[i + 1];
        const double v0 = f.v[i], v1 = f.v[i + 1];
        // Split the cell where the linear segment crosses a kink of φ.
        std::vector<double> cuts{s0, s1};
        if (v1 != v0) {
            for (double k : phi.kinks) {
                const double lo = std::min(v0, v1), hi = std::max(v0, v1);
                if (k > lo && k < hi)
                    cuts.push_back(s0 + (s1 - s0) * (k - v0) / (v1 - v0));
            }
        }
        std::sort(cuts.begin(), cuts.end());
        const auto at = [&](double x) {
            const double w = (x - s0) / (s1 - s0);
            return v0 + w * (v1 - v0);
        };
        const auto seg = [&](double x) { return phi(at(x)); };
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            const double lo = cuts[c], hi = cuts[c + 1];
            if (!(hi > lo)) continue;
            // Where the segment range touches a kink of φ (the cut above
            // puts kinks exactly at segment ends), φ's derivatives may blow
            // up algebraically there; graded panels restore full accuracy.
            const double a0 = at(lo), a1 = at(hi);
            const double ktol =
                1e-9 * (1.0 + std::max(std::abs(a0), std::abs(a1)));
            const double rlo = std::min(a0, a1) - ktol;
            const double rhi = std::max(a0, a1) + ktol;
            bool near_kink = false;
            for (double k : phi.kinks)
                if (k >= rlo && k <= rhi) near_kink = true;
            if (near_kink) {
                const QuadResult q = integrate_1d(seg, lo, hi, {}, 24);
                value.add(q.value);
                err.add(q.error_estimate);
                scale.add(std::abs(q.value));
            } else {
                const double v8 = gl8(seg, lo, hi);
                value.add(v8);
                err.add(std::abs(gl16(seg, lo, hi) - v8));
                scale.add(std::abs(v8));
            }
        }
    }
    const double floor =
        64.0 * std::numeric_limits<double>::epsilon() * (scale.value() + 1.0);
    return {value.value(), std::max(err.value(), floor)};
}

double integrate_composition(const SampledProfile& f, const ScalarMap& phi) {
    return integrate_composition_quad(f, phi).value;
}

double pair(const StepFunction& f, const StepFunction& g) {
    f.validate();
    g.validate();
    CompensatedSum acc;
    std::size_t i = 0, j = 0;
    double x = 0.0;
    while (x < 1.0) {
        const double nx = std::min(f.breakpoints[i + 1], g.breakpoints[j + 1]);
        acc.add(f.values[i] * g.values[j] * (nx - x));
        if (f.breakpoints[i + 1] == nx) ++i;
        if (g.breakpoints[j + 1] == nx) ++j;
        x = nx;
    }
    return acc.value();
}

double lp_norm(const StepFunction& f, double p) {
    if (!(p > 1.0)) throw ValidationError("lp_norm: p must be > 1");
    return std::pow(integrate_composition(f, maps::abs_p(p)), 1.0 / p);
}

double lp_norm(const SampledProfile& f, double p) {
    if (!(p > 1.0)) throw ValidationError("lp_norm: p must be > 1");
    return std::pow(integrate_composition(f, maps::abs_p(p)), 1.0 / p);
}

}  // namespace blb
