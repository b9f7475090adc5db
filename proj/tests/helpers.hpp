#pragma once

#include <functional>
#include <random>
#include <vector>

#include "blb/step_function.hpp"

namespace testutil {

// Deterministic random step generator: 2..max_pieces pieces, measures
// bounded away from zero, values uniform in [-vmax, vmax].
inline blb::StepFunction random_step(std::mt19937& g, int max_pieces = 8,
                                     double vmax = 1.0) {
    std::uniform_int_distribution<int> np(2, max_pieces);
    const int M = np(g);
    std::uniform_real_distribution<double> um(0.2, 1.0);
    std::uniform_real_distribution<double> uv(-vmax, vmax);
    std::vector<double> ms(M), vs(M);
    double total = 0.0;
    for (int i = 0; i < M; ++i) {
        ms[i] = um(g);
        total += ms[i];
    }
    double partial = 0.0;
    for (int i = 0; i + 1 < M; ++i) {
        ms[i] /= total;
        partial += ms[i];
    }
    ms[M - 1] = 1.0 - partial;
    for (int i = 0; i < M; ++i) vs[i] = uv(g);
    return blb::StepFunction::from_levels(vs, ms);
}

// Independent long-double accumulation of the exact composition integral
// (same breakpoints, different arithmetic path than the library).
inline double independent_composition(
    const blb::StepFunction& f, const std::function<double(double)>& phi) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        acc += static_cast<long double>(phi(f.values[i])) *
               (static_cast<long double>(f.breakpoints[i + 1]) -
                static_cast<long double>(f.breakpoints[i]));
    return static_cast<double>(acc);
}

// Composite Simpson on a smooth function (profile-oracle use).
inline double simpson(const std::function<double(double)>& fn, double a,
                      double b, int n_cells) {
    long double acc = 0.0L;
    const double h = (b - a) / n_cells;
    for (int i = 0; i < n_cells; ++i) {
        const double x0 = a + i * h, x1 = x0 + h;
        acc += (h / 6.0L) * (static_cast<long double>(fn(x0)) +
                             4.0L * static_cast<long double>(fn(0.5 * (x0 + x1))) +
                             static_cast<long double>(fn(x1)));
    }
    return static_cast<double>(acc);
}

}  // namespace testutil
