#include "blb/oscillate.hpp"

#include <cmath>

#include "blb/errors.hpp"
#include "blb/funcspace.hpp"
#include "blb/parallel.hpp"

namespace blb {

StepFunction rescale(const StepFunction& v, unsigned j) {
    v.validate();
    if (j == 0) throw ValidationError("rescale: j must be >= 1");
    if (j == 1) return v;
    const std::size_t m = v.pieces();
    StepFunction out;
    out.breakpoints.reserve(j * m + 1);
    out.values.reserve(j * m);
    out.breakpoints.push_back(0.0);
    const double dj = static_cast<double>(j);
    for (unsigned k = 0; k < j; ++k) {
        for (std::size_t i = 0; i < m; ++i) {
            out.values.push_back(v.values[i]);
            out.breakpoints.push_back((static_cast<double>(k) +
                                       v.breakpoints[i + 1]) / dj);
        }
    }
    out.breakpoints.back() = 1.0;
    return out;
}

double pair_oscillated(const StepFunction& v, const StepFunction& psi,
                       unsigned j) {
    return pair(rescale(v, j), psi);
}

double weak_limit_mean(const StepFunction& v) {
    return integrate_composition(v, maps::identity());
}

double composition_weak_limit(const StepFunction& v, const ScalarMap& phi) {
    return integrate_composition(v, phi);
}

WeakLimitEstimate convergence_table(const StepFunction& v,
                                    const StepFunction& psi,
                                    const std::vector<unsigned>& j_list) {
    if (j_list.empty())
        throw ValidationError("convergence_table: j_list must be nonempty");
    for (std::size_t i = 0; i < j_list.size(); ++i) {
        if (j_list[i] == 0)
            throw ValidationError("convergence_table: j must be >= 1");
        if (i > 0 && j_list[i] <= j_list[i - 1])
            throw ValidationError("convergence_table: j_list must be increasing");
    }
    WeakLimitEstimate est;
    est.j_list = j_list;
    est.pairings.resize(j_list.size());
    est.predicted_limit =
        weak_limit_mean(v) * integrate_composition(psi, maps::identity());
    parallel_for(j_list.size(), [&](std::size_t i) {
        est.pairings[i] = pair_oscillated(v, psi, j_list[i]);
    });
    const std::size_t tail_from = j_list.size() / 2;
    for (std::size_t i = tail_from; i < j_list.size(); ++i)
        est.max_deviation_tail =
            std::max(est.max_deviation_tail,
                     std::abs(est.pairings[i] - est.predicted_limit));
    return est;
}

}  // namespace blb
