#pragma once

#include <vector>

#include "blb/scalar_map.hpp"
#include "blb/step_function.hpp"

namespace blb {

// Exact step representation of (T_j v)(x) = v(jx mod 1): v compressed to
// [0, 1/j] and tiled periodically; at most j·M pieces.
StepFunction rescale(const StepFunction& v, unsigned j);

// Exact ⟨T_j v, ψ⟩ via rescale + pair.
double pair_oscillated(const StepFunction& v, const StepFunction& psi,
                       unsigned j);

// ∫₀¹ v dx — the weak limit of T_j v.
double weak_limit_mean(const StepFunction& v);

// ∫₀¹ φ(v(s)) ds — the weak limit of φ(T_j v) = T_j φ(v).
double composition_weak_limit(const StepFunction& v, const ScalarMap& phi);

struct WeakLimitEstimate {
    std::vector<unsigned> j_list;
    std::vector<double> pairings;    // ⟨T_j v, ψ⟩
    double predicted_limit = 0.0;    // (∫v)·(∫ψ)
    double max_deviation_tail = 0.0; // over the last half of j_list
};

WeakLimitEstimate convergence_table(const StepFunction& v,
                                    const StepFunction& psi,
                                    const std::vector<unsigned>& j_list);

}  // namespace blb
