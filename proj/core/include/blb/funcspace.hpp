#pragma once

#include "blb/quadrature.hpp"
#include "blb/scalar_map.hpp"
#include "blb/step_function.hpp"

namespace blb {

// ∫₀¹ φ(f(x)) dx, exact (compensated sum of φ(tᵢ)·widths) for steps.
double integrate_composition(const StepFunction& f, const ScalarMap& phi);

// Same for profiles: composite Gauss–Legendre (order 8) per sample cell,
// cells split at preimages of φ's kinks; returns the recorded error estimate.
QuadResult integrate_composition_quad(const SampledProfile& f,
                                      const ScalarMap& phi);
double integrate_composition(const SampledProfile& f, const ScalarMap& phi);

// Exact ∫₀¹ f·g dx via merged breakpoints.
double pair(const StepFunction& f, const StepFunction& g);

// (∫|f|ᵖ)^{1/p}; p > 1 required.
double lp_norm(const StepFunction& f, double p);
double lp_norm(const SampledProfile& f, double p);

}  // namespace blb
