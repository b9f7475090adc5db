#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blb/defect.hpp"
#include "blb/quadrature.hpp"
#include "blb/scalar_map.hpp"
#include "blb/step_function.hpp"

namespace blb {

// Search specification: minimize ∫F_p(v) over profiles v with vanishing
// moments against φ₁ = identity and φ₂ = |t|^{p−2}t, levels in [−a, a].
struct MomentSpec {
    double p = 1.5;
    double eps_mom = 1e-8;  // admissible moment residual
    double delta = 1e-3;    // required negativity margin for a witness
    double a = 1.0;         // level range bound

    void validate() const;  // p ∈ (1,3), p ≠ 2
};

struct CounterexampleReport {
    Profile profile;
    double p = 1.5;
    double moment1 = 0.0;   // ∫ v
    double moment2 = 0.0;   // ∫ |v|^{p−2}v
    double objective = 0.0; // ∫ F_p(v)
    bool verdict = false;   // moments ≤ ε_mom and objective ≤ −δ
    std::string route;      // "step" | "ode"
    std::string message;
    std::optional<DefectSeries> defect_check;
};

// Direct route: step profile with `levels` distinct nonzero values, measures
// solved exactly from the moment constraints; coarse grid seeding, seeded
// Nelder–Mead refinement, Newton polish.  Deterministic given (spec, seed).
CounterexampleReport search_step_profile(const MomentSpec& spec,
                                         int levels = 3, unsigned seed = 0);

// Density ψ(t) = Σ c_k (t/a)^k on [−a, a] with ψ ≥ 1, exact vanishing
// moments against φ₁, φ₂, and ∫F_p·ψ pushed as negative as the basis allows.
struct DensityDesign {
    double a = 1.0;
    std::vector<double> coefficients;  // monomial basis in t/a
    double psi_min = 0.0;              // floor check: min ψ over [−a, a]
    double gamma = 0.0;                // ∫ψ — the analytic shooting constant
    bool success = false;              // normalized objective < 0 achieved
    double normalized_objective = 0.0; // ∫F_p ψ / ∫ψ (best found, never faked)
    double p = 1.5;

    double psi(double t) const;
    void validate() const;
};

DensityDesign design_density(const MomentSpec& spec, double a, int basis_size);

// Shooting solve of v' = γ/ψ(v), v(0) = −a, v(1) = a, fixed-step RK4 with γ
// bisection; the endpoint map γ ↦ v(1) is verified monotone along the way.
std::pair<double, SampledProfile> solve_profile_ode(const DensityDesign& psi,
                                                    double a, int n_steps,
                                                    double gamma_tol);

// γ⁻¹ ∫_{[−a,a]} φ(t) ψ(t) dt — the pushforward of the profile's composition.
double pushforward_moment(const DensityDesign& design, const ScalarMap& phi);
QuadResult pushforward_moment_quad(const DensityDesign& design,
                                   const ScalarMap& phi);

struct VerifyReport {
    bool pairings_vanish = false;          // ⟨T_j v, ψ⟩ → (∫v)(∫ψ) with ∫v ≈ 0
    bool composed_pairings_vanish = false; // same for φ₂∘v
    bool defect_negative = false;          // u = 1 defect limit ≤ −δ
    double defect_limit = 0.0;
    double max_tail_pairing = 0.0;
    double max_tail_composed_pairing = 0.0;
    bool verdict = false;
};

VerifyReport verify_counterexample(const CounterexampleReport& report,
                                   const std::vector<unsigned>& j_list);

// ODE route end-to-end: design, shoot, wrap the profile into a report.
CounterexampleReport ode_route_report(const MomentSpec& spec, double a,
                                      int basis_size, int n_steps,
                                      double gamma_tol);

}  // namespace blb
