#pragma once

#include <variant>
#include <vector>

#include "blb/residual.hpp"
#include "blb/step_function.hpp"

namespace blb {

using Profile = std::variant<StepFunction, SampledProfile>;

// The defect sequence D_j = ∫|u+T_j v|^p − ∫|u|^p − ∫|T_j v|^p together with
// its j→∞ limit predicted level-wise from u.
struct DefectSeries {
    StepFunction u;
    Profile v;
    double p = 2.0;
    std::vector<unsigned> j_list;
    std::vector<double> D;
    double theoretical_limit = 0.0;
    double tail_error = 0.0;  // max |D_j − limit| over the last half of j_list
};

double bl_defect(const StepFunction& u, const StepFunction& v, double p,
                 unsigned j);
double bl_defect(const StepFunction& u, const SampledProfile& v, double p,
                 unsigned j);

// Σᵢ mᵢ·∫₀¹ (|uᵢ+v(s)|^p − |uᵢ|^p − |v(s)|^p) ds over u's levels (uᵢ, mᵢ).
double defect_limit_theory(const StepFunction& u, const StepFunction& v,
                           double p);
double defect_limit_theory(const StepFunction& u, const SampledProfile& v,
                           double p);

DefectSeries defect_series(const StepFunction& u, const Profile& v, double p,
                           const std::vector<unsigned>& j_list);

struct P4IdentityReport {
    bool preconditions_ok = false;  // ∫v = ∫v³ = 0 within tolerance
    double moment1 = 0.0;
    double moment3 = 0.0;
    double cross_term = 0.0;  // 6·Σᵢ mᵢuᵢ² · ∫v²
    std::vector<double> deviations;  // |D_j − cross_term| per j
    double max_tail_deviation = 0.0;
    bool exact_for_constant_u = false;  // D_j ≡ cross term when u is constant
    bool ok = false;
};

P4IdentityReport p4_identity_check(const StepFunction& u, const StepFunction& v,
                                   const std::vector<unsigned>& j_list);

struct Theorem41Report {
    double p = 2.0;
    PsiVariant variant = PsiVariant::sign_corrected;
    std::vector<double> psi_integrals;  // ∫ Ψ(u, T_j v) dx per j
    double psi_limit = 0.0;             // level-wise j→∞ limit
    bool psi_vanishes = false;          // limit ≈ 0 (the Eq.-style hypothesis)
    std::vector<double> D;
    double min_D_tail = 0.0;
    double min_pointwise_slack = 0.0;   // D-integrand − Ψ-integrand on cells
    double tail_tolerance = 0.0;
    bool conclusion_holds = false;      // ψ-limit 0 ⇒ D_j ≥ −tail_tolerance
};

Theorem41Report theorem41_check(const StepFunction& u, const StepFunction& v,
                                double p, const std::vector<unsigned>& j_list,
                                PsiVariant variant);

// Geometric j list lo, 2·lo, 4·lo, … while ≤ hi.
std::vector<unsigned> geometric_j_list(unsigned lo, unsigned hi);

}  // namespace blb
