#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blb/residual.hpp"

namespace blb {

// Axis-aligned evaluation box, one interval per residual argument.
struct Box {
    std::vector<std::pair<double, double>> dims;
    void validate(int arity) const;
};

enum class Verdict { certified_nonneg_up_to_tol, violated, inconclusive };
std::string to_string(Verdict v);

struct InequalityCertificate {
    Residual residual;
    Box box;
    double h = 0.0;                      // requested grid step
    double lipschitz_bound = 0.0;        // Σ per-coordinate derivative bounds
    bool lipschitz_available = false;
    double grid_min = 0.0;
    std::vector<double> witness;         // grid argmin
    double certified_lower_bound = 0.0;  // grid_min − L·h/2
    double tolerance = 0.0;
    Verdict verdict = Verdict::inconclusive;
    std::string reason;
    // Local value check near equality points: no grid value below −1e−12.
    bool equality_neighborhood_ok = false;
};

// Analytic term-wise bound on Σᵢ sup|∂ᵢ residual| over the box; nullopt when
// the derivative is unbounded there (e.g. g_p near t = 0 for p < 2), with the
// explanation in `reason`.
std::optional<double> lipschitz_sum_bound(const Residual& r, const Box& box,
                                          std::string* reason = nullptr);

// For the two-variable Ψ kind the certified quantity is the domination
// slack |s+t|^p − |s|^p − |t|^p − Ψ_p(s,t) (raw Ψ is sign-indefinite);
// every other kind certifies the residual value itself.
InequalityCertificate certify_nonneg(const Residual& r, const Box& box,
                                     double h, double tol);

struct Violation {
    std::vector<double> point;
    double value = 0.0;
};

// Grid argmin refined by golden-section descent when the grid minimum is
// negative; nullopt otherwise.
std::optional<Violation> find_violation(const Residual& r, const Box& box,
                                        double search_resolution);

struct ScanRow {
    double p = 0.0;
    double grid_min = 0.0;
    double argmin = 0.0;
    std::string verdict;  // "violated" | "nonneg_on_grid"
};

std::vector<ScanRow> scan_p(const std::vector<double>& p_list,
                            ResidualKind kind, const Box& box, double h,
                            double tol = 1e-9);

struct Theorem21Report {
    double p = 0.0;
    double max_reduction_residual = 0.0;   // |Fvec_p(t,1) − g_p(t)|
    double max_symmetry_residual = 0.0;    // |Fvec_p(t,−1) − Fvec_p(−t,1)|
    double min_second_difference = 0.0;    // discrete θ-convexity
    // Zero slack in θ occurs only on the scalar rays θ = ±1; interior θ
    // minima stay strictly positive (t = 0 slices are identically zero).
    bool equality_only_at_theta_pm1 = true;
    bool ok = false;
};

Theorem21Report check_theorem21_structure(double p,
                                          const std::vector<double>& t_grid,
                                          const std::vector<double>& theta_grid);

struct PsiDominationReport {
    double p = 0.0;
    PsiVariant variant = PsiVariant::sign_corrected;
    double min_slack = 0.0;  // min of |s+t|^p − |s|^p − |t|^p − Ψ(s,t)
    double s_at_min = 0.0;
    double t_at_min = 0.0;
    std::size_t violations = 0;        // grid points with slack < −1e−10
    double max_abs_slack_at_equality = 0.0;  // along λ = t/s = −1
    bool ok = false;
};

PsiDominationReport check_psi_domination(double p,
                                         const std::vector<double>& s_grid,
                                         const std::vector<double>& t_grid,
                                         PsiVariant variant);

// Convenience: uniform grid with step ≤ h covering [lo, hi] (endpoints
// included; at least two points).
std::vector<double> uniform_grid(double lo, double hi, double h);

}  // namespace blb
