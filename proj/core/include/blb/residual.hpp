#pragma once

#include <string>

namespace blb {

// Scalar/vector residuals of the pointwise inequalities under study.
//   g_p(t)      = |1+t|^p − 1 − |t|^p − p|t|^{p−2}t − p·t
//   F_p(t)      = |1+t|^p − 1 − |t|^p
//   Phi_p(t)    = p·t for |t| ≤ 1, p·|t|^{p−2}t for |t| > 1
//   Psi_p(s,t)  = two-branch companion of Phi_p, continuous across |t| = |s|
//   Fvec_p(t,θ) = |1+t²+2tθ|^{p/2} − 1 − |t|^p − p|t|^{p−2}tθ − p·tθ
enum class ResidualKind { g_p, F_p, Phi_p, Psi_p, Fvec_p, F_minus_Phi_p };

// The source prints Psi's branches as |s|^{p−1}t and |s||t|^{p−2}t; carrying
// the λ = t/s scaling through the proof instead gives p|s|^{p−2}s·t and
// p·s·|t|^{p−2}t.  Both are kept; domination holds only for the second.
enum class PsiVariant { as_printed, sign_corrected };

struct Residual {
    ResidualKind kind = ResidualKind::g_p;
    double p = 3.0;
    PsiVariant psi_variant = PsiVariant::as_printed;

    [[nodiscard]] int arity() const;
    void validate() const;  // p > 1 etc.
};

std::string to_string(ResidualKind kind);
std::string to_string(PsiVariant variant);
ResidualKind residual_kind_from_string(const std::string& s);
PsiVariant psi_variant_from_string(const std::string& s);

// Raw evaluators.
double F_residual(double p, double t);
double g_residual(double p, double t);
double Phi_residual(double p, double t);
double Psi_residual(double p, double s, double t, PsiVariant variant);
double Fvec_residual(double p, double t, double theta);

// Dispatchers; arity mismatches throw ValidationError.
double eval_residual(const Residual& r, double t);
double eval_residual(const Residual& r, double x, double y);

}  // namespace blb
