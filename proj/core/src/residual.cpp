#include "blb/residual.hpp"

#include <cmath>

#include "blb/errors.hpp"
#include "blb/scalar_map.hpp"

namespace blb {

int Residual::arity() const {
    switch (kind) {
        case ResidualKind::Psi_p:
        case ResidualKind::Fvec_p:
            return 2;
        default:
            return 1;
    }
}

void Residual::validate() const {
    if (!(p > 1.0)) throw ValidationError("Residual: p must be > 1");
}

std::string to_string(ResidualKind kind) {
    switch (kind) {
        case ResidualKind::g_p: return "g_p";
        case ResidualKind::F_p: return "F_p";
        case ResidualKind::Phi_p: return "Phi_p";
        case ResidualKind::Psi_p: return "Psi_p";
        case ResidualKind::Fvec_p: return "Fvec_p";
        case ResidualKind::F_minus_Phi_p: return "F_minus_Phi_p";
    }
    return "?";
}

std::string to_string(PsiVariant variant) {
    return variant == PsiVariant::as_printed ? "as_printed" : "sign_corrected";
}

ResidualKind residual_kind_from_string(const std::string& s) {
    if (s == "g_p") return ResidualKind::g_p;
    if (s == "F_p") return ResidualKind::F_p;
    if (s == "Phi_p") return ResidualKind::Phi_p;
    if (s == "Psi_p") return ResidualKind::Psi_p;
    if (s == "Fvec_p") return ResidualKind::Fvec_p;
    if (s == "F_minus_Phi_p") return ResidualKind::F_minus_Phi_p;
    throw ValidationError("unknown residual kind: " + s);
}

PsiVariant psi_variant_from_string(const std::string& s) {
    if (s == "as_printed") return PsiVariant::as_printed;
    if (s == "sign_corrected") return PsiVariant::sign_corrected;
    throw ValidationError("unknown Psi variant: " + s);
}

double F_residual(double p, double t) {
    return std::pow(std::abs(1.0 + t), p) - 1.0 - std::pow(std::abs(t), p);
}

double g_residual(double p, double t) {
    return F_residual(p, t) - p * pow_sign(t, p - 1.0) - p * t;
}

double Phi_residual(double p, double t) {
    return std::abs(t) <= 1.0 ? p * t : p * pow_sign(t, p - 1.0);
}

double Psi_residual(double p, double s, double t, PsiVariant variant) {
    const double as = std::abs(s);
    if (variant == PsiVariant::as_printed) {
        return std::abs(t) <= as ? std::pow(as, p - 1.0) * t
                                 : as * pow_sign(t, p - 1.0);
    }
    return std::abs(t) <= as ? p * pow_sign(s, p - 1.0) * t
                             : p * s * pow_sign(t, p - 1.0);
}

double Fvec_residual(double p, double t, double theta) {
    const double q = 1.0 + t * t + 2.0 * t * theta;
    return std::pow(std::abs(q), 0.5 * p) - 1.0 - std::pow(std::abs(t), p) -
           p * pow_sign(t, p - 1.0) * theta - p * t * theta;
}

double eval_residual(const Residual& r, double t) {
    r.validate();
    switch (r.kind) {
        case ResidualKind::g_p: return g_residual(r.p, t);
        case ResidualKind::F_p: return F_residual(r.p, t);
        case ResidualKind::Phi_p: return Phi_residual(r.p, t);
        case ResidualKind::F_minus_Phi_p:
            return F_residual(r.p, t) - Phi_residual(r.p, t);
        default:
            throw ValidationError("eval_residual: " + to_string(r.kind) +
                                  " expects a pair, got a scalar");
    }
}

double eval_residual(const Residual& r, double x, double y) {
    r.validate();
    switch (r.kind) {
        case ResidualKind::Psi_p:
            return Psi_residual(r.p, x, y, r.psi_variant);
        case ResidualKind::Fvec_p:
            return Fvec_residual(r.p, x, y);
        default:
            throw ValidationError("eval_residual: " + to_string(r.kind) +
                                  " expects a scalar, got a pair");
    }
}

}  // namespace blb
