#include <cmath>

#include "doctest.h"

#include "blb/errors.hpp"
#include "blb/residual.hpp"

using namespace blb;

TEST_CASE("g_4 collapses to 6t^2") {
    for (double t = -1.0; t <= 1.0; t += 1e-3)
        CHECK(std::abs(g_residual(4.0, t) - 6.0 * t * t) <= 1e-12);
}

TEST_CASE("g_2 collapses to -2t") {
    for (double t = -1.0; t <= 1.0; t += 1e-3)
        CHECK(std::abs(g_residual(2.0, t) + 2.0 * t) <= 1e-12);
}

TEST_CASE("pinned point values") {
    CHECK(g_residual(3.0, -1.0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(F_residual(4.0, 1.0) == doctest::Approx(14.0).epsilon(1e-15));
    CHECK(F_residual(4.0, -1.0) == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(F_residual(4.0, 0.0) == 0.0);
    CHECK(g_residual(4.0, 0.0) == 0.0);
}

TEST_CASE("Phi is the clipped duality map") {
    CHECK(Phi_residual(4.0, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(Phi_residual(4.0, -0.5) == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(Phi_residual(4.0, 2.0) == doctest::Approx(32.0).epsilon(1e-15));
    CHECK(Phi_residual(4.0, -2.0) == doctest::Approx(-32.0).epsilon(1e-15));
    // continuity at |t| = 1
    CHECK(std::abs(Phi_residual(2.5, 1.0) - 2.5) <= 1e-15);
}

TEST_CASE("vector residual at theta = 1 reduces to the scalar one") {
    for (double t = -1.0; t <= 1.0; t += 1e-3)
        CHECK(std::abs(Fvec_residual(4.0, t, 1.0) - g_residual(4.0, t)) <=
              1e-12);
}

TEST_CASE("Fvec_4 equals 2t^2(1+2theta^2)") {
    for (double t : {-1.0, -0.3, 0.0, 0.4, 1.0})
        for (double th : {-1.0, -0.5, 0.0, 0.7, 1.0})
            CHECK(std::abs(Fvec_residual(4.0, t, th) -
                           2.0 * t * t * (1.0 + 2.0 * th * th)) <= 1e-12);
}

TEST_CASE("Psi branch values at a negative first argument") {
    // |t| >= |s| branch: the corrected form carries plain s, so domination
    // |s+t|^p - |s|^p - |t|^p >= Psi survives s < 0.
    CHECK(Psi_residual(4.0, -1.0, 2.0, PsiVariant::sign_corrected) ==
          doctest::Approx(-32.0).epsilon(1e-15));
    CHECK(Psi_residual(4.0, -1.0, 2.0, PsiVariant::as_printed) ==
          doctest::Approx(8.0).epsilon(1e-15));
    const double slack_corrected =
        std::pow(std::abs(-1.0 + 2.0), 4.0) - 1.0 - 16.0 -
        Psi_residual(4.0, -1.0, 2.0, PsiVariant::sign_corrected);
    const double slack_printed =
        std::pow(std::abs(-1.0 + 2.0), 4.0) - 1.0 - 16.0 -
        Psi_residual(4.0, -1.0, 2.0, PsiVariant::as_printed);
    CHECK(slack_corrected == doctest::Approx(16.0).epsilon(1e-15));
    CHECK(slack_printed == doctest::Approx(-24.0).epsilon(1e-15));
}

TEST_CASE("Psi sign-corrected variant is continuous across |t| = |s|") {
    for (double p : {2.0, 2.5, 3.0, 4.0})
        for (double s : {-1.5, -0.7, 0.4, 1.2}) {
            const double at = Psi_residual(p, s, s, PsiVariant::sign_corrected);
            const double below =
                Psi_residual(p, s, s * (1.0 - 1e-9), PsiVariant::sign_corrected);
            CHECK(std::abs(at - below) <= 1e-6 * (1.0 + std::abs(at)));
        }
}

TEST_CASE("residual kind round-trips through strings") {
    for (auto kind : {ResidualKind::g_p, ResidualKind::F_p, ResidualKind::Phi_p,
                      ResidualKind::Psi_p, ResidualKind::Fvec_p,
                      ResidualKind::F_minus_Phi_p})
        CHECK(residual_kind_from_string(to_string(kind)) == kind);
    CHECK_THROWS_AS(residual_kind_from_string("nope"), ValidationError);
    for (auto v : {PsiVariant::as_printed, PsiVariant::sign_corrected})
        CHECK(psi_variant_from_string(to_string(v)) == v);
}

TEST_CASE("eval_residual enforces arity") {
    Residual r;
    r.kind = ResidualKind::Psi_p;
    r.p = 3.0;
    CHECK(r.arity() == 2);
    CHECK_THROWS_AS(eval_residual(r, 0.5), ValidationError);
    r.kind = ResidualKind::g_p;
    CHECK(r.arity() == 1);
    CHECK_THROWS_AS(eval_residual(r, 0.5, 0.5), ValidationError);
    CHECK(eval_residual(r, -1.0) == doctest::Approx(4.0).epsilon(1e-15));
}
