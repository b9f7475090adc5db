#pragma once

#include <functional>
#include <vector>

namespace blb {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

// Fixed-order Gauss–Legendre rules on [a, b].
double gl8(const std::function<double(double)>& fn, double a, double b);
double gl16(const std::function<double(double)>& fn, double a, double b);

// Deterministic panel quadrature on [a, b]: splits at the interior kinks,
// grades panels geometrically toward both panel ends (2^-1 … 2^-levels) so
// algebraic singularities of integrand derivatives at kinks/endpoints decay
// below double precision, and applies GL16 per subpanel.  The error estimate
// is the GL8-vs-GL16 discrepancy plus a roundoff floor.
QuadResult integrate_1d(const std::function<double(double)>& fn, double a,
                        double b, const std::vector<double>& kinks = {},
                        int levels = 24);

}  // namespace blb
