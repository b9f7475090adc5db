#pragma once

#include <functional>
#include <string>
#include <vector>

namespace blb {

// |t|^e · sign(t); pow_sign(t, p−1) realizes |t|^{p−2}·t without the singular
// intermediate 0^{negative} (continuous for every exponent e > 0).
double pow_sign(double t, double e);

// One-argument real map from a fixed catalog, tagged with a growth bound
// |φ(t)| ≤ C·(1 + |t|^q) so integration layers can budget error estimates.
struct ScalarMap {
    std::string name;                   // catalog identifier, e.g. "F_p(2.5)"
    std::function<double(double)> fn;
    double growth_q = 0.0;
    double growth_C = 1.0;
    // Abscissae where the map (or its derivative) has a kink; quadrature
    // panels split at preimages of these under monotone profiles.
    std::vector<double> kinks;

    double operator()(double t) const { return fn(t); }
};

namespace maps {

ScalarMap identity();
ScalarMap one();                         // constant 1 (total-mass pairing)
ScalarMap square();                      // t²
ScalarMap cube();                        // t³
ScalarMap abs_pow(double q);             // power-sign map |t|^{q−1}·t
ScalarMap abs_p(double p);               // |t|^p
ScalarMap F(double p);                   // |1+t|^p − 1 − |t|^p
ScalarMap Phi(double p);                 // p·t on |t|≤1, p·|t|^{p−2}t outside
ScalarMap g(double p);                   // F_p(t) − p|t|^{p−2}t − p·t
ScalarMap shifted_abs_p(double u, double p);  // |u + t|^p
ScalarMap tabulated(std::vector<double> ts, std::vector<double> ys);

// The default property-testing catalog at a given exponent p.
std::vector<ScalarMap> default_catalog(double p);

}  // namespace maps
}  // namespace blb
