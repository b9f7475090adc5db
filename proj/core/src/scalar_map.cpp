#include "blb/scalar_map.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

#include "blb/errors.hpp"

namespace blb {

double pow_sign(double t, double e) {
    if (t == 0.0) return 0.0;
    const double m = std::pow(std::abs(t), e);
    return t < 0.0 ? -m : m;
}

namespace maps {

ScalarMap identity() {
    return {"identity", [](double t) { return t; }, 1.0, 1.0, {}};
}

ScalarMap one() {
    return {"one", [](double) { return 1.0; }, 0.0, 1.0, {}};
}

ScalarMap square() {
    return {"square", [](double t) { return t * t; }, 2.0, 1.0, {}};
}

ScalarMap cube() {
    return {"cube", [](double t) { return t * t * t; }, 3.0, 1.0, {}};
}

ScalarMap abs_pow(double q) {
    if (q <= 0.0) throw ValidationError("abs_pow: exponent q must be > 0");
    return {"abs_pow(" + std::to_string(q) + ")",
            [q](double t) { return pow_sign(t, q); },
            q, 1.0, {0.0}};
}

ScalarMap abs_p(double p) {
    if (p <= 0.0) throw ValidationError("abs_p: exponent p must be > 0");
    return {"abs_p(" + std::to_string(p) + ")",
            [p](double t) { return std::pow(std::abs(t), p); },
            p, 1.0, {0.0}};
}

ScalarMap F(double p) {
    if (p <= 1.0) throw ValidationError("F_p: p must be > 1");
    return {"F_p(" + std::to_string(p) + ")",
            [p](double t) {
                return std::pow(std::abs(1.0 + t), p) - 1.0 -
                       std::pow(std::abs(t), p);
            },
            p, std::pow(2.0, p) + 1.0, {-1.0, 0.0}};
}

ScalarMap Phi(double p) {
    if (p <= 1.0) throw ValidationError("Phi_p: p must be > 1");
    return {"Phi_p(" + std::to_string(p) + ")",
            [p](double t) {
                return std::abs(t) <= 1.0 ? p * t : p * pow_sign(t, p - 1.0);
            },
            p - 1.0, p, {-1.0, 0.0, 1.0}};
}

ScalarMap g(double p) {
    if (p <= 1.0) throw ValidationError("g_p: p must be > 1");
    return {"g_p(" + std::to_string(p) + ")",
            [p](double t) {
                return std::pow(std::abs(1.0 + t), p) - 1.0 -
                       std::pow(std::abs(t), p) - p * pow_sign(t, p - 1.0) -
                       p * t;
            },
            p, std::pow(2.0, p) + 2.0 * p + 1.0, {-1.0, 0.0}};
}

ScalarMap shifted_abs_p(double u, double p) {
    if (p <= 0.0) throw ValidationError("shifted_abs_p: p must be > 0");
    return {"shifted_abs_p(" + std::to_string(u) + "," + std::to_string(p) + ")",
            [u, p](double t) { return std::pow(std::abs(u + t), p); },
            p, std::pow(2.0, p) * (1.0 + std::pow(std::abs(u), p)), {-u}};
}

ScalarMap tabulated(std::vector<double> ts, std::vector<double> ys) {
    if (ts.size() != ys.size() || ts.size() < 2)
        throw ValidationError("tabulated: need matching abscissae/values, >= 2");
    for (std::size_t i = 1; i < ts.size(); ++i)
        if (!(ts[i] > ts[i - 1]))
            throw ValidationError("tabulated: abscissae must be increasing");
    double peak = 0.0;
    for (double y : ys) peak = std::max(peak, std::abs(y));
    std::vector<double> kinks(ts.begin(), ts.end());
    auto t_tab = std::make_shared<std::vector<double>>(std::move(ts));
    auto y_tab = std::make_shared<std::vector<double>>(std::move(ys));
    return {"tabulated",
            [t_tab, y_tab](double t) {
                const auto& xs = *t_tab;
                const auto& vs = *y_tab;
                if (t <= xs.front()) return vs.front();
                if (t >= xs.back()) return vs.back();
                const auto it = std::upper_bound(xs.begin(), xs.end(), t);
                const std::size_t i = static_cast<std::size_t>(it - xs.begin());
                const double w = (t - xs[i - 1]) / (xs[i] - xs[i - 1]);
                return vs[i - 1] + w * (vs[i] - vs[i - 1]);
            },
            0.0, peak, std::move(kinks)};
}

std::vector<ScalarMap> default_catalog(double p) {
    return {identity(), square(),      abs_pow(p - 1.0),
            abs_p(p),   F(p),          g(p)};
}

}  // namespace maps
}  // namespace blb
