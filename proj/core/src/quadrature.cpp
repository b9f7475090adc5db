#include "blb/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blb/kahan.hpp"

namespace blb {
namespace {

constexpr double kX8[4] = {0.1834346424956498, 0.5255324099163290,
                           0.7966664774136267, 0.9602898564975362};
constexpr double kW8[4] = {0.3626837833783620, 0.3137066458778873,
                           0.2223810344533745, 0.1012285362903763};

constexpr double kX16[8] = {0.0950125098376374, 0.2816035507792589,
                            0.4580167776572274, 0.6178762444026438,
                            0.7554044083550030, 0.8656312023878317,
                            0.9445750230732326, 0.9894009349916499};
constexpr double kW16[8] = {0.1894506104550685, 0.1826034150449236,
                            0.1691565193950025, 0.1495959888165767,
                            0.1246289712555339, 0.0951585116824928,
                            0.0622535239386479, 0.0271524594117541};

}  // namespace

double gl8(const std::function<double(double)>& fn, double a, double b) {
    const double c = 0.5 * (a + b), r = 0.5 * (b - a);
    CompensatedSum acc;
    for (int i = 0; i < 4; ++i) {
        acc.add(kW8[i] * fn(c - r * kX8[i]));
        acc.add(kW8[i] * fn(c + r * kX8[i]));
    }
    return r * acc.value();
}

double gl16(const std::function<double(double)>& fn, double a, double b) {
    const double c = 0.5 * (a + b), r = 0.5 * (b - a);
    CompensatedSum acc;
    for (int i = 0; i < 8; ++i) {
        acc.add(kW16[i] * fn(c - r * kX16[i]));
        acc.add(kW16[i] * fn(c + r * kX16[i]));
    }
    return r * acc.value();
}

QuadResult integrate_1d(const std::function<double(double)>& fn, double a,
                        double b, const std::vector<double>& kinks,
                        int levels) {
    if (!(b > a)) return {0.0, 0.0};

    std::vector<double> cuts{a, b};
    for (double k : kinks)
        if (k > a && k < b) cuts.push_back(k);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // Geometric grading toward both ends of each panel.
    std::vector<double> mesh;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1], len = hi - lo;
        mesh.push_back(lo);
        std::vector<double> left, right;
        double f = 0.5;
        for (int m = 0; m < levels; ++m, f *= 0.5) {
            const double dl = lo + len * f * 0.5;
            const double dr = hi - len * f * 0.5;
            if (dl >= dr) break;
            left.push_back(dl);
            right.push_back(dr);
        }
        // left[] descends toward lo in construction order, so reverse.
        for (auto it = left.rbegin(); it != left.rend(); ++it) mesh.push_back(*it);
        mesh.push_back(lo + 0.5 * len);
        for (double x : right) mesh.push_back(x);
    }
    mesh.push_back(b);
    std::sort(mesh.begin(), mesh.end());
    mesh.erase(std::unique(mesh.begin(), mesh.end()), mesh.end());

    CompensatedSum fine, coarse, scale;
    for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
        const double v16 = gl16(fn, mesh[i], mesh[i + 1]);
        fine.add(v16);
        coarse.add(gl8(fn, mesh[i], mesh[i + 1]));
        scale.add(std::abs(v16));
    }
    const double floor =
        64.0 * std::numeric_limits<double>::epsilon() * (scale.value() + 1.0);
    return {fine.value(),
            std::max(std::abs(fine.value() - coarse.value()), floor)};
}

}  // namespace blb
