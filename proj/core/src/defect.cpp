#include "blb/defect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "blb/errors.hpp"
#include "blb/funcspace.hpp"
#include "blb/kahan.hpp"
#include "blb/oscillate.hpp"
#include "blb/parallel.hpp"
#include "blb/quadrature.hpp"

namespace blb {
namespace {

double defect_cell(double u, double w, double p) {
    return std::pow(std::abs(u + w), p) - std::pow(std::abs(u), p) -
           std::pow(std::abs(w), p);
}

// Cumulative ∫₀^s φ(v(σ)) dσ on a profile's cell mesh, with O(1)-amortized
// subrange queries (partial end cells integrated on demand).
class ProfileCum {
public:
    ProfileCum(const SampledProfile& prof, ScalarMap phi)
        : prof_(prof), phi_(std::move(phi)), prefix_(prof.s.size(), 0.0) {
        CompensatedSum acc;
        for (std::size_t i = 0; i + 1 < prof_.s.size(); ++i) {
            acc.add(cell_part(i, prof_.s[i], prof_.s[i + 1]));
            prefix_[i + 1] = acc.value();
        }
    }

    // ∫_{s0}^{s1} φ(v(σ)) dσ, 0 ≤ s0 ≤ s1 ≤ 1.
    double range(double s0, double s1) const {
        if (!(s1 > s0)) return 0.0;
        const std::size_t c0 = cell_of(s0), c1 = cell_of(s1);
        if (c0 == c1) return cell_part(c0, s0, s1);
        double acc = cell_part(c0, s0, prof_.s[c0 + 1]) +
                     cell_part(c1, prof_.s[c1], s1);
        acc += prefix_[c1] - prefix_[c0 + 1];
        return acc;
    }

private:
    std::size_t cell_of(double s) const {
        const auto it =
            std::upper_bound(prof_.s.begin(), prof_.s.end(), s);
        std::size_t i = static_cast<std::size_t>(it - prof_.s.begin());
        if (i == 0) return 0;
        if (i >= prof_.s.size()) return prof_.s.size() - 2;
        return i - 1;
    }

    double cell_part(std::size_t i, double lo, double hi) const {
        const double s0 = prof_.s[i], s1 = prof_.s[i + 1];
        const double v0 = prof_.v[i], v1 = prof_.v[i + 1];
        const auto seg = [&](double x) {
            const double w = (x - s0) / (s1 - s0);
            return phi_(v0 + w * (v1 - v0));
        };
        std::vector<double> cuts{lo, hi};
        if (v1 != v0) {
            for (double k : phi_.kinks) {
                const double lo_v = std::min(v0, v1), hi_v = std::max(v0, v1);
                if (k > lo_v && k < hi_v) {
                    const double sx = s0 + (s1 - s0) * (k - v0) / (v1 - v0);
                    if (sx > lo && sx < hi) cuts.push_back(sx);
                }
            }
            std::sort(cuts.begin(), cuts.end());
        }
        double acc = 0.0;
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c)
            if (cuts[c + 1] > cuts[c]) acc += gl8(seg, cuts[c], cuts[c + 1]);
        return acc;
    }

    const SampledProfile& prof_;
    ScalarMap phi_;
    std::vector<double> prefix_;
};

}  // namespace

double bl_defect(const StepFunction& u, const StepFunction& v, double p,
                 unsigned j) {
    if (!(p > 1.0)) throw ValidationError("bl_defect: p must be > 1");
    u.validate();
    const StepFunction w = rescale(v, j);
    CompensatedSum acc;
    std::size_t i = 0, k = 0;
    double x = 0.0;
    while (x < 1.0) {
        const double nx = std::min(u.breakpoints[i + 1], w.breakpoints[k + 1]);
        acc.add(defect_cell(u.values[i], w.values[k], p) * (nx - x));
        if (u.breakpoints[i + 1] == nx) ++i;
        if (w.breakpoints[k + 1] == nx) ++k;
        x = nx;
    }
    return acc.value();
}

double bl_defect(const StepFunction& u, const SampledProfile& v, double p,
                 unsigned j) {
    if (!(p > 1.0)) throw ValidationError("bl_defect: p must be > 1");
    u.validate();
    v.validate();
    if (j == 0) throw ValidationError("bl_defect: j must be >= 1");
    // ∫|u+T_j v|^p = (1/j)·Σ_k ∫₀¹ |u((k+s)/j) + v(s)|^p ds; u is constant on
    // s-ranges cut at j·x_b − k, so each period costs O(pieces(u)) range
    // queries against per-level cumulative integrals.
    const std::vector<double> levels = [&] {
        std::vector<double> ls = u.values;
        std::sort(ls.begin(), ls.end());
        ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
        return ls;
    }();
    std::vector<ProfileCum> cums;
    cums.reserve(levels.size());
    for (double c : levels)
        cums.emplace_back(v, maps::shifted_abs_p(c, p));
    const auto cum_of = [&](double c) -> const ProfileCum& {
        const auto it = std::lower_bound(levels.begin(), levels.end(), c);
        return cums[static_cast<std::size_t>(it - levels.begin())];
    };

    const double dj = static_cast<double>(j);
    CompensatedSum acc;
    for (unsigned k = 0; k < j; ++k) {
        const double xlo = static_cast<double>(k) / dj;
        const double xhi = static_cast<double>(k + 1) / dj;
        double x = xlo;
        while (x < xhi) {
            // Piece of u active at x and its end within this period.
            const auto it = std::upper_bound(u.breakpoints.begin(),
                                             u.breakpoints.end(), x);
            std::size_t i = static_cast<std::size_t>(it - u.breakpoints.begin());
            i = (i == 0) ? 0 : i - 1;
            if (i >= u.pieces()) i = u.pieces() - 1;
            const double xend = std::min(xhi, u.breakpoints[i + 1]);
            const double s0 = x * dj - static_cast<double>(k);
            const double s1 = xend * dj - static_cast<double>(k);
            acc.add(cum_of(u.values[i]).range(std::clamp(s0, 0.0, 1.0),
                                              std::clamp(s1, 0.0, 1.0)) /
                    dj);
            if (xend <= x) break;
            x = xend;
        }
    }
    const double int_u_p = integrate_composition(u, maps::abs_p(p));
    const double int_v_p = integrate_composition(v, maps::abs_p(p));
    return acc.value() - int_u_p - int_v_p;
}

double defect_limit_theory(const StepFunction& u, const StepFunction& v,
                           double p) {
    if (!(p > 1.0)) throw ValidationError("defect_limit_theory: p must be > 1");
    u.validate();
    const double int_v_p = integrate_composition(v, maps::abs_p(p));
    CompensatedSum acc;
    for (std::size_t i = 0; i < u.pieces(); ++i) {
        const double m = u.breakpoints[i + 1] - u.breakpoints[i];
        const double ui = u.values[i];
        acc.add(m * (integrate_composition(v, maps::shifted_abs_p(ui, p)) -
                     std::pow(std::abs(ui), p) - int_v_p));
    }
    return acc.value();
}

double defect_limit_theory(const StepFunction& u, const SampledProfile& v,
                           double p) {
    if (!(p > 1.0)) throw ValidationError("defect_limit_theory: p must be > 1");
    u.validate();
    const double int_v_p = integrate_composition(v, maps::abs_p(p));
    CompensatedSum acc;
    for (std::size_t i = 0; i < u.pieces(); ++i) {
        const double m = u.breakpoints[i + 1] - u.breakpoints[i];
        const double ui = u.values[i];
        acc.add(m * (integrate_composition(v, maps::shifted_abs_p(ui, p)) -
                     std::pow(std::abs(ui), p) - int_v_p));
    }
    return acc.value();
}

DefectSeries defect_series(const StepFunction& u, const Profile& v, double p,
                           const std::vector<unsigned>& j_list) {
    if (j_list.empty())
        throw ValidationError("defect_series: j_list must be nonempty");
    DefectSeries s;
    s.u = u;
    s.v = v;
    s.p = p;
    s.j_list = j_list;
    s.D.resize(j_list.size());
    parallel_for(j_list.size(), [&](std::size_t i) {
        s.D[i] = std::visit(
            [&](const auto& prof) { return bl_defect(u, prof, p, j_list[i]); },
            v);
    });
    s.theoretical_limit = std::visit(
        [&](const auto& prof) { return defect_limit_theory(u, prof, p); }, v);
    for (std::size_t i = j_list.size() / 2; i < j_list.size(); ++i)
        s.tail_error =
            std::max(s.tail_error, std::abs(s.D[i] - s.theoretical_limit));
    return s;
}

P4IdentityReport p4_identity_check(const StepFunction& u, const StepFunction& v,
                                   const std::vector<unsigned>& j_list) {
    if (j_list.empty())
        throw ValidationError("p4_identity_check: j_list must be nonempty");
    P4IdentityReport rep;
    rep.moment1 = integrate_composition(v, maps::identity());
    rep.moment3 = integrate_composition(v, maps::cube());
    rep.preconditions_ok =
        std::abs(rep.moment1) <= 1e-8 && std::abs(rep.moment3) <= 1e-8;
    if (!rep.preconditions_ok) return rep;

    rep.cross_term = 6.0 * integrate_composition(u, maps::square()) *
                     integrate_composition(v, maps::square());
    rep.deviations.resize(j_list.size());
    parallel_for(j_list.size(), [&](std::size_t i) {
        rep.deviations[i] =
            std::abs(bl_defect(u, v, 4.0, j_list[i]) - rep.cross_term);
    });
    for (std::size_t i = j_list.size() / 2; i < j_list.size(); ++i)
        rep.max_tail_deviation =
            std::max(rep.max_tail_deviation, rep.deviations[i]);
    const bool constant_u =
        std::all_of(u.values.begin(), u.values.end(),
                    [&](double t) { return t == u.values.front(); });
    if (constant_u)
        rep.exact_for_constant_u =
            *std::max_element(rep.deviations.begin(), rep.deviations.end()) <=
            1e-12;
    rep.ok = rep.max_tail_deviation <= 1e-3;
    return rep;
}

Theorem41Report theorem41_check(const StepFunction& u, const StepFunction& v,
                                double p, const std::vector<unsigned>& j_list,
                                PsiVariant variant) {
    if (!(p >= 2.0))
        throw ValidationError("theorem41_check: requires p >= 2");
    if (j_list.empty())
        throw ValidationError("theorem41_check: j_list must be nonempty");
    u.validate();
    v.validate();
    Theorem41Report rep;
    rep.p = p;
    rep.variant = variant;
    rep.psi_integrals.resize(j_list.size());
    rep.D.resize(j_list.size());
    std::vector<double> slack_min(j_list.size());
    parallel_for(j_list.size(), [&](std::size_t idx) {
        const StepFunction w = rescale(v, j_list[idx]);
        CompensatedSum psi_acc, d_acc;
        double slack = std::numeric_limits<double>::infinity();
        std::size_t i = 0, k = 0;
        double x = 0.0;
        while (x < 1.0) {
            const double nx =
                std::min(u.breakpoints[i + 1], w.breakpoints[k + 1]);
            const double uu = u.values[i], ww = w.values[k];
            const double dcell = defect_cell(uu, ww, p);
            const double pcell = Psi_residual(p, uu, ww, variant);
            psi_acc.add(pcell * (nx - x));
            d_acc.add(dcell * (nx - x));
            slack = std::min(slack, dcell - pcell);
            if (u.breakpoints[i + 1] == nx) ++i;
            if (w.breakpoints[k + 1] == nx) ++k;
            x = nx;
        }
        rep.psi_integrals[idx] = psi_acc.value();
        rep.D[idx] = d_acc.value();
        slack_min[idx] = slack;
    });
    rep.min_pointwise_slack =
        *std::min_element(slack_min.begin(), slack_min.end());

    // Level-wise limit of ∫Ψ(u, T_j v).
    CompensatedSum lim;
    for (std::size_t i = 0; i < u.pieces(); ++i) {
        const double m = u.breakpoints[i + 1] - u.breakpoints[i];
        CompensatedSum inner;
        for (std::size_t c = 0; c < v.pieces(); ++c)
            inner.add(Psi_residual(p, u.values[i], v.values[c], variant) *
                      (v.breakpoints[c + 1] - v.breakpoints[c]));
        lim.add(m * inner.value());
    }
    rep.psi_limit = lim.value();
    rep.psi_vanishes = std::abs(rep.psi_limit) <= 1e-10;

    const double limit = defect_limit_theory(u, v, p);
    double c_first = 0.0;
    for (std::size_t i = 0; i < j_list.size() / 2; ++i)
        c_first = std::max(c_first, std::abs(rep.D[i] - limit) *
                                        static_cast<double>(j_list[i]));
    const unsigned j_tail = j_list[j_list.size() / 2];
    rep.tail_tolerance =
        std::max(1e-6, c_first / static_cast<double>(j_tail));
    rep.min_D_tail = std::numeric_limits<double>::infinity();
    for (std::size_t i = j_list.size() / 2; i < j_list.size(); ++i)
        rep.min_D_tail = std::min(rep.min_D_tail, rep.D[i]);
    rep.conclusion_holds =
        !rep.psi_vanishes || rep.min_D_tail >= -rep.tail_tolerance;
    return rep;
}

std::vector<unsigned> geometric_j_list(unsigned lo, unsigned hi) {
    if (lo == 0 || hi < lo)
        throw ValidationError("geometric_j_list: need 1 <= lo <= hi");
    std::vector<unsigned> js;
    for (unsigned long long j = lo; j <= hi; j *= 2)
        js.push_back(static_cast<unsigned>(j));
    return js;
}

}  // namespace blb
