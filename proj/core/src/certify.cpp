#include "blb/certify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "blb/errors.hpp"
#include "blb/parallel.hpp"

namespace blb {
namespace {

constexpr double kEqualityTol = 1e-12;

// Quantity certified over the box: for the two-variable Ψ kind this is the
// domination slack |s+t|^p − |s|^p − |t|^p − Ψ_p(s,t) (raw Ψ is
// sign-indefinite and not a certifiable inequality); other kinds are the
// residual value itself.
double cert_value(const Residual& r, double x, double y) {
    if (r.kind == ResidualKind::Psi_p)
        return std::pow(std::abs(x + y), r.p) - std::pow(std::abs(x), r.p) -
               std::pow(std::abs(y), r.p) -
               Psi_residual(r.p, x, y, r.psi_variant);
    return eval_residual(r, x, y);
}

// sup over [lo, hi] of |t|^e; fails (ok = false) when e < 0 and the interval
// reaches 0.
double sup_abs_pow(double lo, double hi, double e, bool& ok) {
    const double b = std::max(std::abs(lo), std::abs(hi));
    if (e >= 0.0) return std::pow(b, e);
    const double rho =
        (lo <= 0.0 && hi >= 0.0) ? 0.0 : std::min(std::abs(lo), std::abs(hi));
    if (rho <= 0.0) {
        ok = false;
        return std::numeric_limits<double>::infinity();
    }
    return std::pow(rho, e);
}

double golden_min_1d(const std::function<double(double)>& fn, double lo,
                     double hi, int iters, double& best_x) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = fn(c), fd = fn(d);
    for (int k = 0; k < iters && (b - a) > 0.0; ++k) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = fn(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = fn(d);
        }
    }
    // Boundary minima never converge strictly inside; compare candidates.
    best_x = fc < fd ? c : d;
    double best = std::min(fc, fd);
    for (double cand : {lo, hi}) {
        const double f = fn(cand);
        if (f < best) {
            best = f;
            best_x = cand;
        }
    }
    return best;
}

}  // namespace

void Box::validate(int arity) const {
    if (static_cast<int>(dims.size()) != arity)
        throw ValidationError("Box: dimension count does not match residual arity");
    for (const auto& [lo, hi] : dims)
        if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
            throw ValidationError("Box: intervals must be finite with lo < hi");
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::certified_nonneg_up_to_tol:
            return "certified_nonneg_up_to_tol";
        case Verdict::violated: return "violated";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

std::vector<double> uniform_grid(double lo, double hi, double h) {
    if (!(h > 0.0)) throw ValidationError("grid step h must be > 0");
    const std::size_t n = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::ceil((hi - lo) / h - 1e-12)) + 1);
    std::vector<double> g(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) g[i] = lo + step * static_cast<double>(i);
    g.back() = hi;
    return g;
}

std::optional<double> lipschitz_sum_bound(const Residual& r, const Box& box,
                                          std::string* reason) {
    r.validate();
    box.validate(r.arity());
    const double p = r.p;
    auto fail = [&](const std::string& why) -> std::optional<double> {
        if (reason) *reason = why;
        return std::nullopt;
    };

    if (r.arity() == 1) {
        const auto [lo, hi] = box.dims[0];
        const double b = std::max(std::abs(lo), std::abs(hi));
        const double c = std::max(std::abs(1.0 + lo), std::abs(1.0 + hi));
        const double LF = p * (std::pow(c, p - 1.0) + std::pow(b, p - 1.0));
        switch (r.kind) {
            case ResidualKind::F_p:
                return LF;
            case ResidualKind::g_p: {
                bool ok = true;
                const double st = sup_abs_pow(lo, hi, p - 2.0, ok);
                if (!ok)
                    return fail("derivative of p|t|^{p-2}t is unbounded at t = 0 "
                                "for p < 2; shrink the box away from 0");
                return LF + p * (p - 1.0) * st + p;
            }
            case ResidualKind::Phi_p: {
                const double mt =
                    p >= 2.0 ? std::pow(std::max(1.0, b), p - 2.0) : 1.0;
                return std::max(p, p * (p - 1.0) * mt);
            }
            case ResidualKind::F_minus_Phi_p: {
                const double mt =
                    p >= 2.0 ? std::pow(std::max(1.0, b), p - 2.0) : 1.0;
                return LF + std::max(p, p * (p - 1.0) * mt);
            }
            default:
                return fail("internal: scalar bound requested for vector kind");
        }
    }

    const auto [xlo, xhi] = box.dims[0];
    const auto [ylo, yhi] = box.dims[1];
    const double bx = std::max(std::abs(xlo), std::abs(xhi));
    const double by = std::max(std::abs(ylo), std::abs(yhi));

    if (r.kind == ResidualKind::Psi_p) {
        // Certified quantity is the domination slack, so the bound collects
        // the |s+t|^p − |s|^p − |t|^p gradient plus region-aware Ψ bounds:
        // on the |t| ≤ |s| branch, |s|^{p-2}|t| ≤ |s|^{p-1}; on |t| ≥ |s|,
        // |s||t|^{p-2} ≤ |t|^{p-1}.  Both stay bounded for p > 1.
        const double bs = bx, bt = by;
        const double s_b1 = p >= 2.0 ? (p - 1.0) * std::pow(bs, p - 2.0) * bt
                                     : (p - 1.0) * std::pow(bs, p - 1.0);
        const double s_b2 = std::pow(bt, p - 1.0);
        const double t_b1 = std::pow(bs, p - 1.0);
        const double t_b2 = p >= 2.0
                                ? (p - 1.0) * bs * std::pow(bt, p - 2.0)
                                : (p - 1.0) * std::pow(bt, p - 1.0);
        const double fac = r.psi_variant == PsiVariant::sign_corrected ? p : 1.0;
        const double sum_pow = std::pow(bs + bt, p - 1.0);
        const double f_part = p * (2.0 * sum_pow + std::pow(bs, p - 1.0) +
                                   std::pow(bt, p - 1.0));
        return f_part + fac * (std::max(s_b1, s_b2) + std::max(t_b1, t_b2));
    }

    // Fvec_p(t, θ) with t = dim0, θ = dim1.
    const double bt = bx, bth = by;
    const double amax = 1.0 + bt * bt + 2.0 * bt * bth;
    double sa;
    if (p >= 2.0) {
        sa = std::pow(amax, 0.5 * p - 1.0);
    } else {
        // Need |1 + t² + 2tθ| bounded away from 0 on the box.
        double amin = std::numeric_limits<double>::infinity();
        for (double th : {ylo, yhi}) {
            double m = std::min(1.0 + xlo * xlo + 2.0 * xlo * th,
                                1.0 + xhi * xhi + 2.0 * xhi * th);
            if (-th > xlo && -th < xhi) m = std::min(m, 1.0 - th * th);
            amin = std::min(amin, m);
        }
        if (amin <= 0.0)
            return fail("|1+t^2+2t*theta|^{p/2} has unbounded derivative where "
                        "the argument vanishes; p < 2 needs a box avoiding it");
        sa = std::pow(amin, 0.5 * p - 1.0);
    }
    bool ok = true;
    const double st = sup_abs_pow(xlo, xhi, p - 2.0, ok);
    if (!ok)
        return fail("derivative of p|t|^{p-2}t*theta is unbounded at t = 0 for "
                    "p < 2; shrink the box away from 0");
    const double lt = p * sa * (bt + bth) + p * std::pow(bt, p - 1.0) +
                      p * (p - 1.0) * st * bth + p * bth;
    const double lth = p * sa * bt + p * std::pow(bt, p - 1.0) + p * bt;
    return lt + lth;
}

InequalityCertificate certify_nonneg(const Residual& r, const Box& box,
                                     double h, double tol) {
    r.validate();
    box.validate(r.arity());
    if (!(h > 0.0)) throw ValidationError("certify_nonneg: h must be > 0");
    if (!(tol >= 0.0)) throw ValidationError("certify_nonneg: tol must be >= 0");

    InequalityCertificate cert;
    cert.residual = r;
    cert.box = box;
    cert.h = h;
    cert.tolerance = tol;

    double grid_min = std::numeric_limits<double>::infinity();
    std::vector<double> witness;
    if (r.arity() == 1) {
        const auto grid = uniform_grid(box.dims[0].first, box.dims[0].second, h);
        for (double t : grid) {
            const double v = eval_residual(r, t);
            if (v < grid_min) {
                grid_min = v;
                witness = {t};
            }
        }
    } else {
        const auto gx = uniform_grid(box.dims[0].first, box.dims[0].second, h);
        const auto gy = uniform_grid(box.dims[1].first, box.dims[1].second, h);
        std::vector<double> row_min(gx.size());
        std::vector<std::size_t> row_arg(gx.size());
        parallel_for(gx.size(), [&](std::size_t i) {
            double m = std::numeric_limits<double>::infinity();
            std::size_t arg = 0;
            for (std::size_t j = 0; j < gy.size(); ++j) {
                const double v = cert_value(r, gx[i], gy[j]);
                if (v < m) {
                    m = v;
                    arg = j;
                }
            }
            row_min[i] = m;
            row_arg[i] = arg;
        });
        for (std::size_t i = 0; i < gx.size(); ++i) {
            if (row_min[i] < grid_min) {
                grid_min = row_min[i];
                witness = {gx[i], gy[row_arg[i]]};
            }
        }
    }
    cert.grid_min = grid_min;
    cert.witness = witness;
    cert.equality_neighborhood_ok = grid_min >= -kEqualityTol;

    std::string why;
    const auto L = lipschitz_sum_bound(r, box, &why);
    cert.lipschitz_available = L.has_value();
    if (!L) {
        cert.lipschitz_bound = std::numeric_limits<double>::quiet_NaN();
        cert.certified_lower_bound = -std::numeric_limits<double>::infinity();
        if (grid_min < -tol) {
            cert.verdict = Verdict::violated;
            cert.reason = "grid minimum below -tol";
        } else {
            cert.verdict = Verdict::inconclusive;
            cert.reason = "Lipschitz bound unavailable: " + why;
        }
        return cert;
    }
    cert.lipschitz_bound = *L;
    cert.certified_lower_bound = grid_min - *L * h / 2.0;
    if (grid_min < -tol) {
        cert.verdict = Verdict::violated;
        cert.reason = "grid minimum below -tol";
    } else if (cert.certified_lower_bound >= -tol) {
        cert.verdict = Verdict::certified_nonneg_up_to_tol;
        cert.reason = "grid minimum minus Lipschitz slack stays above -tol";
    } else {
        cert.verdict = Verdict::inconclusive;
        cert.reason =
            "certified lower bound " + std::to_string(cert.certified_lower_bound) +
            " is below -tol; a grid step near tol/L would be needed";
    }
    return cert;
}

std::optional<Violation> find_violation(const Residual& r, const Box& box,
                                        double search_resolution) {
    r.validate();
    box.validate(r.arity());
    if (!(search_resolution > 0.0))
        throw ValidationError("find_violation: search_resolution must be > 0");
    const double h = search_resolution;

    if (r.arity() == 1) {
        const auto [lo, hi] = box.dims[0];
        const auto grid = uniform_grid(lo, hi, h);
        double m = std::numeric_limits<double>::infinity(), arg = lo;
        for (double t : grid) {
            const double v = eval_residual(r, t);
            if (v < m) {
                m = v;
                arg = t;
            }
        }
        if (!(m < 0.0)) return std::nullopt;
        const auto fn = [&](double t) { return eval_residual(r, t); };
        double best_x = arg;
        const double best =
            golden_min_1d(fn, std::max(lo, arg - h), std::min(hi, arg + h), 120,
                          best_x);
        return Violation{{best_x}, best};
    }

    const auto gx = uniform_grid(box.dims[0].first, box.dims[0].second, h);
    const auto gy = uniform_grid(box.dims[1].first, box.dims[1].second, h);
    double m = std::numeric_limits<double>::infinity();
    double ax = gx.front(), ay = gy.front();
    for (double x : gx)
        for (double y : gy) {
            const double v = cert_value(r, x, y);
            if (v < m) {
                m = v;
                ax = x;
                ay = y;
            }
        }
    if (!(m < 0.0)) return std::nullopt;
    // Cyclic coordinate descent with golden line searches in a ±h window.
    double x = ax, y = ay, val = m;
    for (int round = 0; round < 6; ++round) {
        double bx = x;
        const double vx = golden_min_1d(
            [&](double t) { return cert_value(r, t, y); },
            std::max(box.dims[0].first, x - h),
            std::min(box.dims[0].second, x + h), 80, bx);
        if (vx < val) {
            val = vx;
            x = bx;
        }
        double by = y;
        const double vy = golden_min_1d(
            [&](double t) { return cert_value(r, x, t); },
            std::max(box.dims[1].first, y - h),
            std::min(box.dims[1].second, y + h), 80, by);
        if (vy < val) {
            val = vy;
            y = by;
        }
    }
    return Violation{{x, y}, val};
}

std::vector<ScanRow> scan_p(const std::vector<double>& p_list,
                            ResidualKind kind, const Box& box, double h,
                            double tol) {
    Residual probe{kind, p_list.empty() ? 3.0 : p_list.front()};
    if (probe.arity() != 1)
        throw ValidationError("scan_p supports scalar residual kinds only");
    box.validate(1);
    std::vector<ScanRow> rows(p_list.size());
    parallel_for(p_list.size(), [&](std::size_t i) {
        const Residual r{kind, p_list[i]};
        r.validate();
        const auto grid = uniform_grid(box.dims[0].first, box.dims[0].second, h);
        double m = std::numeric_limits<double>::infinity(), arg = grid.front();
        for (double t : grid) {
            const double v = eval_residual(r, t);
            if (v < m) {
                m = v;
                arg = t;
            }
        }
        rows[i] = {p_list[i], m, arg,
                   m < -tol ? "violated" : "nonneg_on_grid"};
    });
    return rows;
}

Theorem21Report check_theorem21_structure(double p,
                                          const std::vector<double>& t_grid,
                                          const std::vector<double>& theta_grid) {
    if (!(p >= 3.0))
        throw ValidationError("check_theorem21_structure: requires p >= 3");
    if (t_grid.empty() || theta_grid.size() < 3)
        throw ValidationError("check_theorem21_structure: grids too small");
    Theorem21Report rep;
    rep.p = p;
    rep.min_second_difference = std::numeric_limits<double>::infinity();
    for (double t : t_grid) {
        rep.max_reduction_residual =
            std::max(rep.max_reduction_residual,
                     std::abs(Fvec_residual(p, t, 1.0) - g_residual(p, t)));
        rep.max_symmetry_residual =
            std::max(rep.max_symmetry_residual,
                     std::abs(Fvec_residual(p, t, -1.0) -
                              Fvec_residual(p, -t, 1.0)));
        std::vector<double> row(theta_grid.size());
        for (std::size_t j = 0; j < theta_grid.size(); ++j)
            row[j] = Fvec_residual(p, t, theta_grid[j]);
        for (std::size_t j = 1; j + 1 < theta_grid.size(); ++j)
            rep.min_second_difference = std::min(
                rep.min_second_difference, row[j - 1] - 2.0 * row[j] + row[j + 1]);
        // Equality transfer: a θ-slice may touch zero only at θ = ±1 (the
        // scalar rays); identically-zero t = 0 slices carry no information.
        const auto [lo_it, hi_it] = std::minmax_element(row.begin(), row.end());
        if (*hi_it - *lo_it > kEqualityTol && *lo_it <= kEqualityTol) {
            const std::size_t arg =
                static_cast<std::size_t>(lo_it - row.begin());
            if (arg != 0 && arg + 1 != row.size())
                rep.equality_only_at_theta_pm1 = false;
        }
    }
    rep.ok = rep.max_reduction_residual <= 1e-12 &&
             rep.max_symmetry_residual <= 1e-12 &&
             rep.min_second_difference >= -1e-10 &&
             rep.equality_only_at_theta_pm1;
    return rep;
}

PsiDominationReport check_psi_domination(double p,
                                         const std::vector<double>& s_grid,
                                         const std::vector<double>& t_grid,
                                         PsiVariant variant) {
    if (!(p >= 2.0))
        throw ValidationError("check_psi_domination: requires p >= 2");
    PsiDominationReport rep;
    rep.p = p;
    rep.variant = variant;
    rep.min_slack = std::numeric_limits<double>::infinity();
    for (double s : s_grid) {
        if (s == 0.0) continue;
        for (double t : t_grid) {
            const double lhs = std::pow(std::abs(s + t), p) -
                               std::pow(std::abs(s), p) -
                               std::pow(std::abs(t), p);
            const double slack = lhs - Psi_residual(p, s, t, variant);
            if (slack < rep.min_slack) {
                rep.min_slack = slack;
                rep.s_at_min = s;
                rep.t_at_min = t;
            }
            if (slack < -1e-10) ++rep.violations;
            if (t == -s)
                rep.max_abs_slack_at_equality =
                    std::max(rep.max_abs_slack_at_equality, std::abs(slack));
        }
    }
    rep.ok = rep.min_slack >= -1e-10;
    return rep;
}

}  // namespace blb
