#include "blb/counterexample.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "blb/errors.hpp"
#include "blb/funcspace.hpp"
#include "blb/kahan.hpp"
#include "blb/oscillate.hpp"
#include "blb/quadrature.hpp"
#include "blb/residual.hpp"

namespace blb {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMeasureFloor = 1e-6;
constexpr double kLevelFloor = 1e-4;  // levels must stay nonzero

double phi2(double t, double p) { return pow_sign(t, p - 1.0); }
double phi2_prime(double t, double p) {
    return (p - 1.0) * std::pow(std::abs(t), p - 2.0);
}

// Gaussian elimination with partial pivoting; returns false when singular.
bool solve_dense(std::vector<std::vector<double>> A, std::vector<double>& b) {
    const std::size_t n = A.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        if (std::abs(A[piv][c]) < 1e-14) return false;
        std::swap(A[c], A[piv]);
        std::swap(b[c], b[piv]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = A[r][c] / A[c][c];
            for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
            b[r] -= f * b[c];
        }
    }
    for (std::size_t c = n; c-- > 0;) {
        for (std::size_t k = c + 1; k < n; ++k) b[c] -= A[c][k] * b[k];
        b[c] /= A[c][c];
    }
    return true;
}

// Measures for levels ts from mass 1 and the two vanishing moments, minus a
// fixed contribution (mass0, mom1_0, mom2_0) already supplied by extra
// levels.  Fails when the system is singular or a measure is negative.
std::optional<std::vector<double>> solve_measures(
    const std::vector<double>& ts, double p, double mass0 = 0.0,
    double mom1_0 = 0.0, double mom2_0 = 0.0) {
    std::vector<std::vector<double>> A{
        {1.0, 1.0, 1.0},
        {ts[0], ts[1], ts[2]},
        {phi2(ts[0], p), phi2(ts[1], p), phi2(ts[2], p)}};
    std::vector<double> b{1.0 - mass0, -mom1_0, -mom2_0};
    if (!solve_dense(std::move(A), b)) return std::nullopt;
    for (double m : b)
        if (!(m >= 0.0)) return std::nullopt;
    return b;
}

struct StepCandidate {
    std::vector<double> levels;    // ascending after finalize
    std::vector<double> measures;  // matching, all > 0
    double objective = kInf;
};

// Objective for the optimizer: variables are the `levels` level positions
// followed by the measures of levels beyond the first three; the first three
// measures are eliminated through the exact 3x3 moment solve.
class StepObjective {
public:
    StepObjective(double p, double a, int levels)
        : p_(p), a_(a), levels_(levels) {}

    [[nodiscard]] int dim() const { return 2 * levels_ - 3; }

    double operator()(const std::vector<double>& x) const {
        std::vector<double> ts(x.begin(), x.begin() + levels_);
        for (double t : ts) {
            if (std::abs(t) > a_ * (1.0 + 1e-12)) return kInf;
            if (std::abs(t) < kLevelFloor * std::max(1.0, a_)) return kInf;
        }
        for (int i = 0; i < levels_; ++i)
            for (int j = i + 1; j < levels_; ++j)
                if (std::abs(ts[i] - ts[j]) < 1e-7 * std::max(1.0, a_))
                    return kInf;
        double mass0 = 0.0, m1 = 0.0, m2 = 0.0, obj_extra = 0.0;
        for (int e = 3; e < levels_; ++e) {
            const double me = x[static_cast<std::size_t>(levels_ + e - 3)];
            if (!(me >= 0.0) || me > 1.0) return kInf;
            mass0 += me;
            m1 += me * ts[static_cast<std::size_t>(e)];
            m2 += me * phi2(ts[static_cast<std::size_t>(e)], p_);
            obj_extra += me * F_residual(p_, ts[static_cast<std::size_t>(e)]);
        }
        if (mass0 > 1.0) return kInf;
        const auto ms =
            solve_measures({ts[0], ts[1], ts[2]}, p_, mass0, m1, m2);
        if (!ms) return kInf;
        double obj = obj_extra;
        for (int i = 0; i < 3; ++i)
            obj += (*ms)[static_cast<std::size_t>(i)] *
                   F_residual(p_, ts[static_cast<std::size_t>(i)]);
        return obj;
    }

    [[nodiscard]] StepCandidate to_candidate(const std::vector<double>& x) const {
        StepCandidate cand;
        cand.objective = (*this)(x);
        if (!std::isfinite(cand.objective)) return cand;
        std::vector<double> ts(x.begin(), x.begin() + levels_);
        double mass0 = 0.0, m1 = 0.0, m2 = 0.0;
        for (int e = 3; e < levels_; ++e) {
            const double me = x[static_cast<std::size_t>(levels_ + e - 3)];
            mass0 += me;
            m1 += me * ts[static_cast<std::size_t>(e)];
            m2 += me * phi2(ts[static_cast<std::size_t>(e)], p_);
        }
        const auto ms =
            solve_measures({ts[0], ts[1], ts[2]}, p_, mass0, m1, m2);
        cand.levels = ts;
        cand.measures = *ms;
        for (int e = 3; e < levels_; ++e)
            cand.measures.push_back(x[static_cast<std::size_t>(levels_ + e - 3)]);
        return cand;
    }

private:
    double p_;
    double a_;
    int levels_;
};

// Deterministic Nelder–Mead over box-free coordinates (the objective itself
// rejects out-of-box points with +inf).
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& fn,
                                std::vector<double> x0, double scale,
                                int max_iter) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> vals(n + 1);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += scale;
    for (std::size_t i = 0; i <= n; ++i) vals[i] = fn(pts[i]);
    for (int it = 0; it < max_iter; ++it) {
        std::vector<std::size_t> ord(n + 1);
        for (std::size_t i = 0; i <= n; ++i) ord[i] = i;
        std::stable_sort(ord.begin(), ord.end(),
                         [&](std::size_t a, std::size_t b) {
                             return vals[a] < vals[b];
                         });
        std::vector<std::vector<double>> np(n + 1);
        std::vector<double> nv(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            np[i] = pts[ord[i]];
            nv[i] = vals[ord[i]];
        }
        pts = std::move(np);
        vals = std::move(nv);
        if (std::isfinite(vals[n]) && vals[n] - vals[0] < 1e-15) break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                centroid[k] += pts[i][k] / static_cast<double>(n);
        auto blend = [&](double alpha) {
            std::vector<double> y(n);
            for (std::size_t k = 0; k < n; ++k)
                y[k] = centroid[k] + alpha * (pts[n][k] - centroid[k]);
            return y;
        };
        const auto xr = blend(-1.0);
        const double fr = fn(xr);
        if (fr < vals[0]) {
            const auto xe = blend(-2.0);
            const double fe = fn(xe);
            if (fe < fr) {
                pts[n] = xe;
                vals[n] = fe;
            } else {
                pts[n] = xr;
                vals[n] = fr;
            }
        } else if (fr < vals[n - 1]) {
            pts[n] = xr;
            vals[n] = fr;
        } else {
            const auto xc = blend(fr < vals[n] ? -0.5 : 0.5);
            const double fc = fn(xc);
            if (fc < std::min(fr, vals[n])) {
                pts[n] = xc;
                vals[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t k = 0; k < n; ++k)
                        pts[i][k] = pts[0][k] + 0.5 * (pts[i][k] - pts[0][k]);
                    vals[i] = fn(pts[i]);
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i <= vals.size() - 1; ++i)
        if (vals[i] < vals[best]) best = i;
    return pts[best];
}

// Finite-difference Newton polish on coordinates not pinned at the box
// boundary; comparison-based refinement alone cannot pin coordinates to
// 1e-9 in the flat valley around the optimum.
std::vector<double> newton_polish(
    const std::function<double(const std::vector<double>&)>& fn,
    std::vector<double> x, double a) {
    const double scale = std::max(1.0, a);
    const double fd = 1e-5 * scale;
    std::vector<std::size_t> free_idx;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (std::abs(std::abs(x[i]) - a) > 1e-9 * scale)
            free_idx.push_back(i);
        else
            x[i] = x[i] > 0 ? a : -a;  // pin exactly
    if (free_idx.empty()) return x;
    const std::size_t n = free_idx.size();
    double fx = fn(x);
    for (int iter = 0; iter < 20; ++iter) {
        std::vector<double> grad(n);
        std::vector<std::vector<double>> hess(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i) {
            auto xp = x, xm = x;
            xp[free_idx[i]] += fd;
            xm[free_idx[i]] -= fd;
            const double fp = fn(xp), fm = fn(xm);
            if (!std::isfinite(fp) || !std::isfinite(fm)) return x;
            grad[i] = (fp - fm) / (2.0 * fd);
            hess[i][i] = (fp - 2.0 * fx + fm) / (fd * fd);
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                auto xpp = x, xpm = x, xmp = x, xmm = x;
                xpp[free_idx[i]] += fd;
                xpp[free_idx[j]] += fd;
                xpm[free_idx[i]] += fd;
                xpm[free_idx[j]] -= fd;
                xmp[free_idx[i]] -= fd;
                xmp[free_idx[j]] += fd;
                xmm[free_idx[i]] -= fd;
                xmm[free_idx[j]] -= fd;
                const double v =
                    (fn(xpp) - fn(xpm) - fn(xmp) + fn(xmm)) / (4.0 * fd * fd);
                if (!std::isfinite(v)) return x;
                hess[i][j] = hess[j][i] = v;
            }
        double gnorm = 0.0;
        for (double g : grad) gnorm = std::max(gnorm, std::abs(g));
        if (gnorm < 1e-11) break;
        std::vector<double> step = grad;
        if (!solve_dense(hess, step)) break;
        bool improved = false;
        double damp = 1.0;
        for (int bt = 0; bt < 12; ++bt, damp *= 0.5) {
            auto xn = x;
            for (std::size_t i = 0; i < n; ++i) {
                xn[free_idx[i]] -= damp * step[i];
                xn[free_idx[i]] = std::clamp(xn[free_idx[i]], -a, a);
            }
            const double fxn = fn(xn);
            if (fxn <= fx) {
                improved = fxn < fx;
                x = xn;
                fx = fxn;
                break;
            }
        }
        if (!improved) break;
    }
    return x;
}

// Re-solve (m_i, m_j, t_i) so the three constraints hold exactly with the
// degenerate level's measure pinned at the floor.
bool repair_degenerate(std::vector<double>& ts, std::vector<double>& ms,
                       std::size_t d, double p, double a) {
    // Reset the degenerate level to a fixed, well-separated value.
    double fresh = 0.5 * a;
    auto clashes = [&](double t) {
        for (std::size_t i = 0; i < ts.size(); ++i)
            if (i != d && std::abs(ts[i] - t) < 1e-3 * a) return true;
        return false;
    };
    if (clashes(fresh)) fresh = -0.5 * a;
    if (clashes(fresh)) fresh = 0.75 * a;
    ts[d] = fresh;
    ms[d] = kMeasureFloor;

    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < ts.size(); ++i)
        if (i != d) rest.push_back(i);
    // Adjust the heaviest remaining level plus both remaining measures.
    std::sort(rest.begin(), rest.end(),
              [&](std::size_t l, std::size_t r) { return ms[l] > ms[r]; });
    const std::size_t i1 = rest[0], i2 = rest[1];
    double mi = ms[i1], mj = ms[i2], ti = ts[i1];
    const double tj = ts[i2];
    for (int iter = 0; iter < 60; ++iter) {
        const double r0 = mi + mj + ms[d] - 1.0;
        const double r1 = mi * ti + mj * tj + ms[d] * ts[d];
        const double r2 =
            mi * phi2(ti, p) + mj * phi2(tj, p) + ms[d] * phi2(ts[d], p);
        if (std::abs(r0) + std::abs(r1) + std::abs(r2) < 1e-15) break;
        std::vector<std::vector<double>> J{
            {1.0, 1.0, 0.0},
            {ti, tj, mi},
            {phi2(ti, p), phi2(tj, p), mi * phi2_prime(ti, p)}};
        std::vector<double> rhs{r0, r1, r2};
        if (!solve_dense(std::move(J), rhs)) return false;
        mi -= rhs[0];
        mj -= rhs[1];
        ti -= rhs[2];
        if (!(mi > 0.0) || !(mj > 0.0) || std::abs(ti) > a) return false;
    }
    ms[i1] = mi;
    ms[i2] = mj;
    ts[i1] = ti;
    return true;
}

StepFunction candidate_to_step(std::vector<double> ts, std::vector<double> ms) {
    std::vector<std::size_t> ord(ts.size());
    for (std::size_t i = 0; i < ord.size(); ++i) ord[i] = i;
    std::sort(ord.begin(), ord.end(),
              [&](std::size_t l, std::size_t r) { return ts[l] < ts[r]; });
    std::vector<double> vs, mssorted;
    for (std::size_t i : ord) {
        vs.push_back(ts[i]);
        mssorted.push_back(ms[i]);
    }
    // Absorb rounding drift of the measure total into the largest piece.
    double total = 0.0;
    for (double m : mssorted) total += m;
    const std::size_t big = static_cast<std::size_t>(
        std::max_element(mssorted.begin(), mssorted.end()) - mssorted.begin());
    mssorted[big] += 1.0 - total;
    return StepFunction::from_levels(vs, mssorted);
}

// ---------------------------------------------------------------------------
// Density design closed forms on [−a, a] with monomial basis b_k = (t/a)^k.

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i)
        r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return r;
}

// ∫₀^x |u|^p u^m du (valid for either sign of x).
double abs_power_antideriv(double x, double p, int m) {
    const double e = p + static_cast<double>(m) + 1.0;
    const double mag = std::pow(std::abs(x), e) / e;
    if (x >= 0.0) return mag;
    return (m % 2 == 0) ? -mag : mag;
}

// ∫_{−a}^{a} |1+t|^p (t/a)^k dt via u = 1+t and the binomial expansion.
double moment_abs1p(double a, double p, int k) {
    CompensatedSum acc;
    for (int m = 0; m <= k; ++m) {
        const double jm = abs_power_antideriv(1.0 + a, p, m) -
                          abs_power_antideriv(1.0 - a, p, m);
        const double sgn = ((k - m) % 2 == 0) ? 1.0 : -1.0;
        acc.add(binom(k, m) * sgn * jm);
    }
    return acc.value() / std::pow(a, k);
}

struct DesignMoments {
    std::vector<double> I;   // ∫ b_k
    std::vector<double> M1;  // ∫ t·b_k
    std::vector<double> M2;  // ∫ |t|^{p−2}t·b_k
    std::vector<double> Fm;  // ∫ F_p·b_k
};

DesignMoments design_moments(double a, double p, int K) {
    DesignMoments dm;
    dm.I.resize(K);
    dm.M1.resize(K);
    dm.M2.resize(K);
    dm.Fm.resize(K);
    for (int k = 0; k < K; ++k) {
        const double dk = static_cast<double>(k);
        dm.I[k] = (k % 2 == 0) ? 2.0 * a / (dk + 1.0) : 0.0;
        dm.M1[k] = (k % 2 == 1) ? 2.0 * a * a / (dk + 2.0) : 0.0;
        dm.M2[k] = (k % 2 == 1) ? 2.0 * std::pow(a, p) / (p + dk) : 0.0;
        const double abs_t_p =
            (k % 2 == 0) ? 2.0 * std::pow(a, p + 1.0) / (p + dk + 1.0) : 0.0;
        dm.Fm[k] = moment_abs1p(a, p, k) - dm.I[k] - abs_t_p;
    }
    return dm;
}

double dot(const std::vector<double>& x, const std::vector<double>& y) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < x.size(); ++i) acc.add(x[i] * y[i]);
    return acc.value();
}

double poly_eval(const std::vector<double>& coeff, double a, double t) {
    const double z = t / a;
    double r = 0.0;
    for (std::size_t k = coeff.size(); k-- > 0;) r = r * z + coeff[k];
    return r;
}

// Minimum of the basis polynomial over [−a, a]: dense grid plus golden refine.
double poly_min(const std::vector<double>& coeff, double a, double* argmin) {
    const int n = 4096;
    double best = kInf, arg = -a;
    for (int i = 0; i <= n; ++i) {
        const double t = -a + 2.0 * a * static_cast<double>(i) / n;
        const double v = poly_eval(coeff, a, t);
        if (v < best) {
            best = v;
            arg = t;
        }
    }
    const double w = 2.0 * a / n;
    const double lo = std::max(-a, arg - w), hi = std::min(a, arg + w);
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double l = lo, r = hi;
    for (int it = 0; it < 120; ++it) {
        const double c = r - invphi * (r - l), d = l + invphi * (r - l);
        if (poly_eval(coeff, a, c) < poly_eval(coeff, a, d)) r = d;
        else l = c;
    }
    const double tm = 0.5 * (l + r);
    const double vm = poly_eval(coeff, a, tm);
    if (vm < best) {
        best = vm;
        arg = tm;
    }
    if (argmin) *argmin = arg;
    return best;
}

}  // namespace

void MomentSpec::validate() const {
    if (!(p > 1.0))
        throw ValidationError(
            "counterexample: p must be > 1 (at p = 1 the duality map "
            "|t|^{p-2}t is discontinuous at 0)");
    if (p == 2.0)
        throw ValidationError(
            "counterexample: p = 2 is degenerate — F_2(t) = 2t is linearly "
            "dependent on the constraint map phi_1(t) = t, and the Hilbert "
            "identity forces the defect to 0");
    if (!(p < 3.0))
        throw ValidationError(
            "counterexample: p must be < 3 — for p >= 3 the pointwise "
            "inequality makes every admissible defect limit nonnegative");
    if (!(eps_mom > 0.0) || !(delta > 0.0) || !(a > 0.0))
        throw ValidationError("counterexample: eps_mom, delta, a must be > 0");
}

CounterexampleReport search_step_profile(const MomentSpec& spec, int levels,
                                         unsigned seed) {
    spec.validate();
    if (levels < 3)
        throw ValidationError(
            "search_step_profile: levels >= 3 (two constraints plus "
            "negativity need three degrees of freedom)");
    const double a = spec.a, p = spec.p;
    const StepObjective obj(p, a, levels);
    const auto fn = [&](const std::vector<double>& x) { return obj(x); };

    // Coarse grid seeding over ascending level triples (extra levels, when
    // requested, start at midpoints with tiny measures).
    std::vector<std::pair<double, std::vector<double>>> seeds;
    const int G = 41;
    std::vector<double> grid(G);
    for (int i = 0; i < G; ++i)
        grid[i] = -a + 2.0 * a * static_cast<double>(i) / (G - 1);
    for (int i = 0; i < G; ++i)
        for (int j = i + 1; j < G; ++j)
            for (int k = j + 1; k < G; ++k) {
                std::vector<double> x{grid[i], grid[j], grid[k]};
                for (int e = 3; e < levels; ++e)
                    x.push_back(grid[i] + (grid[k] - grid[i]) *
                                              static_cast<double>(e - 1) /
                                              static_cast<double>(levels));
                for (int e = 3; e < levels; ++e) x.push_back(1e-3);
                const double v = fn(x);
                if (std::isfinite(v)) seeds.emplace_back(v, std::move(x));
            }
    // Seed-dependent extra restarts (the algorithm itself is deterministic;
    // the seed only adds starting points).
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unif(-a, a);
    for (int r = 0; r < 64; ++r) {
        std::vector<double> ts;
        for (int i = 0; i < levels; ++i) ts.push_back(unif(rng));
        std::sort(ts.begin(), ts.end());
        std::vector<double> x(ts);
        for (int e = 3; e < levels; ++e) x.push_back(1e-3);
        const double v = fn(x);
        if (std::isfinite(v)) seeds.emplace_back(v, std::move(x));
    }
    std::stable_sort(seeds.begin(), seeds.end(),
                     [](const auto& l, const auto& r) {
                         return l.first < r.first;
                     });

    CounterexampleReport rep;
    rep.p = p;
    rep.route = "step";
    if (seeds.empty()) {
        rep.profile = StepFunction::constant(0.0);
        rep.message =
            "no feasible seed on the coarse grid; no witness produced";
        return rep;
    }

    std::vector<double> best_x;
    double best_v = kInf;
    const std::size_t n_starts = std::min<std::size_t>(seeds.size(), 12);
    for (std::size_t s = 0; s < n_starts; ++s) {
        auto x = nelder_mead(fn, seeds[s].second, 0.05 * a, 500);
        x = newton_polish(fn, std::move(x), a);
        const double v = fn(x);
        if (v < best_v) {
            best_v = v;
            best_x = x;
        }
    }

    StepCandidate cand = obj.to_candidate(best_x);
    if (!std::isfinite(cand.objective)) {
        rep.profile = StepFunction::constant(0.0);
        rep.message = "optimization failed to keep a feasible point";
        return rep;
    }

    // Degenerate-measure repair: keep every piece at or above the floor while
    // restoring the constraints exactly.
    bool repaired = false;
    for (int guard = 0; guard < levels; ++guard) {
        const auto it =
            std::min_element(cand.measures.begin(), cand.measures.end());
        if (*it >= kMeasureFloor) break;
        const std::size_t d =
            static_cast<std::size_t>(it - cand.measures.begin());
        if (!repair_degenerate(cand.levels, cand.measures, d, p, a)) {
            rep.profile = StepFunction::constant(0.0);
            rep.message = "degenerate-measure repair failed; no witness";
            return rep;
        }
        repaired = true;
    }

    const StepFunction v = candidate_to_step(cand.levels, cand.measures);
    rep.profile = v;
    rep.moment1 = integrate_composition(v, maps::identity());
    rep.moment2 = integrate_composition(v, maps::abs_pow(p - 1.0));
    rep.objective = integrate_composition(v, maps::F(p));
    rep.verdict = std::abs(rep.moment1) <= spec.eps_mom &&
                  std::abs(rep.moment2) <= spec.eps_mom &&
                  rep.objective <= -spec.delta;
    rep.message = rep.verdict
                      ? (repaired
                             ? "witness found (one measure pinned at the floor)"
                             : "witness found")
                      : "best profile found does not meet the negativity "
                        "margin; no witness";
    rep.defect_check = defect_series(StepFunction::constant(1.0), Profile{v}, p,
                                     geometric_j_list(1, 1024));
    return rep;
}

double DensityDesign::psi(double t) const {
    return poly_eval(coefficients, a, std::clamp(t, -a, a));
}

void DensityDesign::validate() const {
    if (coefficients.empty())
        throw ValidationError("DensityDesign: empty coefficient vector");
    if (!(a > 0.0)) throw ValidationError("DensityDesign: a must be > 0");
    if (poly_min(coefficients, a, nullptr) < 1.0 - 1e-9)
        throw ValidationError("DensityDesign: psi must stay >= 1 on [-a, a]");
    if (!(gamma > 0.0)) throw ValidationError("DensityDesign: gamma must be > 0");
}

DensityDesign design_density(const MomentSpec& spec, double a, int basis_size) {
    spec.validate();
    if (!(a > 0.0)) throw ValidationError("design_density: a must be > 0");
    if (basis_size < 3)
        throw ValidationError("design_density: basis_size >= 3 required");
    const double p = spec.p;
    const int K = basis_size;
    const auto dm = design_moments(a, p, K);

    // Orthonormalize the two constraint rows and project F's moment vector
    // onto their complement: d = −(P_null f) is the steepest admissible
    // descent direction for ∫F_p ψ.
    auto normalize = [](std::vector<double> v) {
        const double n = std::sqrt(dot(v, v));
        for (double& x : v) x /= n;
        return v;
    };
    const auto r1 = normalize(dm.M1);
    std::vector<double> r2 = dm.M2;
    const double proj = dot(r2, r1);
    for (int k = 0; k < K; ++k) r2[k] -= proj * r1[k];
    const double r2n = std::sqrt(dot(r2, r2));

    DensityDesign design;
    design.a = a;
    design.p = p;
    auto finalize_constant = [&](const std::string&) {
        design.coefficients.assign(static_cast<std::size_t>(K), 0.0);
        design.coefficients[0] = 1.0;
        design.psi_min = 1.0;
        design.gamma = 2.0 * a;
        design.normalized_objective = dm.Fm[0] / (2.0 * a);
        design.success = false;
        return design;
    };
    if (!(r2n > 1e-13))
        return finalize_constant("constraint rows are linearly dependent");
    for (double& x : r2) x /= r2n;

    std::vector<double> d = dm.Fm;
    const double c1 = dot(d, r1), c2 = dot(d, r2);
    for (int k = 0; k < K; ++k) d[k] = -(d[k] - c1 * r1[k] - c2 * r2[k]);
    const double dn = std::sqrt(dot(d, d));
    if (!(dn > 1e-13))
        return finalize_constant("no descent direction in this basis");
    for (double& x : d) x /= dn;

    // ψ_s = s·(d·b) + c(s), c(s) = 1 − s·min(d·b) keeps the floor at 1; the
    // normalized objective R(s) = ∫Fψ/∫ψ is scanned then golden-refined.
    // s is capped so that ψmax/ψmin ≤ κ: without a conditioning cap the
    // optimal density concentrates toward a two-level limit, which the
    // downstream fixed-step shooting cannot resolve (that concentration
    // regime is exactly what the direct step route covers).
    constexpr double kStiffnessCap = 50.0;
    const double fd = dot(dm.Fm, d), id = dot(dm.I, d);
    const double f0 = dm.Fm[0], i0 = 2.0 * a;
    const double dmin = poly_min(d, a, nullptr);
    std::vector<double> neg_d = d;
    for (double& x : neg_d) x = -x;
    const double dmax = -poly_min(neg_d, a, nullptr);
    if (!(dmax - dmin > 1e-12))
        return finalize_constant("direction is constant — no shape change");
    const double s_cap = (kStiffnessCap - 1.0) / (dmax - dmin);
    const auto R = [&](double s) {
        const double c = 1.0 - s * dmin;
        return (s * fd + c * f0) / (s * id + c * i0);
    };
    double best_s = 0.0, best_r = R(0.0);
    for (int k = 0; k <= 56; ++k) {
        const double s = s_cap * std::pow(10.0, -static_cast<double>(k) / 8.0);
        const double r = R(s);
        if (r < best_r) {
            best_r = r;
            best_s = s;
        }
    }
    const double lo = best_s / std::pow(10.0, 0.125);
    const double hi = std::min(best_s * std::pow(10.0, 0.125), s_cap);
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double l = std::max(0.0, lo), r = std::max(hi, lo);
    for (int it = 0; it < 200; ++it) {
        const double c = r - invphi * (r - l), dgold = l + invphi * (r - l);
        if (R(c) < R(dgold)) r = dgold;
        else l = c;
    }
    const double smid = 0.5 * (l + r);
    if (R(smid) < best_r) {
        best_r = R(smid);
        best_s = smid;
    }

    design.coefficients.resize(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k)
        design.coefficients[static_cast<std::size_t>(k)] = best_s * d[k];
    design.coefficients[0] += 1.0 - best_s * dmin;
    // Drop projection-roundoff dust so serialized designs are clean (the
    // threshold is far below any coefficient that could move a moment past
    // the admissible residual).
    double cmax = 0.0;
    for (double c : design.coefficients) cmax = std::max(cmax, std::abs(c));
    for (double& c : design.coefficients)
        if (std::abs(c) < 1e-12 * cmax) c = 0.0;
    // Exact floor restore after the grid/golden min (pure constant shift —
    // the constraint maps are odd, so moments are untouched).
    const double true_min = poly_min(design.coefficients, a, nullptr);
    if (true_min < 1.0) design.coefficients[0] += 1.0 - true_min;
    design.psi_min = poly_min(design.coefficients, a, nullptr);
    design.gamma = dot(design.coefficients, dm.I);
    design.normalized_objective =
        dot(design.coefficients, dm.Fm) / design.gamma;
    design.success = design.normalized_objective < -1e-12;
    return design;
}

std::pair<double, SampledProfile> solve_profile_ode(const DensityDesign& psi,
                                                    double a, int n_steps,
                                                    double gamma_tol) {
    psi.validate();
    if (std::abs(psi.a - a) > 1e-12)
        throw ValidationError("solve_profile_ode: a disagrees with the design");
    if (n_steps < 2) throw ValidationError("solve_profile_ode: n_steps >= 2");
    if (!(gamma_tol > 0.0))
        throw ValidationError("solve_profile_ode: gamma_tol must be > 0");

    const double h = 1.0 / static_cast<double>(n_steps);
    const auto shoot = [&](double gamma, std::vector<double>* out) {
        double v = -a;
        if (out) {
            out->clear();
            out->reserve(static_cast<std::size_t>(n_steps) + 1);
            out->push_back(v);
        }
        const auto f = [&](double vv) { return gamma / psi.psi(vv); };
        for (int i = 0; i < n_steps; ++i) {
            const double k1 = f(v);
            const double k2 = f(v + 0.5 * h * k1);
            const double k3 = f(v + 0.5 * h * k2);
            const double k4 = f(v + h * k3);
            v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (out) out->push_back(v);
        }
        return v;
    };

    double psimax = 1.0;
    for (int i = 0; i <= 512; ++i)
        psimax = std::max(psimax,
                          psi.psi(-a + 2.0 * a * static_cast<double>(i) / 512.0));
    double lo = 0.0, hi = 2.0 * a * psimax;
    double vhi = shoot(hi, nullptr);
    int guard = 0;
    while (vhi < a && guard++ < 60) {
        hi *= 2.0;
        vhi = shoot(hi, nullptr);
    }
    if (vhi < a)
        throw ValidationError(
            "solve_profile_ode: bisection bracket failure (invalid density)");

    // Bisection; every evaluation is recorded to verify the endpoint map
    // γ ↦ v(1) is monotone.
    std::vector<std::pair<double, double>> evals{{lo, -a}, {hi, vhi}};
    double gamma = hi, v1 = vhi;
    for (int it = 0; it < 200; ++it) {
        gamma = 0.5 * (lo + hi);
        v1 = shoot(gamma, nullptr);
        evals.emplace_back(gamma, v1);
        if (std::abs(v1 - a) <= gamma_tol) break;
        if (v1 < a) lo = gamma;
        else hi = gamma;
        if (hi - lo <= 1e-16 * std::max(1.0, hi)) break;
    }
    std::sort(evals.begin(), evals.end());
    for (std::size_t i = 1; i < evals.size(); ++i)
        if (evals[i].second < evals[i - 1].second - 1e-12)
            throw ValidationError(
                "solve_profile_ode: endpoint map is not monotone in gamma — "
                "the density is under-resolved at this step count");
    if (std::abs(v1 - a) > gamma_tol)
        throw ValidationError(
            "solve_profile_ode: shooting did not reach |v(1) - a| <= gamma_tol");

    std::vector<double> vs;
    shoot(gamma, &vs);
    SampledProfile prof;
    prof.a = a;
    prof.v = std::move(vs);
    prof.s.resize(prof.v.size());
    for (std::size_t i = 0; i < prof.s.size(); ++i)
        prof.s[i] = static_cast<double>(i) * h;
    prof.s.back() = 1.0;
    prof.validate(std::max(gamma_tol, 1e-9));
    return {gamma, std::move(prof)};
}

QuadResult pushforward_moment_quad(const DensityDesign& design,
                                   const ScalarMap& phi) {
    design.validate();
    const double a = design.a;
    std::vector<double> kinks = phi.kinks;
    const auto integrand = [&](double t) { return phi(t) * design.psi(t); };
    const QuadResult q = integrate_1d(integrand, -a, a, kinks, 28);
    return {q.value / design.gamma, q.error_estimate / design.gamma};
}

double pushforward_moment(const DensityDesign& design, const ScalarMap& phi) {
    return pushforward_moment_quad(design, phi).value;
}

CounterexampleReport ode_route_report(const MomentSpec& spec, double a,
                                      int basis_size, int n_steps,
                                      double gamma_tol) {
    spec.validate();
    const DensityDesign design = design_density(spec, a, basis_size);
    const auto [gamma, prof] = solve_profile_ode(design, a, n_steps, gamma_tol);
    CounterexampleReport rep;
    rep.p = spec.p;
    rep.route = "ode";
    rep.profile = prof;
    rep.moment1 = integrate_composition(prof, maps::identity());
    rep.moment2 = integrate_composition(prof, maps::abs_pow(spec.p - 1.0));
    rep.objective = integrate_composition(prof, maps::F(spec.p));
    rep.verdict = std::abs(rep.moment1) <= spec.eps_mom &&
                  std::abs(rep.moment2) <= spec.eps_mom &&
                  rep.objective <= -spec.delta;
    rep.message =
        (design.success ? std::string("designed density reaches a negative "
                                      "normalized objective; ")
                        : std::string("density design could not reach a "
                                      "negative objective in this basis "
                                      "(best value kept, never faked); ")) +
        "|gamma_shoot - int(psi)| = " +
        std::to_string(std::abs(gamma - design.gamma));
    rep.defect_check = defect_series(StepFunction::constant(1.0), Profile{prof},
                                     spec.p, geometric_j_list(1, 256));
    return rep;
}

VerifyReport verify_counterexample(const CounterexampleReport& report,
                                   const std::vector<unsigned>& j_list) {
    if (j_list.empty())
        throw ValidationError("verify_counterexample: j_list must be nonempty");
    const double p = report.p;
    const bool is_step = std::holds_alternative<StepFunction>(report.profile);
    const StepFunction v =
        is_step ? std::get<StepFunction>(report.profile)
                : discretize(std::get<SampledProfile>(report.profile));
    const StepFunction v2 = compose(v, maps::abs_pow(p - 1.0));

    // Fixed test set of step dual functions.
    std::vector<StepFunction> tests;
    tests.push_back(StepFunction::constant(1.0));
    tests.push_back({{0.0, 0.5, 1.0}, {1.0, 0.0}});
    tests.push_back({{0.0, 0.5, 1.0}, {1.0, -1.0}});
    tests.push_back({{0.0, 0.25, 0.75, 1.0}, {0.0, 1.0, 0.0}});
    tests.push_back({{0.0, 0.25, 0.5, 0.75, 1.0}, {2.0, -1.0, 0.5, -1.0}});

    VerifyReport out;
    double sup_v = 0.0;
    for (double t : v.values) sup_v = std::max(sup_v, std::abs(t));
    double sup_v2 = 0.0;
    for (double t : v2.values) sup_v2 = std::max(sup_v2, std::abs(t));

    const std::size_t tail_from = j_list.size() / 2;
    const double j_tail = static_cast<double>(j_list[tail_from]);
    double bound = 0.0, bound2 = 0.0;
    for (const auto& psi : tests) {
        double sup_psi = 0.0;
        for (double t : psi.values) sup_psi = std::max(sup_psi, std::abs(t));
        const double mv = static_cast<double>(v.pieces());
        const double mp = static_cast<double>(psi.pieces());
        // For discretized profiles the piece count is the sample count; the
        // profile's oscillation budget is its monotone sweep, not its pieces.
        const double pieces_v = is_step ? mv : 3.0;
        bound = std::max(bound, sup_v * sup_psi * (pieces_v + mp) / j_tail);
        bound2 = std::max(bound2, sup_v2 * sup_psi * (pieces_v + mp) / j_tail);
        const double limit = weak_limit_mean(v) *
                             integrate_composition(psi, maps::identity());
        const double limit2 = weak_limit_mean(v2) *
                              integrate_composition(psi, maps::identity());
        for (std::size_t i = tail_from; i < j_list.size(); ++i) {
            out.max_tail_pairing =
                std::max(out.max_tail_pairing,
                         std::abs(pair_oscillated(v, psi, j_list[i]) - limit));
            out.max_tail_composed_pairing = std::max(
                out.max_tail_composed_pairing,
                std::abs(pair_oscillated(v2, psi, j_list[i]) - limit2));
        }
    }
    const double floor_tol = is_step ? 1e-6 : 1e-3;
    out.pairings_vanish =
        out.max_tail_pairing <= std::max(floor_tol, bound) &&
        std::abs(weak_limit_mean(v)) <= 1e-6;
    out.composed_pairings_vanish =
        out.max_tail_composed_pairing <= std::max(floor_tol, bound2) &&
        std::abs(weak_limit_mean(v2)) <= 1e-6;

    const DefectSeries series =
        report.defect_check
            ? *report.defect_check
            : defect_series(StepFunction::constant(1.0), report.profile, p,
                            j_list);
    out.defect_limit = series.theoretical_limit;
    out.defect_negative = out.defect_limit < 0.0 &&
                          std::abs(out.defect_limit - report.objective) <=
                              1e-6 * std::max(1.0, std::abs(report.objective));
    out.verdict = out.pairings_vanish && out.composed_pairings_vanish &&
                  out.defect_negative;
    return out;
}

}  // namespace blb
