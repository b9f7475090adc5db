// blb — command-line laboratory for oscillation defects of L^p norms on
// [0,1]: pointwise-inequality certification, weak-limit tables, defect
// series, and negative-defect profile searches.
//
// Exit codes: 0 success; 2 validation error ("you called it wrong");
// 3 no witness found; 4 verdict `violated` under --expect nonneg;
// 5 verdict `inconclusive` under --strict.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "blb/certify.hpp"
#include "blb/counterexample.hpp"
#include "blb/defect.hpp"
#include "blb/errors.hpp"
#include "blb/funcspace.hpp"
#include "blb/oscillate.hpp"
#include "blb/quadrature.hpp"
#include "blb/residual.hpp"
#include "blb/serialization.hpp"
#include "blb/step_function.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace blb;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNoWitness = 3;
constexpr int kExitViolated = 4;
constexpr int kExitInconclusive = 5;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw ValidationError("cannot write file: " + out_path);
    out << content;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("cannot parse number '" + s + "' in " + what);
    }
}

// Box grammar: "lo:hi" per dimension, dimensions comma-separated.
Box parse_box(const std::string& s) {
    Box box;
    for (const auto& dim : split(s, ',')) {
        const auto lh = split(dim, ':');
        if (lh.size() != 2)
            throw ValidationError("box dimension must be lo:hi, got '" + dim +
                                  "'");
        box.dims.emplace_back(parse_double(lh[0], "--box"),
                              parse_double(lh[1], "--box"));
    }
    return box;
}

// j-list grammar: "geometric:lo:hi" | "linear:lo:hi[:step]" | "j1,j2,…".
std::vector<unsigned> parse_j_list(const std::string& s) {
    const auto parts = split(s, ':');
    auto to_u = [](const std::string& t) {
        const double v = parse_double(t, "--j");
        if (v < 1 || v != static_cast<unsigned>(v))
            throw ValidationError("--j entries must be positive integers");
        return static_cast<unsigned>(v);
    };
    if (parts[0] == "geometric") {
        if (parts.size() != 3)
            throw ValidationError("--j geometric:<lo>:<hi>");
        return geometric_j_list(to_u(parts[1]), to_u(parts[2]));
    }
    if (parts[0] == "linear") {
        if (parts.size() != 3 && parts.size() != 4)
            throw ValidationError("--j linear:<lo>:<hi>[:<step>]");
        const unsigned lo = to_u(parts[1]), hi = to_u(parts[2]);
        const unsigned step = parts.size() == 4 ? to_u(parts[3]) : 1;
        std::vector<unsigned> out;
        for (unsigned j = lo; j <= hi; j += step) out.push_back(j);
        if (out.empty()) throw ValidationError("--j linear range is empty");
        return out;
    }
    std::vector<unsigned> out;
    for (const auto& t : split(s, ',')) out.push_back(to_u(t));
    return out;
}

// Step-function grammar: "const:<c>" | "twolevel:<t1>,<t2>" |
// "levels:<v>@<m>,…" | "file:<path.json>".
StepFunction parse_step_spec(const std::string& s, const std::string& flag) {
    const auto pos = s.find(':');
    const std::string head = s.substr(0, pos);
    const std::string rest = pos == std::string::npos ? "" : s.substr(pos + 1);
    if (head == "const") {
        return StepFunction::constant(parse_double(rest, flag));
    }
    if (head == "twolevel") {
        const auto ts = split(rest, ',');
        if (ts.size() != 2)
            throw ValidationError(flag + ": twolevel:<t1>,<t2>");
        return StepFunction::from_levels(
            {parse_double(ts[0], flag), parse_double(ts[1], flag)},
            {0.5, 0.5});
    }
    if (head == "levels") {
        std::vector<double> vs, ms;
        for (const auto& item : split(rest, ',')) {
            const auto vm = split(item, '@');
            if (vm.size() != 2)
                throw ValidationError(flag + ": levels:<v>@<m>,…");
            vs.push_back(parse_double(vm[0], flag));
            ms.push_back(parse_double(vm[1], flag));
        }
        return StepFunction::from_levels(vs, ms);
    }
    if (head == "file") {
        const Profile p = io::profile_from_json(read_file(rest));
        if (std::holds_alternative<StepFunction>(p))
            return std::get<StepFunction>(p);
        return discretize(std::get<SampledProfile>(p));
    }
    throw ValidationError(flag + ": unknown spec '" + s +
                          "' (const:|twolevel:|levels:|file:)");
}

// Profile grammar: step specs plus "witness:<report.json>" which pulls the
// profile out of a counterexample report.
Profile parse_profile_spec(const std::string& s, const std::string& flag) {
    const auto pos = s.find(':');
    const std::string head = s.substr(0, pos);
    const std::string rest = pos == std::string::npos ? "" : s.substr(pos + 1);
    if (head == "file") return io::profile_from_json(read_file(rest));
    if (head == "witness")
        return io::counterexample_from_json(read_file(rest)).profile;
    return Profile{parse_step_spec(s, flag)};
}

const ScalarMap& find_map(const std::vector<ScalarMap>& catalog,
                          const std::string& name) {
    for (const auto& m : catalog)
        if (m.name == name) return m;
    std::string names;
    for (const auto& m : catalog) names += (names.empty() ? "" : ", ") + m.name;
    throw ValidationError("unknown map '" + name + "' (have: " + names + ")");
}

std::string wrap_json(const json& config, const std::string& result_json) {
    json doc;
    doc["config"] = config;
    doc["result"] = json::parse(result_json);
    return doc.dump(2);
}

std::string wrap_csv(const json& config, const std::string& csv) {
    return "# config " + config.dump() + "\n" + csv;
}

struct CertifyArgs {
    std::string residual;
    double p = 3.0;
    std::string psi_variant = "sign_corrected";
    std::string box;
    double h = 1e-3;
    double tol = 1e-9;
    std::string expect;
    bool strict = false;
    std::string format = "json";
    std::string out;
};

int run_certify(const CertifyArgs& a) {
    Residual r;
    r.kind = residual_kind_from_string(a.residual);
    r.p = a.p;
    r.psi_variant = psi_variant_from_string(a.psi_variant);
    const Box box = parse_box(a.box);
    const InequalityCertificate cert = certify_nonneg(r, box, a.h, a.tol);
    const json config{{"subcommand", "certify"}, {"residual", a.residual},
                      {"p", a.p},               {"psi_variant", a.psi_variant},
                      {"box", a.box},           {"h", a.h},
                      {"tol", a.tol},           {"expect", a.expect},
                      {"strict", a.strict}};
    if (a.format == "pretty") {
        std::ostringstream ss;
        ss << "residual " << a.residual << " p=" << a.p << " box " << a.box
           << "\n"
           << "grid_min " << cert.grid_min << "  certified_lower_bound "
           << cert.certified_lower_bound << "\n"
           << "verdict " << to_string(cert.verdict)
           << (cert.reason.empty() ? "" : "  (" + cert.reason + ")") << "\n";
        emit(a.out, ss.str());
    } else {
        emit(a.out, wrap_json(config, io::to_json(cert)));
    }
    if (cert.verdict == Verdict::violated && a.expect == "nonneg")
        return kExitViolated;
    if (cert.verdict == Verdict::inconclusive && a.strict)
        return kExitInconclusive;
    return kExitOk;
}

struct ScanArgs {
    std::string residual = "g_p";
    std::string p_list;
    std::string box = "-1:1";
    double h = 1e-3;
    double tol = 1e-9;
    std::string format = "csv";
    std::string out;
};

int run_scan(const ScanArgs& a) {
    std::vector<double> ps;
    const auto parts = split(a.p_list, ':');
    if (parts[0] == "range") {
        if (parts.size() != 4)
            throw ValidationError("--p-list range:<lo>:<hi>:<step>");
        const double lo = parse_double(parts[1], "--p-list");
        const double hi = parse_double(parts[2], "--p-list");
        const double step = parse_double(parts[3], "--p-list");
        if (!(step > 0)) throw ValidationError("--p-list step must be > 0");
        for (double p = lo; p <= hi + 1e-12; p += step) ps.push_back(p);
    } else {
        for (const auto& t : split(a.p_list, ','))
            ps.push_back(parse_double(t, "--p-list"));
    }
    const auto rows = scan_p(ps, residual_kind_from_string(a.residual),
                             parse_box(a.box), a.h, a.tol);
    const json config{{"subcommand", "scan"}, {"residual", a.residual},
                      {"p_list", a.p_list},   {"box", a.box},
                      {"h", a.h},             {"tol", a.tol}};
    emit(a.out, a.format == "json" ? wrap_json(config, io::to_json(rows))
                                   : wrap_csv(config, io::to_csv(rows)));
    return kExitOk;
}

struct WeakLimitArgs {
    std::string v;
    std::string psi = "const:1";
    std::string phi;
    double p = 4.0;
    std::string j = "geometric:1:1024";
    std::string format = "json";
    std::string out;
};

int run_weaklimit(const WeakLimitArgs& a) {
    StepFunction v = parse_step_spec(a.v, "--v");
    const StepFunction psi = parse_step_spec(a.psi, "--psi");
    const auto j_list = parse_j_list(a.j);
    json config{{"subcommand", "weaklimit"}, {"v", a.v},   {"psi", a.psi},
                {"phi", a.phi},              {"p", a.p},   {"j", a.j}};
    double composition_limit = 0.0;
    if (!a.phi.empty()) {
        const auto catalog = maps::default_catalog(a.p);
        const ScalarMap& phi = find_map(catalog, a.phi);
        composition_limit = composition_weak_limit(v, phi);
        v = compose(v, phi);  // table tracks φ(T_j v) = T_j φ(v)
    }
    const WeakLimitEstimate est = convergence_table(v, psi, j_list);
    if (a.format == "csv") {
        emit(a.out, wrap_csv(config, io::to_csv(est)));
    } else {
        json result = json::parse(io::to_json(est));
        if (!a.phi.empty()) result["composition_weak_limit"] = composition_limit;
        emit(a.out, wrap_json(config, result.dump(2)));
    }
    return kExitOk;
}

struct CounterArgs {
    double p = 1.5;
    double a = 1.0;
    int levels = 3;
    unsigned seed = 0;
    std::string route = "step";
    double eps_mom = 1e-8;
    double delta = 1e-3;
    int basis_size = 6;
    int n_steps = 8192;
    double gamma_tol = 1e-9;
    bool verify = false;
    std::string format = "json";
    std::string out;
};

int run_counterexample(const CounterArgs& a) {
    MomentSpec spec;
    spec.p = a.p;
    spec.a = a.a;
    spec.eps_mom = a.eps_mom;
    spec.delta = a.delta;
    CounterexampleReport report;
    if (a.route == "step") {
        report = search_step_profile(spec, a.levels, a.seed);
    } else if (a.route == "ode") {
        report = ode_route_report(spec, a.a, a.basis_size, a.n_steps,
                                  a.gamma_tol);
    } else {
        throw ValidationError("--route must be step or ode");
    }
    const json config{{"subcommand", "counterexample"},
                      {"p", a.p},
                      {"a", a.a},
                      {"levels", a.levels},
                      {"seed", a.seed},
                      {"route", a.route},
                      {"eps_mom", a.eps_mom},
                      {"delta", a.delta},
                      {"basis_size", a.basis_size},
                      {"n_steps", a.n_steps},
                      {"gamma_tol", a.gamma_tol},
                      {"verify", a.verify}};
    json result = json::parse(io::to_json(report));
    if (a.verify) {
        const VerifyReport vr =
            verify_counterexample(report, geometric_j_list(1, 256));
        result["verify"] = json::parse(io::to_json(vr));
    }
    if (a.format == "pretty") {
        std::ostringstream ss;
        ss << "route " << report.route << "  p " << report.p << "\n"
           << "moment1 " << report.moment1 << "  moment2 " << report.moment2
           << "\n"
           << "objective " << report.objective << "\n"
           << (report.verdict ? "WITNESS" : "NO WITNESS") << ": "
           << report.message << "\n";
        emit(a.out, ss.str());
    } else {
        emit(a.out, wrap_json(config, result.dump(2)));
    }
    return report.verdict ? kExitOk : kExitNoWitness;
}

struct DefectArgs {
    double p = 4.0;
    std::string u = "const:1";
    std::string v;
    std::string j = "geometric:1:1024";
    std::string format = "csv";
    std::string out;
};

int run_defect(const DefectArgs& a) {
    const StepFunction u = parse_step_spec(a.u, "--u");
    const Profile v = parse_profile_spec(a.v, "--v");
    const auto j_list = parse_j_list(a.j);
    const DefectSeries series = defect_series(u, v, a.p, j_list);
    const json config{{"subcommand", "defect"}, {"p", a.p}, {"u", a.u},
                      {"v", a.v},               {"j", a.j}};
    emit(a.out, a.format == "json"
                    ? wrap_json(config, io::to_json(series))
                    : wrap_csv(config, io::to_csv(series)));
    return kExitOk;
}

int run_selftest(const std::string& out) {
    json checks = json::array();
    bool all_ok = true;
    const auto check = [&](const std::string& name, bool ok) {
        checks.push_back(json{{"name", name}, {"ok", ok}});
        all_ok = all_ok && ok;
    };
    const StepFunction two = StepFunction::from_levels({1.0, -1.0}, {0.5, 0.5});
    check("two-level mean vanishes",
          std::abs(integrate_composition(two, maps::identity())) == 0.0);
    check("two-level square integrates to 1",
          std::abs(integrate_composition(two, maps::square()) - 1.0) == 0.0);
    check("composition weak limit of (1+t)^4 on ±1 is 6",
          std::abs(composition_weak_limit(two, maps::F(4.0)) - 6.0) < 1e-15);
    check("rescale j=2 keeps the pairing with 1",
          std::abs(pair_oscillated(two, StepFunction::constant(1.0), 2)) ==
              0.0);
    check("g_4(1/2) = 3/2", std::abs(g_residual(4.0, 0.5) - 1.5) < 1e-15);
    check("F_4(1) = 14", std::abs(F_residual(4.0, 1.0) - 14.0) < 1e-15);
    check("F_4(-1) = -2", std::abs(F_residual(4.0, -1.0) + 2.0) < 1e-15);
    const double d7 = bl_defect(StepFunction::constant(1.0), two, 4.0, 7);
    check("constant-u defect is j-independent",
          std::abs(d7 - bl_defect(StepFunction::constant(1.0), two, 4.0, 1)) <
              1e-12);
    const std::string round =
        io::to_json(io::step_from_json(io::to_json(two)));
    check("step JSON round-trip is byte-identical", round == io::to_json(two));
    {
        Residual r;
        r.kind = ResidualKind::g_p;
        r.p = 3.0;
        Box box;
        box.dims = {{-1.0, 1.0}};
        const auto cert = certify_nonneg(r, box, 1e-3, 1e-3);
        check("g_3 certificate on [-1,1] is not violated",
              cert.verdict != Verdict::violated);
    }
    json doc{{"config", json{{"subcommand", "selftest"}}},
             {"result", json{{"checks", checks}, {"all_ok", all_ok}}}};
    emit(out, doc.dump(2));
    return all_ok ? kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "blb — oscillation defects of L^p norms on [0,1]: certification, "
        "weak limits, defect series, negative-defect searches"};
    app.require_subcommand(1);
    // The grid-step flag is spelled --h, so help must not claim -h.
    app.set_help_flag("--help", "Print help");

    CertifyArgs ca;
    auto* certify = app.add_subcommand(
        "certify", "Certify a pointwise residual nonnegative on a box");
    certify->set_help_flag("--help", "Print help");
    certify->add_option("--residual", ca.residual,
                        "g_p|F_p|Phi_p|Psi_p|Fvec_p|F_minus_Phi_p")
        ->required();
    certify->add_option("--p", ca.p, "Exponent p")->required();
    certify->add_option("--psi-variant", ca.psi_variant,
                        "as_printed|sign_corrected (Psi_p only)");
    certify->add_option("--box", ca.box, "lo:hi[,lo:hi]")->required();
    certify->add_option("--h", ca.h, "Grid step")->required();
    certify->add_option("--tol", ca.tol, "Certification tolerance");
    certify->add_option("--expect", ca.expect,
                        "'nonneg' → exit 4 on verdict violated");
    certify->add_flag("--strict", ca.strict,
                      "exit 5 on verdict inconclusive");
    certify->add_option("--format", ca.format, "json|pretty");
    certify->add_option("--out", ca.out, "Output path (default stdout)");

    ScanArgs sa;
    auto* scan = app.add_subcommand(
        "scan", "Scan grid minima of a residual across p");
    scan->set_help_flag("--help", "Print help");
    scan->add_option("--residual", sa.residual, "One-argument residual kind");
    scan->add_option("--p-list", sa.p_list, "p1,p2,… or range:<lo>:<hi>:<step>")
        ->required();
    scan->add_option("--box", sa.box, "lo:hi");
    scan->add_option("--h", sa.h, "Grid step");
    scan->add_option("--tol", sa.tol, "Violation tolerance");
    scan->add_option("--format", sa.format, "csv|json");
    scan->add_option("--out", sa.out, "Output path (default stdout)");

    WeakLimitArgs wa;
    auto* weaklimit = app.add_subcommand(
        "weaklimit", "Convergence table of ⟨T_j v, ψ⟩ toward (∫v)(∫ψ)");
    weaklimit->add_option("--v", wa.v,
                          "const:<c>|twolevel:<t1>,<t2>|levels:<v>@<m>,…|"
                          "file:<json>")
        ->required();
    weaklimit->add_option("--psi", wa.psi, "Dual step function (same grammar)");
    weaklimit->add_option("--phi", wa.phi,
                          "Optional composition map name from the catalog");
    weaklimit->add_option("--p", wa.p, "Exponent for the map catalog");
    weaklimit->add_option("--j", wa.j,
                          "geometric:<lo>:<hi>|linear:<lo>:<hi>[:<step>]|list");
    weaklimit->add_option("--format", wa.format, "json|csv");
    weaklimit->add_option("--out", wa.out, "Output path (default stdout)");

    CounterArgs xa;
    auto* counter = app.add_subcommand(
        "counterexample",
        "Search a zero-moment profile with negative defect (p in (1,3), p≠2)");
    counter->add_option("--p", xa.p, "Exponent p")->required();
    counter->add_option("--a", xa.a, "Level range bound");
    counter->add_option("--levels", xa.levels, "Step route: level count");
    counter->add_option("--seed", xa.seed, "Extra restart seed");
    counter->add_option("--route", xa.route, "step|ode");
    counter->add_option("--eps-mom", xa.eps_mom, "Moment residual tolerance");
    counter->add_option("--delta", xa.delta, "Required negativity margin");
    counter->add_option("--basis-size", xa.basis_size,
                        "ODE route: density basis size");
    counter->add_option("--n-steps", xa.n_steps, "ODE route: RK4 steps");
    counter->add_option("--gamma-tol", xa.gamma_tol,
                        "ODE route: endpoint tolerance");
    counter->add_flag("--verify", xa.verify,
                      "Run the independent verification suite");
    counter->add_option("--format", xa.format, "json|pretty");
    counter->add_option("--out", xa.out, "Output path (default stdout)");

    DefectArgs da;
    auto* defect = app.add_subcommand(
        "defect", "Defect series D_j = ∫|u+T_j v|^p − ∫|u|^p − ∫|T_j v|^p");
    defect->add_option("--p", da.p, "Exponent p")->required();
    defect->add_option("--u", da.u, "const:<c>|file:<json>");
    defect->add_option("--v", da.v,
                       "file:<json>|witness:<report.json>|twolevel:…|levels:…")
        ->required();
    defect->add_option("--j", da.j, "j-list spec");
    defect->add_option("--format", da.format, "csv|json");
    defect->add_option("--out", da.out, "Output path (default stdout)");

    std::string st_out;
    auto* selftest = app.add_subcommand(
        "selftest", "Run the built-in trivial example suite");
    selftest->add_option("--out", st_out, "Output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    try {
        if (app.got_subcommand(certify)) return run_certify(ca);
        if (app.got_subcommand(scan)) return run_scan(sa);
        if (app.got_subcommand(weaklimit)) return run_weaklimit(wa);
        if (app.got_subcommand(counter)) return run_counterexample(xa);
        if (app.got_subcommand(defect)) return run_defect(da);
        if (app.got_subcommand(selftest)) return run_selftest(st_out);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return kExitValidation;
}
