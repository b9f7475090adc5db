#include "blb/serialization.hpp"

#include <cstdio>
#include <utility>

#include <nlohmann/json.hpp>

#include "blb/errors.hpp"

namespace blb::io {
namespace {

using json = nlohmann::ordered_json;

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json step_obj(const StepFunction& f) {
    return json{{"breakpoints", f.breakpoints}, {"values", f.values}};
}

json sampled_obj(const SampledProfile& f) {
    return json{{"s", f.s}, {"v", f.v}, {"a", f.a}};
}

json profile_obj(const Profile& f) {
    if (std::holds_alternative<StepFunction>(f))
        return json{{"kind", "step"},
                    {"data", step_obj(std::get<StepFunction>(f))}};
    return json{{"kind", "sampled"},
                {"data", sampled_obj(std::get<SampledProfile>(f))}};
}

StepFunction step_from_obj(const json& j) {
    StepFunction f;
    f.breakpoints = j.at("breakpoints").get<std::vector<double>>();
    f.values = j.at("values").get<std::vector<double>>();
    f.validate();
    return f;
}

SampledProfile sampled_from_obj(const json& j) {
    SampledProfile f;
    f.s = j.at("s").get<std::vector<double>>();
    f.v = j.at("v").get<std::vector<double>>();
    f.a = j.at("a").get<double>();
    f.validate();
    return f;
}

Profile profile_from_obj(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "step") return Profile{step_from_obj(j.at("data"))};
    if (kind == "sampled") return Profile{sampled_from_obj(j.at("data"))};
    throw ValidationError("profile JSON: unknown kind '" + kind + "'");
}

json parse(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ValidationError("malformed JSON input");
    return j;
}

template <typename Fn>
auto guarded(const std::string& what, Fn&& fn) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw ValidationError(what + ": " + e.what());
    }
}

}  // namespace

std::string to_json(const StepFunction& f) { return step_obj(f).dump(2); }
std::string to_json(const SampledProfile& f) { return sampled_obj(f).dump(2); }
std::string to_json(const Profile& f) { return profile_obj(f).dump(2); }

std::string to_json(const InequalityCertificate& cert) {
    json j{{"residual",
            {{"kind", to_string(cert.residual.kind)},
             {"p", cert.residual.p},
             {"psi_variant", to_string(cert.residual.psi_variant)}}},
           {"box", json::array()},
           {"h", cert.h},
           {"tolerance", cert.tolerance},
           {"lipschitz_available", cert.lipschitz_available},
           {"lipschitz_bound", cert.lipschitz_bound},
           {"grid_min", cert.grid_min},
           {"witness", cert.witness},
           {"certified_lower_bound", cert.certified_lower_bound},
           {"verdict", to_string(cert.verdict)},
           {"reason", cert.reason},
           {"equality_neighborhood_ok", cert.equality_neighborhood_ok}};
    for (const auto& [lo, hi] : cert.box.dims)
        j["box"].push_back(json::array({lo, hi}));
    return j.dump(2);
}

std::string to_json(const std::vector<ScanRow>& rows) {
    json j = json::array();
    for (const auto& r : rows)
        j.push_back(json{{"p", r.p},
                         {"grid_min", r.grid_min},
                         {"argmin", r.argmin},
                         {"verdict", r.verdict}});
    return j.dump(2);
}

std::string to_json(const WeakLimitEstimate& est) {
    return json{{"j_list", est.j_list},
                {"pairings", est.pairings},
                {"predicted_limit", est.predicted_limit},
                {"max_deviation_tail", est.max_deviation_tail}}
        .dump(2);
}

std::string to_json(const DefectSeries& series) {
    return json{{"u", step_obj(series.u)},
                {"v", profile_obj(series.v)},
                {"p", series.p},
                {"j_list", series.j_list},
                {"D", series.D},
                {"theoretical_limit", series.theoretical_limit},
                {"tail_error", series.tail_error}}
        .dump(2);
}

std::string to_json(const DensityDesign& design) {
    return json{{"a", design.a},
                {"p", design.p},
                {"coefficients", design.coefficients},
                {"psi_min", design.psi_min},
                {"gamma", design.gamma},
                {"success", design.success},
                {"normalized_objective", design.normalized_objective}}
        .dump(2);
}

std::string to_json(const CounterexampleReport& report) {
    json j{{"route", report.route},
           {"p", report.p},
           {"profile", profile_obj(report.profile)},
           {"moment1", report.moment1},
           {"moment2", report.moment2},
           {"objective", report.objective},
           {"verdict", report.verdict},
           {"message", report.message}};
    if (report.defect_check) {
        const auto& s = *report.defect_check;
        j["defect_check"] = json{{"p", s.p},
                                 {"j_list", s.j_list},
                                 {"D", s.D},
                                 {"theoretical_limit", s.theoretical_limit},
                                 {"tail_error", s.tail_error}};
    } else {
        j["defect_check"] = nullptr;
    }
    return j.dump(2);
}

std::string to_json(const VerifyReport& report) {
    return json{{"pairings_vanish", report.pairings_vanish},
                {"composed_pairings_vanish", report.composed_pairings_vanish},
                {"defect_negative", report.defect_negative},
                {"defect_limit", report.defect_limit},
                {"max_tail_pairing", report.max_tail_pairing},
                {"max_tail_composed_pairing",
                 report.max_tail_composed_pairing},
                {"verdict", report.verdict}}
        .dump(2);
}

std::string to_json(const P4IdentityReport& report) {
    return json{{"preconditions_ok", report.preconditions_ok},
                {"moment1", report.moment1},
                {"moment3", report.moment3},
                {"cross_term", report.cross_term},
                {"deviations", report.deviations},
                {"max_tail_deviation", report.max_tail_deviation},
                {"exact_for_constant_u", report.exact_for_constant_u},
                {"ok", report.ok}}
        .dump(2);
}

std::string to_json(const Theorem41Report& report) {
    return json{{"p", report.p},
                {"psi_variant", to_string(report.variant)},
                {"psi_integrals", report.psi_integrals},
                {"psi_limit", report.psi_limit},
                {"psi_vanishes", report.psi_vanishes},
                {"D", report.D},
                {"min_D_tail", report.min_D_tail},
                {"min_pointwise_slack", report.min_pointwise_slack},
                {"tail_tolerance", report.tail_tolerance},
                {"conclusion_holds", report.conclusion_holds}}
        .dump(2);
}

StepFunction step_from_json(const std::string& text) {
    return guarded("step-function JSON",
                   [&] { return step_from_obj(parse(text)); });
}

SampledProfile sampled_from_json(const std::string& text) {
    return guarded("sampled-profile JSON",
                   [&] { return sampled_from_obj(parse(text)); });
}

Profile profile_from_json(const std::string& text) {
    return guarded("profile JSON", [&]() -> Profile {
        const json j = parse(text);
        // Accept both the tagged form and a bare step/sampled object.
        if (j.contains("kind")) return profile_from_obj(j);
        if (j.contains("breakpoints")) return Profile{step_from_obj(j)};
        if (j.contains("s")) return Profile{sampled_from_obj(j)};
        throw ValidationError("profile JSON: unrecognized shape");
    });
}

DensityDesign design_from_json(const std::string& text) {
    return guarded("density-design JSON", [&] {
        const json j = parse(text);
        DensityDesign d;
        d.a = j.at("a").get<double>();
        d.p = j.at("p").get<double>();
        d.coefficients = j.at("coefficients").get<std::vector<double>>();
        d.psi_min = j.at("psi_min").get<double>();
        d.gamma = j.at("gamma").get<double>();
        d.success = j.at("success").get<bool>();
        d.normalized_objective = j.at("normalized_objective").get<double>();
        d.validate();
        return d;
    });
}

CounterexampleReport counterexample_from_json(const std::string& text) {
    return guarded("counterexample JSON", [&] {
        const json j = parse(text);
        CounterexampleReport r;
        r.route = j.at("route").get<std::string>();
        r.p = j.at("p").get<double>();
        r.profile = profile_from_obj(j.at("profile"));
        r.moment1 = j.at("moment1").get<double>();
        r.moment2 = j.at("moment2").get<double>();
        r.objective = j.at("objective").get<double>();
        r.verdict = j.at("verdict").get<bool>();
        r.message = j.at("message").get<std::string>();
        if (j.contains("defect_check") && !j.at("defect_check").is_null()) {
            DefectSeries s;
            const json& d = j.at("defect_check");
            s.p = d.at("p").get<double>();
            s.j_list = d.at("j_list").get<std::vector<unsigned>>();
            s.D = d.at("D").get<std::vector<double>>();
            s.theoretical_limit = d.at("theoretical_limit").get<double>();
            s.tail_error = d.at("tail_error").get<double>();
            s.u = StepFunction::constant(1.0);
            s.v = r.profile;
            r.defect_check = std::move(s);
        }
        return r;
    });
}

std::string to_csv(const WeakLimitEstimate& est) {
    std::string out = "j,pairing,deviation\n";
    for (std::size_t i = 0; i < est.j_list.size(); ++i) {
        out += std::to_string(est.j_list[i]) + ',' + fmt17(est.pairings[i]) +
               ',' + fmt17(std::abs(est.pairings[i] - est.predicted_limit)) +
               '\n';
    }
    return out;
}

std::string to_csv(const DefectSeries& series) {
    std::string out = "j,D,theoretical_limit,deviation\n";
    for (std::size_t i = 0; i < series.j_list.size(); ++i) {
        out += std::to_string(series.j_list[i]) + ',' + fmt17(series.D[i]) +
               ',' + fmt17(series.theoretical_limit) + ',' +
               fmt17(std::abs(series.D[i] - series.theoretical_limit)) + '\n';
    }
    return out;
}

std::string to_csv(const std::vector<ScanRow>& rows) {
    std::string out = "p,grid_min,argmin,verdict\n";
    for (const auto& r : rows) {
        out += fmt17(r.p) + ',' + fmt17(r.grid_min) + ',' + fmt17(r.argmin) +
               ',' + r.verdict + '\n';
    }
    return out;
}

}  // namespace blb::io
