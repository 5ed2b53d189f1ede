#include "refmeasure/report.hpp"

#include <cmath>
#include <cstdio>

namespace refmeasure {

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

Json json_real(double x) {
    if (!std::isfinite(x)) return format_real(x);
    if (x == 0.0) x = 0.0;  // collapse -0
    return std::strtod(format_real(x).c_str(), nullptr);
}

Json json_rational(const Rational& q) { return format_rational(q); }

Json json_space(const FiniteSpace& s) {
    Json out;
    out["n"] = s.n();
    out["uniform"] = s.is_uniform();
    Json weights = Json::array();
    for (const auto& w : s.weights()) weights.push_back(json_rational(w));
    out["weights"] = weights;
    return out;
}

Json json_event(const Event& a, int n) {
    Json atoms = Json::array();
    for (auto i : a.indices()) atoms.push_back(i);
    Json out;
    out["atoms"] = atoms;
    out["size"] = a.size();
    (void)n;
    return out;
}

Json json_charge(const SignedCharge& mu) {
    Json values = Json::array();
    for (double x : mu.atom_values()) values.push_back(json_real(x));
    Json out;
    out["atom_values"] = values;
    out["total"] = json_real(mu.total());
    return out;
}

Json json_probability(const ProbabilityCharge& p) {
    Json masses = Json::array();
    for (const auto& m : p.masses()) masses.push_back(json_rational(m));
    Json out;
    out["masses"] = masses;
    return out;
}

namespace {

const char* extremum_status_name(ExtremumStatus s) {
    switch (s) {
        case ExtremumStatus::Exists: return "exists";
        case ExtremumStatus::Unbounded: return "unbounded";
        case ExtremumStatus::Empty: return "empty";
    }
    return "unknown";
}

const char* candidate_status_name(CandidateStatus s) {
    switch (s) {
        case CandidateStatus::Ok: return "ok";
        case CandidateStatus::ZeroExtremum: return "zero_extremum";
        case CandidateStatus::NotProportional: return "not_proportional";
        case CandidateStatus::Signed: return "signed";
    }
    return "unknown";
}

}  // namespace

Json json_extremum(const ExtremumReport& r) {
    Json out;
    out["status"] = extremum_status_name(r.status);
    out["method"] = r.method == ExtremumMethod::ClosedForm ? "closed_form" : "lp";
    Json values = Json::array();
    for (double x : r.per_atom_values) values.push_back(json_real(x));
    out["per_atom_values"] = values;
    if (r.extremum) out["total"] = json_real(r.extremum->total());
    if (!r.certificates.empty()) out["certificates"] = r.certificates;
    if (!r.offending_atoms.empty()) out["offending_atoms"] = r.offending_atoms;
    return out;
}

Json json_properties(const PropertyReport& r) {
    Json out;
    out["monotone"] = r.monotone;
    out["superadditive"] = r.superadditive;
    out["subadditive"] = r.subadditive;
    out["submodular"] = r.submodular;
    out["invariant_wrt_p"] = r.invariant_wrt_p;
    out["continuous_at_empty"] = r.continuous_at_empty;
    auto witness = [](const PropertyWitness& w) {
        Json j;
        j["a"] = Json::array();
        for (auto i : w.a.indices()) j["a"].push_back(i);
        j["b"] = Json::array();
        for (auto i : w.b.indices()) j["b"].push_back(i);
        return j;
    };
    if (r.monotone_witness) out["monotone_witness"] = witness(*r.monotone_witness);
    if (r.superadditive_witness) out["superadditive_witness"] = witness(*r.superadditive_witness);
    if (r.subadditive_witness) out["subadditive_witness"] = witness(*r.subadditive_witness);
    if (r.submodular_witness) out["submodular_witness"] = witness(*r.submodular_witness);
    if (r.invariance_witness) out["invariance_witness"] = witness(*r.invariance_witness);
    return out;
}

Json json_sandwich(const SandwichConstants& r) {
    Json out;
    out["a_star"] = r.a_star ? json_real(*r.a_star) : Json(nullptr);
    out["b_star"] = r.b_star ? json_real(*r.b_star) : Json(nullptr);
    return out;
}

Json json_growth(const std::vector<GrowthPoint>& points) {
    Json out = Json::array();
    for (const auto& pt : points) {
        Json j;
        j["n"] = pt.n;
        j["singleton_total"] = json_real(pt.singleton_total);
        j["core_empty"] = pt.core_empty;
        j["core_method"] = pt.core_method;
        out.push_back(j);
    }
    return out;
}

Json json_candidate(const CandidateReport& r) {
    Json out;
    out["status"] = candidate_status_name(r.status);
    if (r.candidate) out["p_hat"] = json_probability(*r.candidate);
    if (r.scale) out["scale"] = json_real(*r.scale);
    out["residual"] = json_real(r.residual);
    return out;
}

Json json_gamma(const GammaEstimate& g) {
    Json out;
    out["lo"] = json_rational(g.lo);
    out["hi"] = json_rational(g.hi);
    out["hi_exclusive"] = g.hi_exclusive;
    out["exact"] = g.exact;
    return out;
}

Json json_layer(const RecursionLayer& layer) {
    Json out;
    out["branch"] = layer.branch == VarBranch::Small ? "small" : "large";
    out["t"] = layer.t;
    out["method"] = layer.method == LayerMethod::Brute ? "brute" : "closed_form";
    Json values = Json::array();
    for (const auto& [p, x] : layer.values) {
        Json row;
        row["probability"] = json_rational(p);
        row["value"] = x;
        values.push_back(row);
    }
    out["class_values"] = values;
    return out;
}

Json json_elicitation(const ElicitationReport& r) {
    Json out;
    out["branch"] = r.branch == VarBranch::Small ? "small" : "large";
    out["candidate"] = json_candidate(r.candidate);
    out["gamma"] = json_gamma(r.gamma);
    if (r.readoff) out["readoff"] = json_gamma(*r.readoff);
    if (r.intersected) out["intersected"] = json_gamma(*r.intersected);
    out["depth"] = r.depth;
    out["brute_checked_to"] = r.brute_checked_to;
    out["resolution_limit"] = r.resolution_limit;
    if (!r.warnings.empty()) out["warnings"] = r.warnings;
    return out;
}

Json json_convergence(const ConvergenceSeries& s) {
    Json out;
    Json points = Json::array();
    for (const auto& pt : s.points) {
        Json j;
        j["n"] = pt.n;
        j["value"] = json_real(pt.value);
        if (pt.abs_error) j["abs_error"] = json_real(*pt.abs_error);
        points.push_back(j);
    }
    out["points"] = points;
    out["limit"] = s.limit ? Json(json_real(*s.limit)) : Json(nullptr);
    out["diverging"] = s.diverging;
    return out;
}

std::string render_report(const Json& report) { return report.dump(2) + "\n"; }

Json strip_volatile(Json report) {
    if (report.is_object()) {
        report.erase("timings");
        for (auto& [key, value] : report.items()) {
            (void)key;
            value = strip_volatile(value);
        }
    } else if (report.is_array()) {
        for (auto& value : report) value = strip_volatile(value);
    }
    return report;
}

}  // namespace refmeasure
