#include "refmeasure/cli.hpp"

#include "refmeasure/choquet.hpp"
#include "refmeasure/elicit.hpp"
#include "refmeasure/error.hpp"
#include "refmeasure/report.hpp"
#include "refmeasure/supports.hpp"
#include "refmeasure/tolerances.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

namespace refmeasure::cli {

namespace {

constexpr int kSchemaVersion = 1;

[[noreturn]] void config_fail(const std::string& msg) { fail(ErrorCode::ConfigError, msg); }

class Timer {
  public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        const auto now = std::chrono::steady_clock::now();
        return std::chrono::duration<double, std::milli>(now - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_fail("cannot open file: " + path);
    try {
        return Json::parse(in);
    } catch (const std::exception& e) {
        config_fail("not valid JSON (" + path + "): " + e.what());
    }
}

const Json& require_key(const Json& j, const char* key, const char* where) {
    auto it = j.find(key);
    if (it == j.end()) config_fail(std::string(where) + ": missing key \"" + key + "\"");
    return *it;
}

std::string get_string(const Json& j, const char* key, const char* where) {
    const Json& v = require_key(j, key, where);
    if (!v.is_string()) config_fail(std::string(where) + ": \"" + key + "\" must be a string");
    return v.get<std::string>();
}

int get_int(const Json& j, const char* key, const char* where) {
    const Json& v = require_key(j, key, where);
    if (!v.is_number_integer())
        config_fail(std::string(where) + ": \"" + key + "\" must be an integer");
    return v.get<int>();
}

double get_double(const Json& j, const char* key, const char* where) {
    const Json& v = require_key(j, key, where);
    if (!v.is_number()) config_fail(std::string(where) + ": \"" + key + "\" must be a number");
    return v.get<double>();
}

Rational rational_from_json(const Json& v, const char* where) {
    try {
        if (v.is_string()) return parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return Rational(v.get<long long>());
        if (v.is_number_float()) return rational_from_double(v.get<double>());
    } catch (const Error& e) {
        config_fail(std::string(where) + ": " + e.what());
    }
    config_fail(std::string(where) + ": expected a rational (\"p/q\" string or number)");
}

Rational get_rational(const Json& j, const char* key, const char* where) {
    return rational_from_json(require_key(j, key, where), where);
}

SpacePtr parse_space(const Json& config) {
    const Json& block = require_key(config, "space", "config");
    const std::string type = get_string(block, "type", "space");
    if (type == "uniform") return build_space_uniform(get_int(block, "n", "space"));
    if (type == "weighted") {
        const Json& ws = require_key(block, "weights", "space");
        if (!ws.is_array() || ws.empty()) config_fail("space: \"weights\" must be a non-empty array");
        std::vector<Rational> weights;
        for (const auto& w : ws) weights.push_back(rational_from_json(w, "space.weights"));
        try {
            return build_space_weighted(std::move(weights));
        } catch (const Error& e) {
            config_fail(std::string("space: ") + e.what());
        }
    }
    config_fail("space: unknown type \"" + type + "\" (use uniform | weighted)");
}

DistortionFunction floor_distortion(double floor) {
    if (!(floor >= 0.0)) fail(ErrorCode::ParameterOutOfRange, "floor must be >= 0");
    DistortionFunction h;
    std::ostringstream os;
    os << "floor(" << floor << ")";
    h.tag = os.str();
    h.eval = [floor](const Rational& x) -> double {
        if (x <= 0) return 0.0;
        return std::max(to_double(x), floor);
    };
    return h;
}

struct FamilyTarget {
    DistortionFunction h;
    std::optional<double> limit;  // analytic limit of n*h(1/n), when one exists
    std::string family;
    Rational level = 0;
    double alpha = 0.0;
};

FamilyTarget parse_family(const Json& target) {
    FamilyTarget out;
    out.family = get_string(target, "family", "target");
    try {
        if (out.family == "entropic") {
            out.alpha = get_double(target, "alpha", "target");
            out.h = entropic_distortion(out.alpha);
            out.limit = std::expm1(out.alpha) / out.alpha;
        } else if (out.family == "es") {
            out.level = get_rational(target, "level", "target");
            out.h = es_distortion(out.level);
            out.limit = 1.0 / (1.0 - to_double(out.level));
        } else if (out.family == "var") {
            out.level = get_rational(target, "level", "target");
            out.h = var_distortion(out.level);
            out.limit = 0.0;
        } else if (out.family == "rvar") {
            out.level = get_rational(target, "level", "target");
            out.h = rvar_distortion(out.level);
            out.limit = 0.0;
        } else if (out.family == "power") {
            const double p = get_double(target, "exponent", "target");
            out.h = power_distortion(p);
            if (p > 1.0)
                out.limit = 0.0;
            else if (p == 1.0)
                out.limit = 1.0;
        } else if (out.family == "floor") {
            out.h = floor_distortion(get_double(target, "floor", "target"));
        } else {
            config_fail("target: unknown family \"" + out.family +
                        "\" (use entropic | es | var | rvar | power | floor)");
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigError) throw;
        config_fail(std::string("target: ") + e.what());
    }
    return out;
}

Game parse_game(const Json& target, const SpacePtr& space) {
    const std::string type = get_string(target, "type", "target");
    if (type == "family") {
        const FamilyTarget fam = parse_family(target);
        return build_distortion(fam.h, declared_probability(space));
    }
    if (type == "table") {
        const Json& vs = require_key(target, "values", "target");
        if (!vs.is_array()) config_fail("target: \"values\" must be an array");
        std::vector<double> values;
        for (const auto& v : vs) {
            if (!v.is_number()) config_fail("target: table values must be numbers");
            values.push_back(v.get<double>());
        }
        try {
            Game g = Game::from_table(space, std::move(values), "config_table");
            g.attach_reference(declared_probability(space));
            return g;
        } catch (const Error& e) {
            config_fail(std::string("target: ") + e.what());
        }
    }
    config_fail("target: unknown type \"" + type + "\" (use family | table)");
}

FunctionalOracle parse_functional(const Json& target, const SpacePtr& space) {
    const std::string name = get_string(target, "name", "target");
    if (name == "coordinate") {
        const int atom = get_int(target, "atom", "target");
        if (atom < 0 || atom >= space->n()) config_fail("target: coordinate atom out of range");
        FunctionalOracle phi;
        phi.tag = "coordinate(" + std::to_string(atom) + ")";
        phi.eval = [atom](const SimpleRandomVariable& x) { return x(atom); };
        return phi;
    }
    if (name == "expectation") return expectation_oracle(declared_probability(space));
    if (name == "riskmetric") {
        RiskMetricSpec spec;
        const std::string family = get_string(target, "family", "target");
        if (family == "var")
            spec.family = RiskFamily::Var;
        else if (family == "rvar")
            spec.family = RiskFamily::Rvar;
        else if (family == "es")
            spec.family = RiskFamily::Es;
        else if (family == "entropic")
            spec.family = RiskFamily::Entropic;
        else
            config_fail("target: unknown riskmetric family \"" + family + "\"");
        if (spec.family == RiskFamily::Entropic)
            spec.alpha = get_double(target, "alpha", "target");
        else
            spec.level = get_rational(target, "level", "target");
        return riskmetric_oracle(spec, declared_probability(space));
    }
    if (name == "max_expectation") {
        const Json& cs = require_key(target, "charges", "target");
        if (!cs.is_array() || cs.empty())
            config_fail("target: \"charges\" must be a non-empty array of mass arrays");
        auto charges = std::make_shared<std::vector<ProbabilityCharge>>();
        for (const auto& row : cs) {
            if (!row.is_array() || static_cast<int>(row.size()) != space->n())
                config_fail("target: each charge needs one mass per atom");
            std::vector<Rational> masses;
            for (const auto& m : row) masses.push_back(rational_from_json(m, "target.charges"));
            try {
                charges->emplace_back(space, std::move(masses));
            } catch (const Error& e) {
                config_fail(std::string("target: ") + e.what());
            }
        }
        FunctionalOracle phi;
        phi.tag = "max_expectation(" + std::to_string(charges->size()) + ")";
        phi.eval = [charges](const SimpleRandomVariable& x) {
            double best = -std::numeric_limits<double>::infinity();
            for (const auto& q : *charges) {
                double e = 0.0;
                for (int i = 0; i < x.space()->n(); ++i)
                    e += to_double(q.masses()[static_cast<std::size_t>(i)]) * x(i);
                best = std::max(best, e);
            }
            return best;
        };
        return phi;
    }
    config_fail("target: unknown functional \"" + name +
                "\" (use coordinate | expectation | riskmetric | max_expectation)");
}

const Json kEmptyObject = Json::object();

const Json& options_block(const Json& config) {
    auto it = config.find("options");
    if (it == config.end()) return kEmptyObject;
    if (!it->is_object()) config_fail("config: \"options\" must be an object");
    return *it;
}

const Json& task_block(const Json& config) {
    const Json& t = require_key(config, "task", "config");
    if (!t.is_object()) config_fail("config: \"task\" must be an object");
    return t;
}

std::string verdict_for(const CandidateReport& candidate) {
    switch (candidate.status) {
        case CandidateStatus::ZeroExtremum: return "no_conclusion_zero_extremum";
        case CandidateStatus::Signed: return "signed_extremum_not_a_probability";
        case CandidateStatus::NotProportional: return "not_law_invariant_wrt_declared_p";
        case CandidateStatus::Ok: return "candidate_matches_declared_p";
    }
    return "unknown";
}

Json json_invariance(bool invariant, const std::optional<PropertyWitness>& witness, int n) {
    Json out;
    out["invariant"] = invariant;
    if (witness) {
        Json w;
        w["a"] = json_event(witness->a, n);
        w["b"] = json_event(witness->b, n);
        out["witness"] = w;
    }
    return out;
}

Json analyze_game_target(const Json& config, const SpacePtr& space, unsigned seed, Json& timings) {
    (void)seed;
    Json results;
    const Game game = parse_game(require_key(config, "target", "config"), space);
    const int n = space->n();
    const ProbabilityCharge declared = declared_probability(space);

    {
        Timer t;
        if (n <= FiniteSpace::kPairScanCap) {
            results["properties"] = json_properties(classify_properties(game));
        } else {
            results["properties"] = nullptr;
            results["properties_note"] = "skipped: pair scans need n <= 12";
        }
        timings["properties_ms"] = json_real(t.ms());
    }

    Timer t_extrema;
    const bool cross = n <= FiniteSpace::kPairScanCap;
    const auto core_inf = loose_extremum(game, ExtremumSide::CoreInf, cross);
    const auto anticore_sup = loose_extremum(game, ExtremumSide::AnticoreSup, cross);
    results["loose_core_inf"] = json_extremum(core_inf);
    results["loose_anticore_sup"] = json_extremum(anticore_sup);

    const bool want_strict = n <= FiniteSpace::kPairScanCap ||
                             options_block(config).value("strict", false);
    if (want_strict && n <= Game::kTableCap) {
        results["strict_core_inf"] = json_extremum(strict_extremum(game, ExtremumSide::CoreInf));
        results["strict_anticore_sup"] =
            json_extremum(strict_extremum(game, ExtremumSide::AnticoreSup));
    } else {
        results["strict_note"] = "skipped: per-atom LPs over 2^n rows need n <= 12 "
                                 "(or \"strict\": true up to 16)";
    }
    timings["extrema_ms"] = json_real(t_extrema.ms());

    results["sandwich"] = json_sandwich(sandwich_constants(game, declared));

    Timer t_candidate;
    const CandidateReport candidate = candidate_from_extremum(anticore_sup);
    results["candidate"] = json_candidate(candidate);
    results["verdict"] = verdict_for(candidate);
    if (candidate.status == CandidateStatus::ZeroExtremum)
        results["hint"] = "all loose extrema vanish; for 0/1 capacities run elicit-var";
    if (candidate.status == CandidateStatus::Ok && candidate.candidate) {
        const auto inv = check_invariance(game, *candidate.candidate);
        results["invariance_at_p_hat"] = json_invariance(inv.invariant, inv.witness, n);
        if (!inv.invariant) results["verdict"] = "candidate_found_but_not_invariant";
    }
    timings["candidate_ms"] = json_real(t_candidate.ms());

    if (candidate.status == CandidateStatus::Ok && candidate.scale) {
        const Json& target = require_key(config, "target", "config");
        const std::string type = get_string(target, "type", "target");
        if (type == "family") {
            const std::string family = get_string(target, "family", "target");
            Json recovered;
            try {
                if (family == "es") {
                    recovered["beta"] = json_real(recover_parameter(ScaleFamily::Es,
                                                                    *candidate.scale));
                } else if (family == "entropic") {
                    recovered["alpha"] = json_real(recover_parameter(ScaleFamily::Entropic,
                                                                     *candidate.scale));
                }
            } catch (const Error&) {
                recovered["note"] = "scale outside the invertible range";
            }
            if (!recovered.empty()) results["recovered"] = recovered;
        }
    }
    return results;
}

Json analyze_functional_target(const Json& config, const SpacePtr& space, unsigned seed,
                               Json& timings) {
    Json results;
    const Json& target = require_key(config, "target", "config");
    const FunctionalOracle phi = parse_functional(target, space);
    const Json& options = options_block(config);

    const std::string strategy = options.value("dictionary", std::string("indicators"));
    const int count = options.value("dictionary_count", 0);
    Dictionary dictionary;
    try {
        dictionary = make_dictionary(space, strategy, count, seed);
    } catch (const Error& e) {
        config_fail(std::string("options: ") + e.what());
    }
    Json dict_info;
    dict_info["strategy"] = strategy;
    dict_info["size"] = dictionary.size();
    results["dictionary"] = dict_info;
    results["functional"] = phi.tag;

    std::optional<SimpleRandomVariable> pin;
    if (options.contains("pin_constant")) {
        const double c = options["pin_constant"].get<double>();
        pin = SimpleRandomVariable::constant(space, c);
    }

    Timer t_extrema;
    const auto upper = dictionary_extremum(phi, dictionary, DictionarySide::UpperInf, pin);
    const auto lower = dictionary_extremum(phi, dictionary, DictionarySide::LowerSup, pin);
    results["upper_inf"] = json_extremum(upper);
    results["lower_sup"] = json_extremum(lower);
    timings["extrema_ms"] = json_real(t_extrema.ms());

    const ExtremumReport& basis = upper.status == ExtremumStatus::Exists ? upper : lower;
    if (basis.status == ExtremumStatus::Exists) {
        const CandidateReport candidate = candidate_from_extremum(basis);
        results["candidate"] = json_candidate(candidate);
        results["verdict"] = verdict_for(candidate);
        if (candidate.status == CandidateStatus::Ok && candidate.candidate) {
            Timer t_inv;
            const auto inv =
                functional_invariance_test(phi, *candidate.candidate, dictionary, seed);
            Json j;
            j["invariant"] = inv.invariant;
            if (inv.witness) {
                Json w;
                Json xs = Json::array();
                for (double v : inv.witness->x.values()) xs.push_back(json_real(v));
                Json ys = Json::array();
                for (double v : inv.witness->y.values()) ys.push_back(json_real(v));
                w["x"] = xs;
                w["y"] = ys;
                j["witness"] = w;
            }
            results["invariance_at_p_hat"] = j;
            if (!inv.invariant) results["verdict"] = "candidate_found_but_not_invariant";
            timings["invariance_ms"] = json_real(t_inv.ms());
        }
    } else {
        results["verdict"] = "no_extremum";
    }

    if (get_string(target, "name", "target") == "max_expectation") {
        // Desk-scale comparison against the lattice join of the listed
        // charges; printed side by side, deliberately not asserted equal.
        const Json& cs = require_key(target, "charges", "target");
        std::vector<SignedCharge> charges;
        for (const auto& row : cs) {
            std::vector<double> vals;
            for (const auto& m : row) vals.push_back(to_double(rational_from_json(m, "charges")));
            charges.emplace_back(space, vals);
        }
        SignedCharge join = charges.front();
        for (std::size_t i = 1; i < charges.size(); ++i)
            join = lattice_combine(LatticeMode::Join, join, &charges[i]);
        results["join_of_charges"] = json_charge(join);
    }
    return results;
}

Json run_analyze(const Json& config, const SpacePtr& space, unsigned seed, Json& timings) {
    const Json& target = require_key(config, "target", "config");
    const std::string type = get_string(target, "type", "target");
    if (type == "functional") return analyze_functional_target(config, space, seed, timings);
    return analyze_game_target(config, space, seed, timings);
}

Json run_elicit(const Json& config, const SpacePtr& space, Json& timings) {
    const Game capacity = parse_game(require_key(config, "target", "config"), space);
    const Json& task = task_block(config);

    int depth;
    if (task.contains("depth")) {
        depth = get_int(task, "depth", "task");
    } else {
        const VarBranch branch = var_branch_classifier(capacity);
        depth = var_resolution_limit(branch, capacity) + 2;
    }

    Timer t;
    const ElicitationReport report = elicit_var(capacity, depth);
    timings["elicit_ms"] = json_real(t.ms());

    Json results;
    results["elicitation"] = json_elicitation(report);
    Json layers = Json::array();
    for (int lt = 0; lt <= depth; ++lt)
        layers.push_back(json_layer(var_layer(report.branch, lt, LayerMethod::ClosedForm,
                                              capacity)));
    results["layers"] = layers;
    return results;
}

struct ConvergeOutput {
    std::string csv;
    Json summary;
};

ConvergeOutput run_converge(const Json& config) {
    const Json& target = require_key(config, "target", "config");
    if (get_string(target, "type", "target") != "family")
        config_fail("converge needs a family target");
    const FamilyTarget fam = parse_family(target);

    const Json& task = task_block(config);
    const Json& ns = require_key(task, "n_sequence", "task");
    if (!ns.is_array() || ns.empty()) config_fail("task: \"n_sequence\" must be a non-empty array");
    std::vector<int> n_sequence;
    for (const auto& v : ns) {
        if (!v.is_number_integer()) config_fail("task: n_sequence entries must be integers");
        n_sequence.push_back(v.get<int>());
    }
    const std::string stat_name = task.value("statistic", std::string("total"));
    ConvergenceStatistic stat;
    if (stat_name == "total")
        stat = ConvergenceStatistic::LooseExtremumTotal;
    else if (stat_name == "per_atom")
        stat = ConvergenceStatistic::PerAtomValue;
    else
        config_fail("task: statistic must be total | per_atom");

    const ConvergenceSeries series = convergence_study(fam.h, fam.limit, n_sequence, stat);

    std::ostringstream csv;
    csv << "n,statistic,limit,abs_error\n";
    for (const auto& pt : series.points) {
        csv << pt.n << "," << format_real(pt.value) << ",";
        if (series.limit) csv << format_real(*series.limit);
        csv << ",";
        if (pt.abs_error) csv << format_real(*pt.abs_error);
        csv << "\n";
    }

    ConvergeOutput out;
    out.csv = csv.str();
    out.summary = json_convergence(series);
    return out;
}

Json demo_config(const std::string& name) {
    Json c;
    if (name == "ex1") {
        c["space"] = {{"type", "weighted"}, {"weights", {"2/3", "1/3"}}};
        c["target"] = {{"type", "functional"}, {"name", "coordinate"}, {"atom", 0}};
        c["task"] = {{"type", "analyze"}};
        c["options"] = {{"dictionary", "indicators"}, {"seed", 42}};
        return c;
    }
    if (name == "ex2") {
        c["space"] = {{"type", "weighted"}, {"weights", {"1/2", "1/4", "1/4"}}};
        c["target"] = {{"type", "functional"},
                       {"name", "max_expectation"},
                       {"charges", {{"1/2", "1/4", "1/4"}, {"1/4", "1/4", "1/2"}}}};
        c["task"] = {{"type", "analyze"}};
        c["options"] = {{"dictionary", "random_simple"}, {"dictionary_count", 32}, {"seed", 42}};
        return c;
    }
    if (name == "entropic") {
        c["space"] = {{"type", "uniform"}, {"n", 8}};
        c["target"] = {{"type", "family"}, {"family", "entropic"}, {"alpha", 1.0}};
        c["task"] = {{"type", "analyze"}};
        return c;
    }
    if (name == "es") {
        c["space"] = {{"type", "uniform"}, {"n", 8}};
        c["target"] = {{"type", "family"}, {"family", "es"}, {"level", "3/4"}};
        c["task"] = {{"type", "analyze"}};
        return c;
    }
    if (name == "var_small") {
        c["space"] = {{"type", "uniform"}, {"n", 8}};
        c["target"] = {{"type", "family"}, {"family", "var"}, {"level", "1/2"}};
        c["task"] = {{"type", "elicit_var"}, {"depth", 3}};
        return c;
    }
    if (name == "var_large") {
        c["space"] = {{"type", "uniform"}, {"n", 16}};
        c["target"] = {{"type", "family"}, {"family", "var"}, {"level", "3/4"}};
        c["task"] = {{"type", "elicit_var"}, {"depth", 4}};
        return c;
    }
    fail(ErrorCode::UnknownDemo,
         "unknown demo \"" + name + "\" (use ex1 | ex2 | entropic | es | var_small | var_large)");
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) config_fail("cannot open output file: " + path);
    out << content;
    if (!out) config_fail("failed while writing: " + path);
}

std::string command_task_type(const std::string& command) {
    if (command == "elicit-var") return "elicit_var";
    return command;
}

Json base_report(const std::string& command, const Json& config, unsigned seed) {
    Json report;
    report["schema_version"] = kSchemaVersion;
    report["command"] = command;
    report["seed"] = seed;
    report["config"] = config;
    return report;
}

int run_inner(const Args& args) {
    const Json config = load_json(args.config_path);
    const Json& task = task_block(config);
    const std::string task_type = get_string(task, "type", "task");
    if (task_type != command_task_type(args.command))
        config_fail("task type \"" + task_type + "\" does not match subcommand \"" +
                    args.command + "\"");

    const Json& options = options_block(config);
    unsigned seed = args.seed_given ? args.seed
                                    : static_cast<unsigned>(options.value("seed", 42));

    if (args.command == "demo") {
        const std::string name = get_string(task, "name", "task");
        std::string golden_path = get_string(options, "golden_path", "options");
        // Relative golden paths are anchored at the config file's directory so the
        // outcome does not depend on the caller's working directory.
        if (!golden_path.empty() && !std::filesystem::path(golden_path).is_absolute()) {
            golden_path = (std::filesystem::path(args.config_path).parent_path() /
                           golden_path).lexically_normal().string();
        }
        const Json inner = demo_config(name);
        const unsigned demo_seed =
            static_cast<unsigned>(options_block(inner).value("seed", 42));

        Timer t_total;
        Json timings;
        const SpacePtr space = parse_space(inner);
        Json report = base_report("demo", inner, demo_seed);
        report["demo"] = name;
        const std::string inner_type = get_string(task_block(inner), "type", "task");
        report["results"] = inner_type == "elicit_var"
                                ? run_elicit(inner, space, timings)
                                : run_analyze(inner, space, demo_seed, timings);
        timings["total_ms"] = json_real(t_total.ms());
        report["timings"] = timings;

        const Json canonical = strip_volatile(report);
        if (args.golden_update) {
            write_file(golden_path, render_report(canonical));
            std::cout << "demo " << name << ": golden updated at " << golden_path << "\n";
            write_file(args.out_path, render_report(report));
            return 0;
        }
        std::ifstream gin(golden_path);
        if (!gin) config_fail("golden file missing: " + golden_path +
                              " (regenerate with --golden-update)");
        Json golden;
        try {
            golden = Json::parse(gin);
        } catch (const std::exception& e) {
            config_fail("golden file is not valid JSON: " + std::string(e.what()));
        }
        const bool matched = strip_volatile(golden) == canonical;
        report["golden"] = Json{{"path", golden_path}, {"matched", matched}};
        write_file(args.out_path, render_report(report));
        if (!matched) {
            std::cerr << "demo " << name << ": report deviates from golden file " << golden_path
                      << "\n";
            return 3;
        }
        std::cout << "demo " << name << ": matches golden\n";
        return 0;
    }

    if (args.command == "converge") {
        const ConvergeOutput out = run_converge(config);
        write_file(args.out_path, out.csv);
        std::cout << "converge: " << out.summary["points"].size() << " rows";
        if (out.summary["limit"].is_null())
            std::cout << ", no analytic limit, diverging="
                      << (out.summary["diverging"].get<bool>() ? "true" : "false");
        std::cout << "\n";
        return 0;
    }

    Timer t_total;
    Json timings;
    const SpacePtr space = parse_space(config);
    Json report = base_report(args.command, config, seed);
    report["results"] = args.command == "elicit-var" ? run_elicit(config, space, timings)
                                                     : run_analyze(config, space, seed, timings);
    timings["total_ms"] = json_real(t_total.ms());
    report["timings"] = timings;
    write_file(args.out_path, render_report(report));
    return 0;
}

}  // namespace

int run(const Args& args) {
    try {
        return run_inner(args);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::UnknownDemo) {
            std::cerr << "config error: " << e.what() << "\n";
            return 2;
        }
        std::cerr << "error [" << error_code_name(e.code()) << "]: " << e.what() << "\n";
        if (!args.out_path.empty()) {
            Json report;
            report["schema_version"] = kSchemaVersion;
            report["command"] = args.command;
            report["error"] = Json{{"code", error_code_name(e.code())}, {"message", e.what()}};
            std::ofstream out(args.out_path, std::ios::binary);
            if (out) out << render_report(report);
        }
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace refmeasure::cli
