#include "refmeasure/supports.hpp"

#include "refmeasure/lp.hpp"
#include "refmeasure/tolerances.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace refmeasure {

namespace {

std::string event_text(std::uint64_t mask, int n) {
    std::string s = "{";
    bool first = true;
    for (int i = 0; i < n; ++i) {
        if (!(mask >> i & 1)) continue;
        if (!first) s += ",";
        s += std::to_string(i);
        first = false;
    }
    return s + "}";
}

std::vector<double> singleton_profile(const Game& v) {
    std::vector<double> profile(static_cast<std::size_t>(v.n()));
    for (int i = 0; i < v.n(); ++i)
        profile[static_cast<std::size_t>(i)] = v.value_mask(std::uint64_t{1} << i);
    return profile;
}

/// One domination constraint per nonempty event; the full event is optionally
/// pinned by an equality instead.
LPProblem domination_problem(const Game& v, bool upper_bounds, bool pin_total) {
    const int n = v.n();
    if (n > Game::kTableCap)
        fail(ErrorCode::TooManyAtoms, "per-event LPs are limited to n = 16");
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    LPProblem problem;
    problem.objective.assign(static_cast<std::size_t>(n), 0.0);
    for (std::uint64_t mask = 1; mask <= full; ++mask) {
        if (pin_total && mask == full) continue;
        LPConstraint con;
        con.row.assign(static_cast<std::size_t>(n), 0.0);
        for (std::uint64_t rest = mask; rest; rest &= rest - 1)
            con.row[static_cast<std::size_t>(std::countr_zero(rest))] = 1.0;
        con.rel = upper_bounds ? Relation::LessEq : Relation::GreaterEq;
        con.bound = v.value_mask(mask);
        problem.constraints.push_back(std::move(con));
    }
    if (pin_total) {
        LPConstraint con;
        con.row.assign(static_cast<std::size_t>(n), 1.0);
        con.rel = Relation::Equal;
        con.bound = v.total();
        problem.constraints.push_back(std::move(con));
    }
    return problem;
}

std::string binding_note(const Game& v, const std::vector<double>& x, int atom,
                         bool upper_bounds) {
    const int n = v.n();
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    int count = 0;
    std::string examples;
    for (std::uint64_t mask = 1; mask <= full; ++mask) {
        double lhs = 0.0;
        for (std::uint64_t rest = mask; rest; rest &= rest - 1)
            lhs += x[static_cast<std::size_t>(std::countr_zero(rest))];
        if (std::abs(lhs - v.value_mask(mask)) <= tol::kFunctional) {
            if (count < 3) {
                if (count > 0) examples += ",";
                examples += event_text(mask, n);
            }
            ++count;
        }
    }
    std::ostringstream note;
    note << "atom " << atom << ": " << count << " binding "
         << (upper_bounds ? "upper" : "lower") << " constraints";
    if (count > 0) note << " e.g. " << examples;
    return note.str();
}

}  // namespace

ExtremumReport loose_extremum(const Game& v, ExtremumSide side, bool lp_cross_check) {
    const int n = v.n();
    ExtremumReport report;
    report.status = ExtremumStatus::Exists;
    report.method = ExtremumMethod::ClosedForm;
    report.per_atom_values = singleton_profile(v);
    report.extremum = SignedCharge(v.space(), report.per_atom_values);
    for (int i = 0; i < n; ++i)
        report.certificates.push_back("atom " + std::to_string(i) + ": singleton event " +
                                      event_text(std::uint64_t{1} << i, n) + " binding");
    if (lp_cross_check) {
        const bool upper_bounds = side == ExtremumSide::AnticoreSup;
        LPProblem problem = domination_problem(v, upper_bounds, false);
        problem.sense = upper_bounds ? Sense::Maximize : Sense::Minimize;
        for (int atom = 0; atom < n; ++atom) {
            std::fill(problem.objective.begin(), problem.objective.end(), 0.0);
            problem.objective[static_cast<std::size_t>(atom)] = 1.0;
            const LPResult lp = solve(problem);
            if (lp.status != LPStatus::Optimal ||
                std::abs(lp.value - report.per_atom_values[static_cast<std::size_t>(atom)]) >
                    tol::kValue)
                fail(ErrorCode::DomainError,
                     "internal check failed: loose extremum closed form disagrees with LP at "
                     "atom " + std::to_string(atom));
        }
    }
    return report;
}

ExtremumReport strict_extremum(const Game& v, ExtremumSide side) {
    const int n = v.n();
    const bool upper_bounds = side == ExtremumSide::AnticoreSup;
    LPProblem problem = domination_problem(v, upper_bounds, true);
    problem.sense = upper_bounds ? Sense::Maximize : Sense::Minimize;
    ExtremumReport report;
    report.method = ExtremumMethod::Lp;
    for (int atom = 0; atom < n; ++atom) {
        std::fill(problem.objective.begin(), problem.objective.end(), 0.0);
        problem.objective[static_cast<std::size_t>(atom)] = 1.0;
        const LPResult lp = solve(problem);
        if (lp.status == LPStatus::Infeasible) {
            report.status = ExtremumStatus::Empty;
            report.per_atom_values.clear();
            report.extremum.reset();
            std::string rows;
            for (std::size_t k = 0; k < lp.certificate.size() && k < 4; ++k) {
                if (k > 0) rows += ",";
                rows += std::to_string(lp.certificate[k]);
            }
            report.certificates = {"infeasible; certificate constraint rows " + rows};
            return report;
        }
        if (lp.status == LPStatus::Unbounded) {
            report.status = ExtremumStatus::Unbounded;
            report.offending_atoms.push_back(atom);
            continue;
        }
        report.per_atom_values.push_back(lp.value);
        report.certificates.push_back(binding_note(v, lp.x, atom, upper_bounds));
    }
    if (report.status == ExtremumStatus::Exists)
        report.extremum = SignedCharge(v.space(), report.per_atom_values);
    return report;
}

ExtremumReport dictionary_extremum(const FunctionalOracle& phi, const Dictionary& dictionary,
                                   DictionarySide side,
                                   const std::optional<SimpleRandomVariable>& pin) {
    if (dictionary.empty()) fail(ErrorCode::EmptyDictionary, "dictionary must be nonempty");
    const SpacePtr space = dictionary.front().space();
    const int n = space->n();
    if (n > FiniteSpace::kEnumerationCap)
        fail(ErrorCode::TooManyAtoms, "dictionary extrema are limited to n = 24");
    for (const auto& x : dictionary)
        if (!x.space()->same_space(*space))
            fail(ErrorCode::SpaceMismatch, "dictionary variables live on different spaces");

    const bool upper_bounds = side == DictionarySide::LowerSup;
    LPProblem problem;
    problem.objective.assign(static_cast<std::size_t>(n), 0.0);
    problem.sense = upper_bounds ? Sense::Maximize : Sense::Minimize;
    std::vector<double> bounds;
    for (const auto& x : dictionary) {
        LPConstraint con;
        con.row = x.values();
        con.rel = upper_bounds ? Relation::LessEq : Relation::GreaterEq;
        con.bound = phi.eval(x);
        bounds.push_back(con.bound);
        problem.constraints.push_back(std::move(con));
    }
    if (pin) {
        if (!pin->space()->same_space(*space))
            fail(ErrorCode::SpaceMismatch, "pin variable lives on a different space");
        const auto& pv = pin->values();
        if (!std::all_of(pv.begin(), pv.end(), [&](double t) { return t == pv.front(); }))
            fail(ErrorCode::MalformedProblem, "pin variable must be constant");
        if (std::none_of(dictionary.begin(), dictionary.end(),
                         [&](const SimpleRandomVariable& x) { return x.values() == pv; }))
            fail(ErrorCode::MalformedProblem, "pin variable must belong to the dictionary");
        LPConstraint con;
        con.row = pv;
        con.rel = Relation::Equal;
        con.bound = phi.eval(*pin);
        problem.constraints.push_back(std::move(con));
    }

    ExtremumReport report;
    report.method = ExtremumMethod::Lp;
    for (int atom = 0; atom < n; ++atom) {
        std::fill(problem.objective.begin(), problem.objective.end(), 0.0);
        problem.objective[static_cast<std::size_t>(atom)] = 1.0;
        const LPResult lp = solve(problem);
        if (lp.status == LPStatus::Infeasible) {
            report.status = ExtremumStatus::Empty;
            report.per_atom_values.clear();
            report.extremum.reset();
            std::string rows;
            for (std::size_t k = 0; k < lp.certificate.size() && k < 4; ++k) {
                if (k > 0) rows += ",";
                rows += std::to_string(lp.certificate[k]);
            }
            report.certificates = {"infeasible; certificate dictionary rows " + rows};
            return report;
        }
        if (lp.status == LPStatus::Unbounded) {
            report.status = ExtremumStatus::Unbounded;
            report.offending_atoms.push_back(atom);
            report.per_atom_values.push_back(upper_bounds
                                                 ? std::numeric_limits<double>::infinity()
                                                 : -std::numeric_limits<double>::infinity());
            report.certificates.push_back("atom " + std::to_string(atom) + ": unbounded");
            continue;
        }
        report.per_atom_values.push_back(lp.value);
        int binding = 0;
        for (std::size_t k = 0; k < dictionary.size(); ++k) {
            double lhs = 0.0;
            for (int i = 0; i < n; ++i)
                lhs += lp.x[static_cast<std::size_t>(i)] *
                       dictionary[k].values()[static_cast<std::size_t>(i)];
            if (std::abs(lhs - bounds[k]) <= tol::kFunctional) ++binding;
        }
        report.certificates.push_back("atom " + std::to_string(atom) + ": " +
                                      std::to_string(binding) + " binding dictionary rows");
    }
    if (report.status == ExtremumStatus::Exists)
        report.extremum = SignedCharge(space, report.per_atom_values);
    return report;
}

SandwichConstants sandwich_constants(const Game& v, const ProbabilityCharge& p) {
    if (!v.space()->same_space(*p.space()))
        fail(ErrorCode::SpaceMismatch, "game and probability live on different spaces");
    require_enumerable(*v.space(), "sandwich_constants");
    const int n = v.n();
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    bool a_valid = true, b_valid = true;
    bool any_ratio = false;
    double a = 0.0, b = 0.0;
    for (std::uint64_t mask = 1; mask <= full; ++mask) {
        Rational prob = 0;
        for (std::uint64_t rest = mask; rest; rest &= rest - 1)
            prob += p.masses()[static_cast<std::size_t>(std::countr_zero(rest))];
        const double value = v.value_mask(mask);
        if (prob == 0) {
            if (value < -tol::kValue) a_valid = false;
            if (value > tol::kValue) b_valid = false;
            continue;
        }
        const double ratio = value / to_double(prob);
        if (!any_ratio) {
            a = b = ratio;
            any_ratio = true;
        } else {
            a = std::min(a, ratio);
            b = std::max(b, ratio);
        }
    }
    SandwichConstants out;
    if (a_valid && any_ratio) out.a_star = a;
    if (b_valid && any_ratio) out.b_star = b;
    return out;
}

std::vector<GrowthPoint> diagnose_existence(const DistortionFunction& h,
                                            const std::vector<int>& n_values) {
    if (n_values.empty()) fail(ErrorCode::DomainError, "need at least one refinement size");
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        if (n_values[i] < 1) fail(ErrorCode::DomainError, "refinement sizes must be >= 1");
        if (i > 0 && n_values[i] <= n_values[i - 1])
            fail(ErrorCode::DomainError, "refinement sizes must be ascending");
    }
    const double at_zero = h.eval(Rational(0));
    if (at_zero != 0.0) fail(ErrorCode::DomainError, "distortion must map 0 to 0");

    std::vector<GrowthPoint> series;
    for (int n : n_values) {
        GrowthPoint point;
        point.n = n;
        const double h1n = h.eval(Rational(1, n));
        if (!std::isfinite(h1n))
            fail(ErrorCode::DomainError, "distortion undefined at 1/" + std::to_string(n));
        point.singleton_total = n * h1n;

        const double total = h.eval(Rational(1));
        bool symmetric_empty = false;
        for (int k = 1; k <= n; ++k) {
            const double hv = h.eval(Rational(k, n));
            if (!std::isfinite(hv))
                fail(ErrorCode::DomainError, "distortion undefined at an attainable probability");
            if (k * total / n < hv - tol::kValue) {
                symmetric_empty = true;
                break;
            }
        }
        point.core_empty = symmetric_empty;
        point.core_method = "symmetrization";
        if (n <= FiniteSpace::kPairScanCap) {
            const Game game = build_distortion(h, declared_probability(build_space_uniform(n)));
            const bool lp_empty =
                strict_extremum(game, ExtremumSide::CoreInf).status == ExtremumStatus::Empty;
            if (lp_empty != symmetric_empty)
                fail(ErrorCode::DomainError,
                     "internal check failed: LP and symmetrization disagree on core emptiness");
            point.core_method = "lp+symmetrization";
        }
        series.push_back(std::move(point));
    }
    return series;
}

SupportSpec SupportSpec::game_side(Game v, Side side) {
    SupportSpec spec;
    spec.side = side;
    spec.game = std::move(v);
    return spec;
}

SupportSpec SupportSpec::core_of(Game v) {
    SupportSpec spec;
    spec.side = Side::Upper;
    spec.normalization = Normalization::TotalEquals;
    spec.total = v.total();
    spec.game = std::move(v);
    return spec;
}

SupportSpec SupportSpec::anticore_of(Game v) {
    SupportSpec spec;
    spec.side = Side::Lower;
    spec.normalization = Normalization::TotalEquals;
    spec.total = v.total();
    spec.game = std::move(v);
    return spec;
}

SupportSpec SupportSpec::functional_side(FunctionalOracle phi, Dictionary d, Side side) {
    SupportSpec spec;
    spec.side = side;
    spec.oracle = std::move(phi);
    spec.dictionary = std::move(d);
    return spec;
}

bool membership(const SignedCharge& mu, const SupportSpec& spec) {
    const bool lower = spec.side == SupportSpec::Side::Lower;
    if (spec.game) {
        if (!mu.space()->same_space(*spec.game->space()))
            fail(ErrorCode::SpaceMismatch, "charge and game live on different spaces");
        require_enumerable(*mu.space(), "membership");
        const int n = mu.space()->n();
        const std::uint64_t full = (std::uint64_t{1} << n) - 1;
        for (std::uint64_t mask = 1; mask <= full; ++mask) {
            double lhs = 0.0;
            for (std::uint64_t rest = mask; rest; rest &= rest - 1)
                lhs += mu.atom_values()[static_cast<std::size_t>(std::countr_zero(rest))];
            const double rhs = spec.game->value_mask(mask);
            if (lower ? lhs > rhs + tol::kValue : lhs < rhs - tol::kValue) return false;
        }
    } else if (spec.oracle && spec.dictionary) {
        for (const auto& x : *spec.dictionary) {
            if (!mu.space()->same_space(*x.space()))
                fail(ErrorCode::SpaceMismatch, "charge and dictionary live on different spaces");
            double lhs = 0.0;
            for (int i = 0; i < mu.space()->n(); ++i)
                lhs += mu.atom_values()[static_cast<std::size_t>(i)] *
                       x.values()[static_cast<std::size_t>(i)];
            const double rhs = spec.oracle->eval(x);
            if (lower ? lhs > rhs + tol::kValue : lhs < rhs - tol::kValue) return false;
        }
    } else {
        fail(ErrorCode::MalformedProblem, "support spec needs a game or an oracle+dictionary");
    }
    if (spec.normalization == SupportSpec::Normalization::TotalEquals) {
        if (std::abs(mu.total() - spec.total) > tol::kValue) return false;
    } else if (spec.normalization == SupportSpec::Normalization::Pin) {
        if (!spec.pin_variable || !spec.oracle)
            fail(ErrorCode::MalformedProblem, "pin normalization needs a variable and an oracle");
        double lhs = 0.0;
        for (int i = 0; i < mu.space()->n(); ++i)
            lhs += mu.atom_values()[static_cast<std::size_t>(i)] *
                   spec.pin_variable->values()[static_cast<std::size_t>(i)];
        if (std::abs(lhs - spec.oracle->eval(*spec.pin_variable)) > tol::kValue) return false;
    }
    return true;
}

Dictionary make_dictionary(SpacePtr space, const std::string& strategy, int count,
                           unsigned seed) {
    const int n = space->n();
    Dictionary d;
    auto push_indicators = [&](bool signed_too) {
        require_enumerable(*space, "make_dictionary");
        const std::uint64_t full = (std::uint64_t{1} << n) - 1;
        for (std::uint64_t mask = 1; mask <= full; ++mask) {
            std::vector<double> values(static_cast<std::size_t>(n), 0.0);
            for (std::uint64_t rest = mask; rest; rest &= rest - 1)
                values[static_cast<std::size_t>(std::countr_zero(rest))] = 1.0;
            d.emplace_back(space, values);
            if (signed_too) {
                for (auto& t : values) t = -t;
                d.emplace_back(space, values);
            }
        }
    };
    if (strategy == "indicators") {
        push_indicators(false);
    } else if (strategy == "signed_indicators") {
        push_indicators(true);
    } else if (strategy == "indicators_plus_constants") {
        push_indicators(false);
        d.push_back(SimpleRandomVariable::constant(space, 1.0));
        d.push_back(SimpleRandomVariable::constant(space, -1.0));
    } else if (strategy == "random_simple") {
        if (count < 1) fail(ErrorCode::ConfigError, "random_simple needs a positive count");
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        for (int k = 0; k < count; ++k) {
            std::vector<double> values(static_cast<std::size_t>(n));
            for (auto& t : values) t = unit(rng);
            d.emplace_back(space, values);
        }
    } else {
        fail(ErrorCode::ConfigError, "unknown dictionary strategy \"" + strategy + "\"");
    }
    return d;
}

}  // namespace refmeasure
