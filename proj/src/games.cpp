#include "refmeasure/games.hpp"

#include "refmeasure/tolerances.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace refmeasure {

DistortionFunction entropic_distortion(double alpha) {
    if (!(alpha > 0)) fail(ErrorCode::ParameterOutOfRange, "entropic alpha must be positive");
    std::ostringstream tag;
    tag << "entropic(" << alpha << ")";
    const double scale = std::expm1(alpha);
    return {[alpha, scale](const Rational& x) { return std::log1p(scale * to_double(x)) / alpha; },
            tag.str()};
}

DistortionFunction es_distortion(const Rational& beta) {
    if (beta < 0 || beta >= 1)
        fail(ErrorCode::ParameterOutOfRange, "es beta must lie in [0, 1)");
    const Rational cap = 1 - beta;
    return {[cap](const Rational& x) { return x >= cap ? 1.0 : to_double(x / cap); },
            "es(" + format_rational(beta) + ")"};
}

DistortionFunction var_distortion(const Rational& gamma) {
    if (gamma <= 0 || gamma >= 1)
        fail(ErrorCode::ParameterOutOfRange, "var gamma must lie in (0, 1)");
    const Rational threshold = 1 - gamma;
    return {[threshold](const Rational& x) { return x > threshold ? 1.0 : 0.0; },
            "var(" + format_rational(gamma) + ")"};
}

DistortionFunction rvar_distortion(const Rational& gamma) {
    if (gamma <= 0 || gamma >= 1)
        fail(ErrorCode::ParameterOutOfRange, "rvar gamma must lie in (0, 1)");
    const Rational threshold = 1 - gamma;
    return {[threshold](const Rational& x) { return x >= threshold ? 1.0 : 0.0; },
            "rvar(" + format_rational(gamma) + ")"};
}

DistortionFunction power_distortion(double exponent) {
    if (!(exponent > 0)) fail(ErrorCode::ParameterOutOfRange, "power exponent must be positive");
    std::ostringstream tag;
    tag << "power(" << exponent << ")";
    return {[exponent](const Rational& x) { return std::pow(to_double(x), exponent); }, tag.str()};
}

struct Game::LazyEval {
    std::function<double(std::uint64_t)> fn;
    mutable std::mutex lock;
    mutable std::unordered_map<std::uint64_t, double> memo;

    double at(std::uint64_t mask) const {
        {
            std::lock_guard<std::mutex> guard(lock);
            auto it = memo.find(mask);
            if (it != memo.end()) return it->second;
        }
        const double v = fn(mask);
        std::lock_guard<std::mutex> guard(lock);
        memo.emplace(mask, v);
        return v;
    }
};

Game Game::from_table(SpacePtr space, std::vector<double> table, std::string tag) {
    if (space->n() > kTableCap)
        fail(ErrorCode::TooManyAtoms, "full game tables are limited to n = 16");
    if (table.size() != (std::size_t{1} << space->n()))
        fail(ErrorCode::SpaceMismatch, "game table must have exactly 2^n entries");
    for (double v : table)
        if (!std::isfinite(v)) fail(ErrorCode::DomainError, "game values must be finite");
    if (table[0] != 0.0) fail(ErrorCode::DomainError, "a game must vanish at the empty event");
    Game g;
    g.space_ = std::move(space);
    g.table_ = std::make_shared<const std::vector<double>>(std::move(table));
    g.tag_ = std::move(tag);
    return g;
}

Game Game::from_closure(SpacePtr space, std::function<double(std::uint64_t)> eval,
                        std::string tag) {
    if (space->n() <= kTableCap) {
        const std::size_t size = std::size_t{1} << space->n();
        std::vector<double> table(size);
        for (std::size_t mask = 0; mask < size; ++mask) table[mask] = eval(mask);
        return from_table(std::move(space), std::move(table), std::move(tag));
    }
    if (space->n() > 64) fail(ErrorCode::TooManyAtoms, "event masks are limited to 64 atoms");
    if (eval(0) != 0.0) fail(ErrorCode::DomainError, "a game must vanish at the empty event");
    Game g;
    g.space_ = std::move(space);
    g.lazy_ = std::make_shared<LazyEval>();
    g.lazy_->fn = std::move(eval);
    g.tag_ = std::move(tag);
    return g;
}

double Game::value_mask(std::uint64_t mask) const {
    if (table_) {
        if (mask >= table_->size()) fail(ErrorCode::ForeignEvent, "event mask outside the space");
        return (*table_)[mask];
    }
    if (mask >> n()) fail(ErrorCode::ForeignEvent, "event mask outside the space");
    return lazy_->at(mask);
}

double Game::value(const Event& a) const {
    require_event(*space_, a);
    return value_mask(a.mask(n()));
}

double Game::total() const { return value_mask((n() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n()) - 1)); }

const std::vector<double>& Game::table() const {
    if (!table_) fail(ErrorCode::TooManyAtoms, "game is not materialized as a table");
    return *table_;
}

void Game::attach_reference(ProbabilityCharge p) {
    if (!p.space()->same_space(*space_))
        fail(ErrorCode::SpaceMismatch, "reference probability lives on a different space");
    reference_ = std::make_shared<const ProbabilityCharge>(std::move(p));
}

std::vector<Rational> probability_table(const ProbabilityCharge& p) {
    const int n = p.space()->n();
    if (n > Game::kTableCap)
        fail(ErrorCode::TooManyAtoms, "probability tables are limited to n = 16");
    const std::size_t size = std::size_t{1} << n;
    std::vector<Rational> probs(size);
    probs[0] = 0;
    for (std::size_t mask = 1; mask < size; ++mask) {
        const int low = std::countr_zero(mask);
        probs[mask] = probs[mask & (mask - 1)] + p.masses()[static_cast<std::size_t>(low)];
    }
    return probs;
}

static double apply_distortion(const DistortionFunction& h, const Rational& x) {
    const double v = h.eval(x);
    if (!std::isfinite(v))
        fail(ErrorCode::DomainError,
             "distortion undefined at probability " + format_rational(x));
    return v;
}

Game build_distortion(const DistortionFunction& h, const ProbabilityCharge& p) {
    if (apply_distortion(h, Rational(0)) != 0.0)
        fail(ErrorCode::DomainError, "distortion must map 0 to 0");
    const int n = p.space()->n();
    Game g = [&] {
        if (n <= Game::kTableCap) {
            const auto probs = probability_table(p);
            std::vector<double> table(probs.size());
            for (std::size_t mask = 0; mask < probs.size(); ++mask)
                table[mask] = apply_distortion(h, probs[mask]);
            return Game::from_table(p.space(), std::move(table), h.tag);
        }
        const auto masses = p.masses();
        return Game::from_closure(
            p.space(),
            [h, masses](std::uint64_t mask) {
                Rational prob = 0;
                for (std::uint64_t rest = mask; rest; rest &= rest - 1)
                    prob += masses[static_cast<std::size_t>(std::countr_zero(rest))];
                return apply_distortion(h, prob);
            },
            h.tag);
    }();
    g.attach_reference(p);
    return g;
}

Game build_family(const FamilySpec& family, const ProbabilityCharge& p) {
    switch (family.kind) {
        case FamilySpec::Kind::Entropic:
            return build_distortion(entropic_distortion(family.alpha), p);
        case FamilySpec::Kind::Es: return build_distortion(es_distortion(family.level), p);
        case FamilySpec::Kind::Var: return build_distortion(var_distortion(family.level), p);
        case FamilySpec::Kind::Rvar: return build_distortion(rvar_distortion(family.level), p);
    }
    fail(ErrorCode::ConfigError, "unknown game family");
}

static std::vector<double> materialize(const Game& v, const char* operation) {
    require_enumerable(*v.space(), operation);
    if (v.materialized()) return v.table();
    const std::size_t size = std::size_t{1} << v.n();
    std::vector<double> table(size);
    for (std::size_t mask = 0; mask < size; ++mask) table[mask] = v.value_mask(mask);
    return table;
}

PropertyReport classify_properties(const Game& v) {
    require_pair_scannable(*v.space(), "classify_properties");
    const int n = v.n();
    const auto table = materialize(v, "classify_properties");
    const std::uint64_t size = std::uint64_t{1} << n;
    PropertyReport report;

    for (std::uint64_t mask = 1; mask < size && report.monotone; ++mask) {
        for (std::uint64_t sub = (mask - 1) & mask; ; sub = (sub - 1) & mask) {
            if (table[sub] > table[mask] + tol::kValue) {
                report.monotone = false;
                report.monotone_witness =
                    PropertyWitness{Event::from_mask(sub, n), Event::from_mask(mask, n)};
                break;
            }
            if (sub == 0) break;
        }
    }

    for (std::uint64_t a = 1; a < size; ++a) {
        if (!report.superadditive && !report.subadditive) break;
        const std::uint64_t rest = (size - 1) ^ a;
        for (std::uint64_t b = rest; b; b = (b - 1) & rest) {
            const double lhs = table[a | b], rhs = table[a] + table[b];
            if (report.superadditive && lhs < rhs - tol::kValue) {
                report.superadditive = false;
                report.superadditive_witness =
                    PropertyWitness{Event::from_mask(a, n), Event::from_mask(b, n)};
            }
            if (report.subadditive && lhs > rhs + tol::kValue) {
                report.subadditive = false;
                report.subadditive_witness =
                    PropertyWitness{Event::from_mask(a, n), Event::from_mask(b, n)};
            }
            if (!report.superadditive && !report.subadditive) break;
        }
    }

    for (std::uint64_t a = 0; a < size && report.submodular; ++a) {
        for (std::uint64_t b = a + 1; b < size; ++b) {
            if (table[a] + table[b] < table[a & b] + table[a | b] - tol::kValue) {
                report.submodular = false;
                report.submodular_witness =
                    PropertyWitness{Event::from_mask(a, n), Event::from_mask(b, n)};
                break;
            }
        }
    }

    const ProbabilityCharge reference =
        v.reference() ? *v.reference() : declared_probability(v.space());
    auto invariance = check_invariance(v, reference);
    report.invariant_wrt_p = invariance.invariant;
    report.invariance_witness = std::move(invariance.witness);
    return report;
}

InvarianceResult check_invariance(const Game& v, const ProbabilityCharge& p) {
    if (!v.space()->same_space(*p.space()))
        fail(ErrorCode::SpaceMismatch, "game and probability live on different spaces");
    require_enumerable(*v.space(), "check_invariance");
    const int n = v.n();
    const std::uint64_t size = std::uint64_t{1} << n;
    struct Extremes {
        double lo, hi;
        std::uint64_t lo_mask, hi_mask;
    };
    std::map<Rational, Extremes> groups;
    for (std::uint64_t mask = 0; mask < size; ++mask) {
        Rational prob = 0;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1) prob += p.masses()[static_cast<std::size_t>(i)];
        const double val = v.value_mask(mask);
        auto [it, fresh] = groups.try_emplace(prob, Extremes{val, val, mask, mask});
        if (!fresh) {
            if (val < it->second.lo) {
                it->second.lo = val;
                it->second.lo_mask = mask;
            }
            if (val > it->second.hi) {
                it->second.hi = val;
                it->second.hi_mask = mask;
            }
        }
    }
    for (const auto& [prob, ext] : groups) {
        if (ext.hi - ext.lo > tol::kValue) {
            return {false, PropertyWitness{Event::from_mask(ext.lo_mask, n),
                                           Event::from_mask(ext.hi_mask, n)}};
        }
    }
    return {true, std::nullopt};
}

Game conjugate_game(const Game& v) {
    const int n = v.n();
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    if (v.materialized()) {
        const auto& table = v.table();
        const double total = table[full];
        std::vector<double> out(table.size());
        for (std::uint64_t mask = 0; mask <= full; ++mask)
            out[mask] = total - table[full ^ mask];
        Game g = Game::from_table(v.space(), std::move(out), "conjugate(" + v.tag() + ")");
        if (v.reference()) g.attach_reference(*v.reference());
        return g;
    }
    Game copy = v;
    const double total = v.total();
    Game g = Game::from_closure(
        v.space(), [copy, total, full](std::uint64_t mask) { return total - copy.value_mask(full ^ mask); },
        "conjugate(" + v.tag() + ")");
    if (v.reference()) g.attach_reference(*v.reference());
    return g;
}

Game envelope(EnvelopeMode mode, const std::vector<SignedCharge>& charges) {
    if (charges.empty()) fail(ErrorCode::EmptyList, "envelope needs at least one charge");
    const SpacePtr space = charges.front().space();
    for (const auto& c : charges)
        if (!c.space()->same_space(*space))
            fail(ErrorCode::SpaceMismatch, "envelope charges live on different spaces");
    const int n = space->n();
    const char* tag = mode == EnvelopeMode::Lower ? "lower_envelope" : "upper_envelope";
    if (n <= Game::kTableCap) {
        const std::size_t size = std::size_t{1} << n;
        std::vector<double> table(size, mode == EnvelopeMode::Lower
                                            ? std::numeric_limits<double>::infinity()
                                            : -std::numeric_limits<double>::infinity());
        std::vector<double> sums(size);
        for (const auto& c : charges) {
            sums[0] = 0.0;
            for (std::size_t mask = 1; mask < size; ++mask)
                sums[mask] = sums[mask & (mask - 1)] +
                             c.atom_values()[static_cast<std::size_t>(std::countr_zero(mask))];
            for (std::size_t mask = 0; mask < size; ++mask)
                table[mask] = mode == EnvelopeMode::Lower ? std::min(table[mask], sums[mask])
                                                          : std::max(table[mask], sums[mask]);
        }
        return Game::from_table(space, std::move(table), tag);
    }
    std::vector<std::vector<double>> values;
    values.reserve(charges.size());
    for (const auto& c : charges) values.push_back(c.atom_values());
    return Game::from_closure(
        space,
        [values, mode](std::uint64_t mask) {
            double best = 0.0;
            bool first = true;
            for (const auto& atoms : values) {
                double s = 0.0;
                for (std::uint64_t rest = mask; rest; rest &= rest - 1)
                    s += atoms[static_cast<std::size_t>(std::countr_zero(rest))];
                if (first)
                    best = s;
                else
                    best = mode == EnvelopeMode::Lower ? std::min(best, s) : std::max(best, s);
                first = false;
            }
            return best;
        },
        tag);
}

}  // namespace refmeasure
