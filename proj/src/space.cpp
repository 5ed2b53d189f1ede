#include "refmeasure/space.hpp"

#include "refmeasure/tolerances.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace refmeasure {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::ZeroTotal: return "ZeroTotal";
        case ErrorCode::NegativeWeight: return "NegativeWeight";
        case ErrorCode::TooManyAtoms: return "TooManyAtoms";
        case ErrorCode::ForeignEvent: return "ForeignEvent";
        case ErrorCode::NullConditioningEvent: return "NullConditioningEvent";
        case ErrorCode::SpaceMismatch: return "SpaceMismatch";
        case ErrorCode::NotAbsolutelyContinuous: return "NotAbsolutelyContinuous";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
        case ErrorCode::EmptyList: return "EmptyList";
        case ErrorCode::MalformedProblem: return "MalformedProblem";
        case ErrorCode::EmptyDictionary: return "EmptyDictionary";
        case ErrorCode::NoExtremum: return "NoExtremum";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::ResolutionExceeded: return "ResolutionExceeded";
        case ErrorCode::InconsistentLayers: return "InconsistentLayers";
        case ErrorCode::NotACapacity: return "NotACapacity";
        case ErrorCode::AllZero: return "AllZero";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::UnknownDemo: return "UnknownDemo";
    }
    return "Unknown";
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) fail(ErrorCode::DomainError, "non-finite value has no rational form");
    // cpp_rational assigns binary floating point exactly.
    return Rational(x);
}

namespace {

/// Strict base-10 integer parse. cpp_int's own string constructor honors
/// C-style prefixes (a leading 0 means octal), which is never wanted here.
Integer decimal_integer(const std::string& text) {
    std::size_t pos = 0;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-'))
        negative = (text[pos++] == '-');
    if (pos >= text.size()) throw std::invalid_argument("empty integer literal");
    for (std::size_t i = pos; i < text.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(text[i])))
            throw std::invalid_argument("non-digit in integer literal");
    while (pos + 1 < text.size() && text[pos] == '0') ++pos;
    Integer value(text.substr(pos));
    return negative ? -value : value;
}

}  // namespace

Rational parse_rational(const std::string& text) {
    const auto bad = [&] {
        fail(ErrorCode::ConfigError, "cannot parse rational from \"" + text + "\"");
    };
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
            s.end());
    if (!s.empty() && s.front() == '+') s.erase(s.begin());
    if (s.empty()) bad();
    const auto slash = s.find('/');
    try {
        if (slash != std::string::npos) {
            Integer num = decimal_integer(s.substr(0, slash));
            Integer den = decimal_integer(s.substr(slash + 1));
            if (den == 0) bad();
            return Rational(num, den);
        }
        if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
            s.find('E') == std::string::npos) {
            return Rational(decimal_integer(s));
        }
    } catch (const std::exception&) {
        bad();
    }
    // Decimal literal: exact base-10 semantics, optional exponent.
    bool negative = false;
    std::size_t pos = 0;
    if (s[pos] == '+' || s[pos] == '-') negative = (s[pos++] == '-');
    std::string digits;
    long frac_digits = 0;
    bool seen_dot = false, seen_digit = false;
    for (; pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.');
         ++pos) {
        if (s[pos] == '.') {
            if (seen_dot) bad();
            seen_dot = true;
        } else {
            digits.push_back(s[pos]);
            seen_digit = true;
            if (seen_dot) ++frac_digits;
        }
    }
    if (!seen_digit) bad();
    long exponent = 0;
    if (pos < s.size()) {
        if (s[pos] != 'e' && s[pos] != 'E') bad();
        try {
            std::size_t used = 0;
            exponent = std::stol(s.substr(pos + 1), &used);
            if (used != s.size() - pos - 1) bad();
        } catch (const std::exception&) {
            bad();
        }
    }
    Integer num = decimal_integer(digits.empty() ? "0" : digits);
    if (negative) num = -num;
    const long net = exponent - frac_digits;
    Rational r(num, 1);
    Integer ten(10);
    for (long i = 0; i < std::labs(net); ++i) {
        if (net > 0)
            r *= ten;
        else
            r /= ten;
    }
    return r;
}

std::string format_rational(const Rational& r) {
    std::ostringstream out;
    out << numerator(r);
    if (denominator(r) != 1) out << "/" << denominator(r);
    return out.str();
}

Rational dyadic(int t) {
    if (t < 0) fail(ErrorCode::DomainError, "dyadic exponent must be nonnegative");
    return Rational(Integer(1), Integer(1) << t);
}

FiniteSpace::FiniteSpace(std::vector<Rational> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) fail(ErrorCode::ZeroTotal, "a space needs at least one atom");
    Rational total = 0;
    for (const auto& w : weights_) {
        if (w < 0) fail(ErrorCode::NegativeWeight, "atom weights must be nonnegative");
        total += w;
    }
    if (total != 1) fail(ErrorCode::ZeroTotal, "atom weights must sum to exactly 1");
    uniform_ = std::all_of(weights_.begin(), weights_.end(),
                           [&](const Rational& w) { return w == weights_.front(); });
}

SpacePtr build_space_uniform(int n) {
    if (n < 1) fail(ErrorCode::ZeroTotal, "uniform space needs n >= 1");
    std::vector<Rational> w(static_cast<std::size_t>(n), Rational(1, n));
    return std::make_shared<FiniteSpace>(std::move(w));
}

SpacePtr build_space_weighted(std::vector<Rational> weights) {
    return std::make_shared<FiniteSpace>(std::move(weights));
}

bool require_enumerable(const FiniteSpace& space, const char* operation) {
    if (space.n() > FiniteSpace::kEnumerationCap) {
        fail(ErrorCode::TooManyAtoms, std::string(operation) + " enumerates all events; n = " +
                                          std::to_string(space.n()) + " exceeds the cap of " +
                                          std::to_string(FiniteSpace::kEnumerationCap));
    }
    return space.n() > FiniteSpace::kEnumerationWarn;
}

void require_pair_scannable(const FiniteSpace& space, const char* operation) {
    if (space.n() > FiniteSpace::kPairScanCap) {
        fail(ErrorCode::TooManyAtoms, std::string(operation) + " scans event pairs; n = " +
                                          std::to_string(space.n()) + " exceeds the cap of " +
                                          std::to_string(FiniteSpace::kPairScanCap));
    }
}

Event Event::of(std::vector<std::uint32_t> indices) {
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    Event e;
    e.idx_ = std::move(indices);
    return e;
}

Event Event::from_mask(std::uint64_t mask, int n) {
    Event e;
    for (int i = 0; i < n; ++i)
        if (mask >> i & 1) e.idx_.push_back(static_cast<std::uint32_t>(i));
    return e;
}

Event Event::full(int n) {
    Event e;
    e.idx_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) e.idx_[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(i);
    return e;
}

bool Event::contains(std::uint32_t atom) const {
    return std::binary_search(idx_.begin(), idx_.end(), atom);
}

std::uint64_t Event::mask(int n) const {
    std::uint64_t m = 0;
    for (auto i : idx_) {
        if (static_cast<int>(i) >= n)
            fail(ErrorCode::ForeignEvent, "atom index " + std::to_string(i) +
                                              " outside a space with n = " + std::to_string(n));
        m |= std::uint64_t{1} << i;
    }
    return m;
}

Event Event::complement(int n) const {
    Event e;
    std::size_t k = 0;
    for (int i = 0; i < n; ++i) {
        if (k < idx_.size() && idx_[k] == static_cast<std::uint32_t>(i)) {
            ++k;
            continue;
        }
        e.idx_.push_back(static_cast<std::uint32_t>(i));
    }
    if (k != idx_.size()) fail(ErrorCode::ForeignEvent, "event has atoms outside the space");
    return e;
}

void require_event(const FiniteSpace& space, const Event& event) {
    if (!event.indices().empty() &&
        static_cast<int>(event.indices().back()) >= space.n()) {
        fail(ErrorCode::ForeignEvent,
             "atom index " + std::to_string(event.indices().back()) +
                 " outside a space with n = " + std::to_string(space.n()));
    }
}

ProbabilityCharge::ProbabilityCharge(SpacePtr space, std::vector<Rational> masses)
    : space_(std::move(space)), masses_(std::move(masses)) {
    if (static_cast<int>(masses_.size()) != space_->n())
        fail(ErrorCode::SpaceMismatch, "mass vector length differs from atom count");
    Rational total = 0;
    for (const auto& m : masses_) {
        if (m < 0) fail(ErrorCode::NegativeWeight, "probability masses must be nonnegative");
        total += m;
    }
    if (total != 1) fail(ErrorCode::ZeroTotal, "probability masses must sum to exactly 1");
}

ProbabilityCharge::ProbabilityCharge(SpacePtr space, std::vector<Rational> masses, bool)
    : space_(std::move(space)), masses_(std::move(masses)) {}

ProbabilityCharge ProbabilityCharge::from_reals(SpacePtr space, const std::vector<double>& values) {
    if (static_cast<int>(values.size()) != space->n())
        fail(ErrorCode::SpaceMismatch, "mass vector length differs from atom count");
    std::vector<Rational> masses;
    masses.reserve(values.size());
    Rational total = 0;
    for (double v : values) {
        if (v < 0) fail(ErrorCode::NegativeWeight, "probability masses must be nonnegative");
        masses.push_back(rational_from_double(v));
        total += masses.back();
    }
    const double slack = std::abs(to_double(total - 1));
    if (slack > tol::kProbabilityTotal)
        fail(ErrorCode::ZeroTotal, "probability masses from reals must total 1 within 1e-12");
    return ProbabilityCharge(std::move(space), std::move(masses), true);
}

Rational ProbabilityCharge::prob(const Event& event) const {
    require_event(*space_, event);
    Rational total = 0;
    for (auto i : event.indices()) total += masses_[i];
    return total;
}

std::vector<double> ProbabilityCharge::as_reals() const {
    std::vector<double> out;
    out.reserve(masses_.size());
    for (const auto& m : masses_) out.push_back(to_double(m));
    return out;
}

ProbabilityCharge declared_probability(SpacePtr space) {
    auto weights = space->weights();
    return ProbabilityCharge(std::move(space), std::move(weights));
}

Rational event_probability(const FiniteSpace& space, const Event& event) {
    require_event(space, event);
    Rational total = 0;
    for (auto i : event.indices()) total += space.weight(static_cast<int>(i));
    return total;
}

ProbabilityCharge conditional(const ProbabilityCharge& p, const Event& a) {
    const Rational pa = p.prob(a);
    if (pa == 0) fail(ErrorCode::NullConditioningEvent, "conditioning event has probability 0");
    std::vector<Rational> masses(p.masses().size(), Rational(0));
    for (auto i : a.indices()) masses[i] = p.masses()[i] / pa;
    return ProbabilityCharge(p.space(), std::move(masses));
}

Event Refinement::lift(const Event& coarse) const {
    std::vector<std::uint32_t> idx;
    idx.reserve(coarse.size() * static_cast<std::size_t>(factor));
    for (auto i : coarse.indices())
        for (int j = 0; j < factor; ++j)
            idx.push_back(i * static_cast<std::uint32_t>(factor) + static_cast<std::uint32_t>(j));
    return Event::of(std::move(idx));
}

Refinement refine(SpacePtr space, int factor) {
    if (factor < 1) fail(ErrorCode::DomainError, "refinement factor must be >= 1");
    std::vector<Rational> weights;
    weights.reserve(static_cast<std::size_t>(space->n()) * static_cast<std::size_t>(factor));
    for (const auto& w : space->weights())
        for (int j = 0; j < factor; ++j) weights.push_back(w / factor);
    Refinement r;
    r.space = build_space_weighted(std::move(weights));
    r.factor = factor;
    return r;
}

}  // namespace refmeasure
