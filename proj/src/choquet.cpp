#include "refmeasure/choquet.hpp"

#include "refmeasure/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace refmeasure {

double choquet_integral(const Game& v, const SimpleRandomVariable& x) {
    if (!v.space()->same_space(*x.space()))
        fail(ErrorCode::SpaceMismatch, "game and variable live on different spaces");
    const int n = v.n();
    std::vector<std::pair<double, int>> vals;
    vals.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) vals.emplace_back(x.values()[static_cast<std::size_t>(i)], i);
    std::sort(vals.begin(), vals.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    double integral = 0.0;
    std::uint64_t mask = 0;
    std::size_t i = 0;
    while (i < vals.size()) {
        const double y = vals[i].first;
        while (i < vals.size() && vals[i].first == y)
            mask |= std::uint64_t{1} << vals[i++].second;
        if (i < vals.size())
            integral += (y - vals[i].first) * v.value_mask(mask);
        else
            integral += y * v.value_mask(mask);
    }
    return integral;
}

namespace {

/// Exact distribution of X under P: ascending values with positive masses.
std::vector<std::pair<double, Rational>> distribution(const ProbabilityCharge& p,
                                                      const SimpleRandomVariable& x) {
    if (!p.space()->same_space(*x.space()))
        fail(ErrorCode::SpaceMismatch, "probability and variable live on different spaces");
    std::map<double, Rational> dist;
    for (int i = 0; i < p.space()->n(); ++i) {
        const Rational& m = p.masses()[static_cast<std::size_t>(i)];
        if (m != 0) dist[x.values()[static_cast<std::size_t>(i)]] += m;
    }
    return {dist.begin(), dist.end()};
}

double quantile(const ProbabilityCharge& p, const SimpleRandomVariable& x, const Rational& level,
                bool strict) {
    const auto dist = distribution(p, x);
    Rational cum = 0;
    for (const auto& [value, mass] : dist) {
        cum += mass;
        if (strict ? cum > level : cum >= level) return value;
    }
    return dist.back().first;
}

}  // namespace

double evaluate_riskmetric(const RiskMetricSpec& spec, const ProbabilityCharge& p,
                           const SimpleRandomVariable& x) {
    switch (spec.family) {
        case RiskFamily::Var:
        case RiskFamily::Rvar: {
            if (spec.level <= 0 || spec.level >= 1)
                fail(ErrorCode::ParameterOutOfRange, "quantile level must lie in (0, 1)");
            return quantile(p, x, spec.level, spec.family == RiskFamily::Rvar);
        }
        case RiskFamily::Es: {
            if (spec.level < 0 || spec.level >= 1)
                fail(ErrorCode::ParameterOutOfRange, "es beta must lie in [0, 1)");
            const Rational beta = spec.level;
            const Rational tail = 1 - beta;
            const auto dist = distribution(p, x);
            double total = 0.0;
            Rational prev = 0;
            for (const auto& [value, mass] : dist) {
                const Rational cum = prev + mass;
                const Rational lo = prev > beta ? prev : beta;
                if (cum > lo) total += value * to_double((cum - lo) / tail);
                prev = cum;
            }
            return total;
        }
        case RiskFamily::Entropic: {
            if (!(spec.alpha > 0))
                fail(ErrorCode::ParameterOutOfRange, "entropic alpha must be positive");
            const auto dist = distribution(p, x);
            double top = dist.back().first;
            double sum = 0.0;
            for (const auto& [value, mass] : dist)
                sum += to_double(mass) * std::exp(spec.alpha * (value - top));
            return top + std::log(sum) / spec.alpha;
        }
    }
    fail(ErrorCode::ConfigError, "unknown riskmetric family");
}

FunctionalOracle riskmetric_oracle(const RiskMetricSpec& spec, ProbabilityCharge p) {
    std::ostringstream tag;
    switch (spec.family) {
        case RiskFamily::Var: tag << "var(" << format_rational(spec.level) << ")"; break;
        case RiskFamily::Rvar: tag << "rvar(" << format_rational(spec.level) << ")"; break;
        case RiskFamily::Es: tag << "es(" << format_rational(spec.level) << ")"; break;
        case RiskFamily::Entropic: tag << "entropic(" << spec.alpha << ")"; break;
    }
    auto shared = std::make_shared<ProbabilityCharge>(std::move(p));
    return {[spec, shared](const SimpleRandomVariable& x) {
                return evaluate_riskmetric(spec, *shared, x);
            },
            tag.str()};
}

FunctionalOracle choquet_oracle(Game v) {
    const std::string tag = "choquet(" + v.tag() + ")";
    return {[v](const SimpleRandomVariable& x) { return choquet_integral(v, x); }, tag};
}

FunctionalOracle expectation_oracle(ProbabilityCharge p) {
    auto shared = std::make_shared<ProbabilityCharge>(std::move(p));
    return {[shared](const SimpleRandomVariable& x) {
                double s = 0.0;
                for (int i = 0; i < shared->space()->n(); ++i)
                    s += to_double(shared->masses()[static_cast<std::size_t>(i)]) *
                         x.values()[static_cast<std::size_t>(i)];
                return s;
            },
            "expectation"};
}

ComonotonicityResult comonotonic_additivity_test(const FunctionalOracle& phi, SpacePtr space,
                                                 int trials, unsigned seed) {
    const int n = space->n();
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> base(-1.0, 1.0);
    for (int t = 0; t < trials; ++t) {
        std::vector<double> z(static_cast<std::size_t>(n));
        for (auto& v : z) v = unit(rng);
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return z[static_cast<std::size_t>(a)] < z[static_cast<std::size_t>(b)]; });
        std::vector<double> xv(static_cast<std::size_t>(n)), yv(static_cast<std::size_t>(n));
        double f = base(rng), g = base(rng);
        for (std::size_t k = 0; k < order.size(); ++k) {
            // Atoms sharing a Z value must share function values.
            if (k > 0 && z[static_cast<std::size_t>(order[k])] >
                             z[static_cast<std::size_t>(order[k - 1])]) {
                f += unit(rng);
                g += unit(rng);
            }
            xv[static_cast<std::size_t>(order[k])] = f;
            yv[static_cast<std::size_t>(order[k])] = g;
        }
        SimpleRandomVariable x(space, xv), y(space, yv);
        std::vector<double> sum(static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = xv[i] + yv[i];
        SimpleRandomVariable xy(space, sum);
        if (std::abs(phi.eval(xy) - phi.eval(x) - phi.eval(y)) > tol::kFunctional)
            return {false, PairWitness{std::move(x), std::move(y)}};
    }
    return {true, std::nullopt};
}

namespace {

/// Visits value vectors equidistributed with X under P (exact mass matching).
/// The visitor returns false to stop early; null atoms keep their original
/// values since they cannot affect the distribution.
bool enumerate_equidistributed(const ProbabilityCharge& p, const SimpleRandomVariable& x,
                               const std::function<bool(const std::vector<double>&)>& visit) {
    const int n = p.space()->n();
    std::vector<std::uint32_t> atoms;
    std::map<double, Rational> dist;
    for (int i = 0; i < n; ++i) {
        const Rational& m = p.masses()[static_cast<std::size_t>(i)];
        if (m == 0) continue;
        atoms.push_back(static_cast<std::uint32_t>(i));
        dist[x.values()[static_cast<std::size_t>(i)]] += m;
    }
    std::vector<double> values;
    std::vector<Rational> remaining;
    for (const auto& [v, m] : dist) {
        values.push_back(v);
        remaining.push_back(m);
    }
    std::vector<double> assigned = x.values();
    std::function<bool(std::size_t)> dfs = [&](std::size_t pos) -> bool {
        if (pos == atoms.size()) return visit(assigned);
        const Rational& w = p.masses()[atoms[pos]];
        for (std::size_t j = 0; j < values.size(); ++j) {
            if (remaining[j] < w) continue;
            remaining[j] -= w;
            assigned[atoms[pos]] = values[j];
            const bool keep = dfs(pos + 1);
            remaining[j] += w;
            if (!keep) return false;
        }
        return true;
    };
    return dfs(0);
}

}  // namespace

InvarianceTestResult functional_invariance_test(const FunctionalOracle& phi,
                                                const ProbabilityCharge& p,
                                                const Dictionary& dictionary, unsigned seed) {
    if (dictionary.empty()) fail(ErrorCode::EmptyDictionary, "dictionary must be nonempty");
    const int n = p.space()->n();
    const bool uniform_masses =
        std::all_of(p.masses().begin(), p.masses().end(),
                    [&](const Rational& m) { return m == p.masses().front(); });
    for (const auto& x : dictionary) {
        if (!x.space()->same_space(*p.space()))
            fail(ErrorCode::SpaceMismatch, "dictionary variable on a different space");
        const double base = phi.eval(x);
        std::optional<PairWitness> witness;
        if (uniform_masses) {
            std::vector<double> vals = x.values();
            std::sort(vals.begin(), vals.end());
            auto check = [&](const std::vector<double>& candidate) {
                SimpleRandomVariable y(p.space(), candidate);
                if (std::abs(phi.eval(y) - base) > tol::kValue) {
                    witness = PairWitness{x, std::move(y)};
                    return false;
                }
                return true;
            };
            if (n <= 7) {
                do {
                    if (!check(vals)) break;
                } while (std::next_permutation(vals.begin(), vals.end()));
            } else {
                std::mt19937 rng(seed);
                for (int t = 0; t < 200; ++t) {
                    std::shuffle(vals.begin(), vals.end(), rng);
                    if (!check(vals)) break;
                }
            }
        } else {
            require_pair_scannable(*p.space(), "functional_invariance_test");
            enumerate_equidistributed(p, x, [&](const std::vector<double>& candidate) {
                SimpleRandomVariable y(p.space(), candidate);
                if (std::abs(phi.eval(y) - base) > tol::kValue) {
                    witness = PairWitness{x, std::move(y)};
                    return false;
                }
                return true;
            });
        }
        if (witness) return {false, std::move(witness)};
    }
    return {true, std::nullopt};
}

}  // namespace refmeasure
