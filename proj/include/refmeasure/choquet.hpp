#pragma once

#include "refmeasure/games.hpp"
#include "refmeasure/random_variable.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace refmeasure {

/// Black-box functional on simple random variables. Must be deterministic.
struct FunctionalOracle {
    std::function<double(const SimpleRandomVariable&)> eval;
    std::string tag;
};

using Dictionary = std::vector<SimpleRandomVariable>;

/// Signed Choquet integral of X against v, via the level-set sum over the
/// distinct values of X. Negative values follow the asymmetric convention:
/// integral = sum_{i<m} (y_i - y_{i+1}) v({X >= y_i}) + y_m v(full) for the
/// distinct values y_1 > ... > y_m.
double choquet_integral(const Game& v, const SimpleRandomVariable& x);

enum class RiskFamily { Var, Rvar, Es, Entropic };

struct RiskMetricSpec {
    RiskFamily family;
    Rational level = 0;  // var/rvar: gamma, es: beta
    double alpha = 0.0;  // entropic
};

/// Closed-form evaluation on the exact finite distribution of X under P.
/// VaR is the left quantile inf{x : P(X <= x) >= gamma}; rVaR uses the strict
/// version of the same threshold; ES integrates the piecewise-constant
/// quantile exactly; entropic is (1/alpha) log E_P[exp(alpha X)].
double evaluate_riskmetric(const RiskMetricSpec& spec, const ProbabilityCharge& p,
                           const SimpleRandomVariable& x);

FunctionalOracle riskmetric_oracle(const RiskMetricSpec& spec, ProbabilityCharge p);
FunctionalOracle choquet_oracle(Game v);
FunctionalOracle expectation_oracle(ProbabilityCharge p);

struct PairWitness {
    SimpleRandomVariable x;
    SimpleRandomVariable y;
};

struct ComonotonicityResult {
    bool passes = true;
    std::optional<PairWitness> witness;
};

/// Samples comonotone pairs (f(Z), g(Z)) with nondecreasing step functions
/// f, g and random Z, and checks phi(X+Y) = phi(X) + phi(Y) within 1e-7.
ComonotonicityResult comonotonic_additivity_test(const FunctionalOracle& phi, SpacePtr space,
                                                 int trials, unsigned seed);

struct InvarianceTestResult {
    bool invariant = true;
    std::optional<PairWitness> witness;
};

/// For each dictionary element, compares phi across variables with the same
/// P-distribution (within 1e-9). Uniform spaces enumerate permutations for
/// n <= 7 and fall back to seeded sampling above; general spaces enumerate
/// exact mass-matching rearrangements.
InvarianceTestResult functional_invariance_test(const FunctionalOracle& phi,
                                                const ProbabilityCharge& p,
                                                const Dictionary& dictionary,
                                                unsigned seed = 42);

}  // namespace refmeasure
